// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// fft.cpp

#include "fdlp/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace fdlp::fft {
namespace {

enum class Kind { kForward, kBackward, kRealForward, kDct2, kDct3 };

// Owns every plan for the lifetime of the process.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(Kind kind, std::size_t n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(kind, n);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    // Planning with FFTW_ESTIMATE never touches the data, but FFTW still
    // wants arrays of the right size.
    const int len = static_cast<int>(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = nullptr;
    switch (kind) {
      case Kind::kForward:
      case Kind::kBackward: {
        auto* in = fftw_alloc_complex(n);
        auto* out = fftw_alloc_complex(n);
        plan = fftw_plan_dft_1d(len, in, out,
                                kind == Kind::kForward ? FFTW_FORWARD : FFTW_BACKWARD,
                                flags);
        fftw_free(in);
        fftw_free(out);
        break;
      }
      case Kind::kRealForward: {
        auto* in = fftw_alloc_real(n);
        auto* out = fftw_alloc_complex(n / 2 + 1);
        plan = fftw_plan_dft_r2c_1d(len, in, out, flags);
        fftw_free(in);
        fftw_free(out);
        break;
      }
      case Kind::kDct2:
      case Kind::kDct3: {
        auto* in = fftw_alloc_real(n);
        auto* out = fftw_alloc_real(n);
        plan = fftw_plan_r2r_1d(len, in, out,
                                kind == Kind::kDct2 ? FFTW_REDFT10 : FFTW_REDFT01,
                                flags);
        fftw_free(in);
        fftw_free(out);
        break;
      }
    }
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<Kind, std::size_t>, fftw_plan> plans_;
};

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

std::vector<Complex> complex_transform(std::span<const Complex> x, Kind kind) {
  std::vector<Complex> in(x.begin(), x.end());
  std::vector<Complex> out(x.size());
  if (x.empty()) return out;
  fftw_execute_dft(PlanCache::instance().get(kind, x.size()), as_fftw(in.data()),
                   as_fftw(out.data()));
  return out;
}

std::vector<double> real_transform(std::span<const double> x, Kind kind) {
  std::vector<double> in(x.begin(), x.end());
  std::vector<double> out(x.size());
  if (x.empty()) return out;
  fftw_execute_r2r(PlanCache::instance().get(kind, x.size()), in.data(), out.data());
  return out;
}

}  // namespace

std::vector<Complex> forward(std::span<const Complex> x) {
  return complex_transform(x, Kind::kForward);
}

std::vector<Complex> backward(std::span<const Complex> x) {
  return complex_transform(x, Kind::kBackward);
}

std::vector<Complex> forward_real(std::span<const double> x) {
  std::vector<double> in(x.begin(), x.end());
  std::vector<Complex> out(x.size() / 2 + 1);
  if (x.empty()) return {};
  fftw_execute_dft_r2c(PlanCache::instance().get(Kind::kRealForward, x.size()),
                       in.data(), as_fftw(out.data()));
  return out;
}

std::vector<double> dct2(std::span<const double> x) {
  return real_transform(x, Kind::kDct2);
}

std::vector<double> dct3(std::span<const double> x) {
  return real_transform(x, Kind::kDct3);
}

std::size_t good_size(std::size_t n) {
  if (n <= 1) return 1;
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

}  // namespace fdlp::fft
