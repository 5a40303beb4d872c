// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// lpc.cpp

#include "fdlp/lpc.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "fdlp/errors.hpp"
#include "fdlp/fft.hpp"

namespace fdlp {

std::vector<Complex> subband_autocorrelation(std::span<const Complex> freq_coeffs,
                                             std::span<const double> band_weights,
                                             std::size_t order) {
  if (freq_coeffs.size() != band_weights.size()) {
    throw InvalidArgument("coefficient and weight vectors differ in length");
  }
  if (order >= freq_coeffs.size()) {
    throw InvalidArgument("model order must be smaller than the coefficient count");
  }

  double total = 0.0;
  std::size_t lo = freq_coeffs.size();
  std::size_t hi = 0;
  for (std::size_t k = 0; k < freq_coeffs.size(); ++k) {
    total += std::norm(freq_coeffs[k]);
    if (band_weights[k] != 0.0 && freq_coeffs[k] != Complex{}) {
      if (lo == freq_coeffs.size()) lo = k;
      hi = k + 1;
    }
  }
  if (hi <= lo) throw DegenerateBand("sub-band is identically zero");

  // Only the nonzero stretch matters; pad so lags 0..order do not wrap.
  const std::size_t len = hi - lo;
  const std::size_t n = fft::good_size(len + order + 1);
  std::vector<Complex> y(n);
  double energy = 0.0;
  for (std::size_t k = lo; k < hi; ++k) {
    y[k - lo] = freq_coeffs[k] * band_weights[k];
    energy += std::norm(y[k - lo]);
  }
  if (!(energy > kDegenerateEnergyRatio * total)) {
    throw DegenerateBand("sub-band energy is negligible");
  }

  auto spectrum = fft::forward(y);
  for (auto& v : spectrum) v = Complex(std::norm(v), 0.0);
  const auto lags = fft::backward(spectrum);

  std::vector<Complex> r(order + 1);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t m = 0; m <= order; ++m) r[m] = lags[m] * scale;
  r[0] = Complex(energy, 0.0);
  return r;
}

std::vector<double> subband_autocorrelation(std::span<const double> freq_coeffs,
                                            std::span<const double> band_weights,
                                            std::size_t order) {
  std::vector<Complex> x(freq_coeffs.begin(), freq_coeffs.end());
  const auto r = subband_autocorrelation(x, band_weights, order);
  std::vector<double> out(r.size());
  for (std::size_t m = 0; m < r.size(); ++m) out[m] = r[m].real();
  return out;
}

AllPoleModel levinson_durbin(std::span<const Complex> r, std::size_t order) {
  if (r.size() < order + 1) throw InvalidArgument("need order + 1 autocorrelation lags");
  if (!(r[0].real() > 0.0)) throw InvalidArgument("r[0] must be positive");

  AllPoleModel model;
  model.order = order;
  model.lp_coeffs.assign(order, Complex{});
  model.reflection.reserve(order);
  model.prediction_error.reserve(order + 1);

  // a[0] == 1 is implicit; a[j] lives at lp_coeffs[j - 1].
  std::vector<Complex>& a = model.lp_coeffs;
  std::vector<Complex> prev(order);
  double err = r[0].real();
  model.prediction_error.push_back(err);

  for (std::size_t i = 1; i <= order; ++i) {
    Complex acc = r[i];
    for (std::size_t j = 1; j < i; ++j) acc += a[j - 1] * r[i - j];
    const Complex k = -acc / err;
    if (!(std::abs(k) < 1.0)) {
      throw NumericalDegeneracy("reflection coefficient |k| >= 1 at stage " + std::to_string(i),
                                i);
    }
    std::copy(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(i - 1), prev.begin());
    for (std::size_t j = 1; j < i; ++j) a[j - 1] = prev[j - 1] + k * std::conj(prev[i - j - 1]);
    a[i - 1] = k;
    err *= (1.0 - std::norm(k));
    model.reflection.push_back(k);
    model.prediction_error.push_back(err);
  }
  if (!(err > 0.0)) throw NumericalDegeneracy("prediction error vanished", order);
  model.gain = std::sqrt(err);
  return model;
}

AllPoleModel levinson_durbin(std::span<const double> r, std::size_t order) {
  std::vector<Complex> rc(r.begin(), r.end());
  return levinson_durbin(rc, order);
}

bool reflection_from_lpc(std::span<const Complex> lp_coeffs, std::vector<Complex>& out) {
  const std::size_t p = lp_coeffs.size();
  out.assign(p, Complex{});
  std::vector<Complex> a(lp_coeffs.begin(), lp_coeffs.end());
  std::vector<Complex> next(p);
  for (std::size_t i = p; i >= 1; --i) {
    const Complex k = a[i - 1];
    out[i - 1] = k;
    const double denom = 1.0 - std::norm(k);
    if (!(denom > 0.0)) return false;
    for (std::size_t j = 1; j < i; ++j) {
      next[j - 1] = (a[j - 1] - k * std::conj(a[i - j - 1])) / denom;
    }
    std::copy(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(i - 1), a.begin());
  }
  return true;
}

std::vector<Complex> lpc_to_cepstrum(const AllPoleModel& model, std::size_t n) {
  if (model.lp_coeffs.size() != model.order) {
    throw InvalidArgument("model order does not match its coefficient count");
  }
  if (!(model.gain > 0.0)) throw DomainError("model gain must be positive");
  std::vector<Complex> k;
  if (!reflection_from_lpc(model.lp_coeffs, k)) {
    throw DomainError("all-pole model is not minimum phase");
  }

  const std::size_t p = model.order;
  const auto& a = model.lp_coeffs;
  std::vector<Complex> h(n);
  for (std::size_t m = 1; m < n; ++m) {
    Complex acc = m <= p ? -a[m - 1] : Complex{};
    const double inv_m = 1.0 / static_cast<double>(m);
    // Only terms with m - j <= p contribute.
    const std::size_t j0 = m > p ? m - p : 1;
    for (std::size_t j = j0; j < m; ++j) {
      acc -= (static_cast<double>(j) * inv_m) * h[j] * a[m - j - 1];
    }
    h[m] = acc;
  }

  std::vector<Complex> c(n);
  if (n > 0) c[0] = Complex(2.0 * std::log(model.gain), 0.0);
  for (std::size_t m = 1; m < n; ++m) c[m] = 2.0 * h[m];
  return c;
}

std::vector<double> envelope_from_model(const AllPoleModel& model, std::size_t n_points) {
  if (n_points < 2 * model.order || n_points == 0) {
    throw InvalidArgument("envelope grid must have at least 2 * order points");
  }
  std::vector<Complex> poly(n_points);
  poly[0] = 1.0;
  for (std::size_t j = 0; j < model.order; ++j) poly[j + 1] = model.lp_coeffs[j];
  const auto resp = fft::forward(poly);
  const double g2 = model.gain * model.gain;
  std::vector<double> env(n_points);
  for (std::size_t t = 0; t < n_points; ++t) env[t] = g2 / std::norm(resp[t]);
  return env;
}

}  // namespace fdlp
