// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// fft.hpp
//
// Thin FFTW3 front. Plans are created once per (kind, size) under a lock and
// then executed through the new-array interface, so every function here is
// safe to call from concurrent threads.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fdlp::fft {

using Complex = std::complex<double>;

// X[k] = sum_n x[n] exp(-2 pi i k n / N). Unnormalised.
std::vector<Complex> forward(std::span<const Complex> x);

// x[n] = sum_k X[k] exp(+2 pi i k n / N). Unnormalised.
std::vector<Complex> backward(std::span<const Complex> x);

// One-sided forward transform of a real sequence, N / 2 + 1 bins.
std::vector<Complex> forward_real(std::span<const double> x);

// Unnormalised DCT-II: X[k] = 2 sum_n x[n] cos(pi k (2n + 1) / 2N).
std::vector<double> dct2(std::span<const double> x);

// Unnormalised DCT-III: x[n] = X[0] + 2 sum_{k>0} X[k] cos(pi k (2n + 1) / 2N).
std::vector<double> dct3(std::span<const double> x);

// Smallest n' >= n whose only prime factors are 2, 3, 5 and 7.
std::size_t good_size(std::size_t n);

}  // namespace fdlp::fft
