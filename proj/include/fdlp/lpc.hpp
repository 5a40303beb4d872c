// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// lpc.hpp
//
// Linear prediction over frequency-domain coefficients. The "signal" handed to
// the predictor is a sequence of (possibly complex) spectral coefficients, so
// the model's frequency response is a temporal power envelope: point t of an
// M-point envelope grid sits at phase 2 pi t / M, i.e. at time t / M of the
// analysis window.
//
// Convention: A(z) = 1 + sum_{k=1}^{p} a[k] z^{-k} and the model envelope is
// gain^2 / |A(e^{j theta})|^2.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fdlp {

using Complex = std::complex<double>;

// Band energy below this fraction of the full spectral energy is treated as
// empty (FFT roundoff sits around 1e-27).
inline constexpr double kDegenerateEnergyRatio = 1e-12;

struct AllPoleModel {
  std::size_t order = 0;
  std::vector<Complex> lp_coeffs;  // a[1..p]
  double gain = 1.0;
  // Filled by levinson_durbin; empty for hand-built models.
  std::vector<Complex> reflection;        // k[1..p]
  std::vector<double> prediction_error;   // e[0..p]
  std::size_t band_index = 0;
};

// r[m] = sum_k y[k + m] conj(y[k]) for m = 0..order, y = freq_coeffs * band_weights.
// Throws DegenerateBand when y carries no energy (see kDegenerateEnergyRatio).
std::vector<Complex> subband_autocorrelation(std::span<const Complex> freq_coeffs,
                                             std::span<const double> band_weights,
                                             std::size_t order);
std::vector<double> subband_autocorrelation(std::span<const double> freq_coeffs,
                                            std::span<const double> band_weights,
                                            std::size_t order);

// Solves the Hermitian Toeplitz normal equations for lags r[0..order].
// Throws InvalidArgument if r[0] <= 0 and NumericalDegeneracy (with the stage)
// if a reflection coefficient reaches the unit circle.
AllPoleModel levinson_durbin(std::span<const Complex> r, std::size_t order);
AllPoleModel levinson_durbin(std::span<const double> r, std::size_t order);

// Step-down recursion: reflection coefficients of a[1..p]. Returns false (and
// leaves `out` partially filled) if the polynomial is not minimum phase.
bool reflection_from_lpc(std::span<const Complex> lp_coeffs, std::vector<Complex>& out);

// Complex cepstrum of the power envelope, c[0..n-1]:
//   c[0] = 2 ln g,  c[m] = 2 h[m],  h[m] = -a[m] - sum_{k<m} (k/m) h[k] a[m-k],
// so that ln env(theta) = c[0] + Re sum_{m>=1} c[m] e^{-j m theta}.
// Throws DomainError for non-minimum-phase models.
std::vector<Complex> lpc_to_cepstrum(const AllPoleModel& model, std::size_t n);

// env[t] = g^2 / |A(e^{j 2 pi t / n_points})|^2, t = 0..n_points-1.
std::vector<double> envelope_from_model(const AllPoleModel& model, std::size_t n_points);

}  // namespace fdlp
