// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// modulation.cpp

#include "fdlp/modulation.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "fdlp/errors.hpp"
#include "fdlp/fft.hpp"

namespace fdlp {

std::vector<double> ModulationSpectrum::magnitudes() const {
  std::vector<double> out(coeffs.size());
  for (std::size_t n = 0; n < coeffs.size(); ++n) out[n] = std::abs(coeffs[n]);
  return out;
}

std::vector<Complex> inverse_fourier_coefficients(std::span<const double> segment) {
  auto x = fft::forward_real(segment);
  for (auto& v : x) v = std::conj(v);
  return x;
}

std::vector<Complex> hann_taper_modulations(std::span<const Complex> cepstrum,
                                            std::size_t n_out) {
  if (n_out == 0) return {};
  if (cepstrum.size() < n_out + 1) {
    throw InvalidArgument("taper needs one cepstral coefficient beyond the output length");
  }
  std::vector<Complex> out(n_out);
  out[0] = cepstrum[0];
  for (std::size_t m = 1; m < n_out; ++m) {
    const Complex below = m >= 2 ? cepstrum[m - 1] : Complex{};
    out[m] = 0.5 * cepstrum[m] - 0.25 * below - 0.25 * cepstrum[m + 1];
  }
  return out;
}

AllPoleModel band_model(std::span<const Complex> freq_coeffs, const CochlearFilterbank& fb,
                        std::size_t band, std::size_t order) {
  if (freq_coeffs.size() != fb.n_coeffs) {
    throw InvalidArgument("filterbank was designed for " + std::to_string(fb.n_coeffs) +
                          " coefficients, got " + std::to_string(freq_coeffs.size()));
  }
  const auto r = subband_autocorrelation(freq_coeffs, fb.band_weights.at(band), order);
  auto model = levinson_durbin(r, order);
  model.band_index = band;
  return model;
}

std::vector<ModulationSpectrum> modulation_spectrum_from_coeffs(
    std::span<const Complex> freq_coeffs, const CochlearFilterbank& fb,
    const AnalysisConfig& cfg) {
  const std::size_t n = cfg.n_mod_coeffs;
  std::vector<ModulationSpectrum> out(fb.n_bands);
  for (std::size_t b = 0; b < fb.n_bands; ++b) {
    auto& ms = out[b];
    ms.band_index = b;
    ms.resolution_hz = cfg.resolution_hz();
    ms.effective_resolution_hz = 2.0 * cfg.resolution_hz();
    try {
      const auto model = band_model(freq_coeffs, fb, b, cfg.model_order);
      auto c = lpc_to_cepstrum(model, n + 1);
      ms.coeffs = hann_taper_modulations(c, n);
      c.resize(n);
      ms.cepstrum = std::move(c);
    } catch (const DegenerateBand&) {
      ms.degenerate = true;
    } catch (const NumericalDegeneracy&) {
      ms.degenerate = true;
    }
    if (ms.degenerate) {
      ms.coeffs.assign(n, Complex{});
      ms.cepstrum.assign(n, Complex{});
    }
  }
  return out;
}

std::vector<ModulationSpectrum> modulation_spectrum(std::span<const double> segment,
                                                    const CochlearFilterbank& fb,
                                                    const AnalysisConfig& cfg) {
  if (segment.size() / 2 + 1 != fb.n_coeffs) {
    throw InvalidArgument("segment length does not match the filterbank");
  }
  if (cfg.model_order >= fb.n_coeffs) {
    throw InvalidArgument("model order exceeds the number of spectral coefficients");
  }
  if (cfg.n_mod_coeffs > cfg.model_order) {
    throw InvalidArgument("n_mod_coeffs must not exceed model_order");
  }
  if (cfg.remove_dc) {
    std::vector<double> centred(segment.begin(), segment.end());
    const double mean =
        std::accumulate(centred.begin(), centred.end(), 0.0) / static_cast<double>(centred.size());
    for (double& v : centred) v -= mean;
    return modulation_spectrum_from_coeffs(inverse_fourier_coefficients(centred), fb, cfg);
  }
  return modulation_spectrum_from_coeffs(inverse_fourier_coefficients(segment), fb, cfg);
}

ModulationSpectrum one_over_f_compensate(const ModulationSpectrum& ms) {
  ModulationSpectrum out = ms;
  for (std::size_t n = 0; n < out.coeffs.size(); ++n) {
    out.coeffs[n] *= static_cast<double>(n) * ms.resolution_hz;
  }
  if (!out.coeffs.empty()) out.coeffs[0] = Complex{};
  return out;
}

AudioBuffer am_test_signal(double carrier_hz, double mod_hz, double depth, double duration_s,
                           int sample_rate) {
  if (sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
  if (!(depth >= 0.0 && depth < 1.0)) throw InvalidArgument("depth must lie in [0, 1)");
  if (!(mod_hz >= 0.0 && mod_hz < carrier_hz && carrier_hz < 0.5 * sample_rate)) {
    throw InvalidArgument("need 0 <= mod_hz < carrier_hz < sample_rate / 2");
  }
  if (!(duration_s > 0.0)) throw InvalidArgument("duration must be positive");
  const auto n = static_cast<std::size_t>(std::lround(duration_s * sample_rate));
  if (n == 0) throw InvalidArgument("duration shorter than one sample");
  std::vector<double> s(n);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    s[i] = (1.0 + depth * std::cos(two_pi * mod_hz * t)) * std::cos(two_pi * carrier_hz * t);
  }
  return AudioBuffer(std::move(s), sample_rate);
}

CochlearFilterbank filterbank_for(const AnalysisConfig& cfg, int sample_rate,
                                  const FilterbankOptions& options) {
  cfg.validate(sample_rate);
  return design_filterbank(cfg.n_bands, cfg.window_samples(sample_rate) / 2 + 1, sample_rate,
                           options);
}

}  // namespace fdlp
