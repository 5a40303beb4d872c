// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// selftest.cpp

#include "fdlp/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fdlp/errors.hpp"
#include "fdlp/fft.hpp"
#include "fdlp/lpc.hpp"
#include "fdlp/modulation.hpp"

namespace fdlp {

const char* to_string(SweepRegion r) {
  switch (r) {
    case SweepRegion::kInside:
      return "inside";
    case SweepRegion::kOutside:
      return "outside";
    default:
      return "transition";
  }
}

std::vector<SweepPoint> carrier_sweep(const SweepSpec& spec, const AnalysisConfig& cfg) {
  const auto fb = filterbank_for(cfg, spec.sample_rate);
  if (spec.band >= fb.n_bands) throw InvalidArgument("sweep band out of range");
  if (!(spec.carrier_step_hz > 0.0)) throw InvalidArgument("carrier step must be positive");
  const auto bin = static_cast<std::size_t>(std::lround(spec.mod_hz * cfg.window_len_s));
  if (bin + 1 >= cfg.n_mod_coeffs) throw InvalidArgument("modulation bin beyond n_mod_coeffs");
  const auto& w = fb.band_weights[spec.band];

  std::vector<SweepPoint> out;
  for (double fc = spec.carrier_start_hz; fc <= spec.carrier_stop_hz + 1e-9;
       fc += spec.carrier_step_hz) {
    SweepPoint pt;
    pt.carrier_hz = fc;
    pt.filter_weight = w[fb.coeff_index(fc)];
    bool touches = false;
    for (std::size_t k = fb.coeff_index(fc - spec.mod_hz); k <= fb.coeff_index(fc + spec.mod_hz);
         ++k) {
      touches = touches || w[k] > 0.0;
    }
    pt.region = pt.filter_weight >= 0.5 ? SweepRegion::kInside
                : touches               ? SweepRegion::kTransition
                                        : SweepRegion::kOutside;

    const auto sig = am_test_signal(fc, spec.mod_hz, spec.depth, spec.duration_s, spec.sample_rate);
    const auto coeffs = inverse_fourier_coefficients(sig.samples());
    try {
      const auto model = band_model(coeffs, fb, spec.band, cfg.model_order);
      const auto cep = lpc_to_cepstrum(model, bin + 2);
      pt.magnitude = std::abs(hann_taper_modulations(cep, bin + 1)[bin]);
    } catch (const DegenerateBand&) {
      pt.degenerate = true;
    } catch (const NumericalDegeneracy&) {
      pt.degenerate = true;
    }
    out.push_back(pt);
  }
  return out;
}

bool sweep_passes(const std::vector<SweepPoint>& points, const SweepSpec& spec) {
  bool any_inside = false;
  bool any_outside = false;
  for (const auto& p : points) {
    if (p.region == SweepRegion::kInside) {
      any_inside = true;
      if (std::abs(p.magnitude - spec.depth) > spec.tolerance) return false;
    } else if (p.region == SweepRegion::kOutside) {
      any_outside = true;
      if (p.magnitude > spec.outside_limit) return false;
    }
  }
  return any_inside && any_outside;
}

TwoPathResult two_path_check(std::size_t n_frames, std::uint64_t seed, const AnalysisConfig& cfg,
                             int sample_rate, std::size_t grid) {
  const auto fb = filterbank_for(cfg, sample_rate);
  const std::size_t win = cfg.window_samples(sample_rate);
  const std::size_t n = cfg.n_mod_coeffs;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  TwoPathResult result;
  result.frames = n_frames;
  for (std::size_t f = 0; f < n_frames; ++f) {
    // Noise under a few random slow envelope components.
    std::vector<double> x(win);
    std::vector<double> freqs(3), phases(3), depths(3);
    for (int c = 0; c < 3; ++c) {
      freqs[c] = 1.0 + 15.0 * uni(rng);
      phases[c] = 2.0 * std::numbers::pi * uni(rng);
      depths[c] = 0.3 * uni(rng);
    }
    for (std::size_t i = 0; i < win; ++i) {
      const double t = static_cast<double>(i) / sample_rate;
      double env = 1.0;
      for (int c = 0; c < 3; ++c) {
        env += depths[c] * std::cos(2.0 * std::numbers::pi * freqs[c] * t + phases[c]);
      }
      x[i] = env * noise(rng);
    }
    const auto coeffs = inverse_fourier_coefficients(x);
    for (std::size_t b = 0; b < fb.n_bands; ++b) {
      AllPoleModel model;
      try {
        model = band_model(coeffs, fb, b, cfg.model_order);
      } catch (const DegenerateBand&) {
        continue;
      } catch (const NumericalDegeneracy&) {
        continue;
      }
      const auto recursion = hann_taper_modulations(lpc_to_cepstrum(model, n + 1), n);

      const auto env = envelope_from_model(model, grid);
      std::vector<Complex> log_env(grid);
      for (std::size_t i = 0; i < grid; ++i) log_env[i] = std::log(env[i]);
      const auto spec = fft::forward(log_env);
      std::vector<Complex> cep(n + 1);
      cep[0] = spec[0] / static_cast<double>(grid);
      for (std::size_t m = 1; m <= n; ++m) cep[m] = 2.0 * std::conj(spec[m]) / static_cast<double>(grid);
      const auto transform = hann_taper_modulations(cep, n);

      double diff = 0.0;
      double scale = 0.0;
      for (std::size_t m = 0; m < n; ++m) {
        diff = std::max(diff, std::abs(recursion[m] - transform[m]));
        scale = std::max(scale, std::abs(recursion[m]));
      }
      result.max_relative_error = std::max(result.max_relative_error, diff / scale);
      ++result.bands_compared;
    }
  }
  return result;
}

}  // namespace fdlp
