// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// dsp.cpp

#include "fdlp/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fdlp/errors.hpp"
#include "fdlp/fft.hpp"

namespace fdlp {

AudioBuffer::AudioBuffer(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (samples_.empty()) throw InvalidArgument("audio buffer is empty");
  if (sample_rate_ <= 0) throw InvalidArgument("sample rate must be positive");
  for (double v : samples_) {
    if (!std::isfinite(v)) throw InvalidArgument("audio contains non-finite samples");
  }
}

std::size_t AnalysisConfig::window_samples(int sample_rate) const {
  return static_cast<std::size_t>(std::lround(window_len_s * sample_rate));
}

std::size_t AnalysisConfig::hop_samples(int sample_rate) const {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(hop_s * sample_rate)));
}

void AnalysisConfig::validate(int sample_rate) const {
  if (sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
  if (!(window_len_s > 0.0) || !(hop_s > 0.0)) {
    throw InvalidArgument("window and hop must be positive");
  }
  if (model_order == 0 || n_mod_coeffs == 0 || n_bands == 0) {
    throw InvalidArgument("model order, coefficient count and band count must be positive");
  }
  if (window_samples(sample_rate) < 2 * model_order) {
    throw InvalidArgument("window of " + std::to_string(window_samples(sample_rate)) +
                          " samples is shorter than twice the model order");
  }
  if (n_mod_coeffs > model_order) {
    throw InvalidArgument("n_mod_coeffs must not exceed model_order");
  }
}

std::vector<double> hann_window(std::size_t n) {
  if (n < 2) throw InvalidArgument("Hann window needs at least 2 points");
  std::vector<double> w(n);
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / denom);
  }
  // Pin the symmetric points exactly; cos() rounding otherwise leaves 1e-17 tails.
  w.front() = 0.0;
  w.back() = 0.0;
  for (std::size_t i = 0; i < n / 2; ++i) w[n - 1 - i] = w[i];
  return w;
}

std::vector<std::size_t> frame_starts(std::size_t n_samples, std::size_t window_len,
                                      std::size_t hop_len) {
  if (window_len == 0 || hop_len == 0) throw InvalidArgument("window and hop must be positive");
  std::vector<std::size_t> starts{0};
  if (n_samples <= window_len) return starts;
  const std::size_t extra = (n_samples - window_len + hop_len - 1) / hop_len;
  starts.reserve(extra + 1);
  for (std::size_t i = 1; i <= extra; ++i) starts.push_back(i * hop_len);
  return starts;
}

std::vector<double> extract_segment(std::span<const double> samples, std::ptrdiff_t start,
                                    std::size_t window_len) {
  std::vector<double> out(window_len, 0.0);
  const auto n = static_cast<std::ptrdiff_t>(samples.size());
  for (std::size_t i = 0; i < window_len; ++i) {
    const std::ptrdiff_t s = start + static_cast<std::ptrdiff_t>(i);
    if (s >= 0 && s < n) out[i] = samples[static_cast<std::size_t>(s)];
  }
  return out;
}

std::vector<std::vector<double>> frame_signal(const AudioBuffer& audio, const AnalysisConfig& cfg,
                                              WindowShape shape) {
  if (audio.size() == 0) throw InvalidArgument("empty audio");
  const std::size_t win = cfg.window_samples(audio.sample_rate());
  const std::size_t hop = cfg.hop_samples(audio.sample_rate());
  if (win < 2) throw InvalidArgument("analysis window shorter than 2 samples");

  const std::vector<double> window =
      shape == WindowShape::kHann ? hann_window(win) : std::vector<double>(win, 1.0);
  std::vector<std::vector<double>> frames;
  for (std::size_t start : frame_starts(audio.size(), win, hop)) {
    auto frame = extract_segment(audio.samples(), static_cast<std::ptrdiff_t>(start), win);
    for (std::size_t i = 0; i < win; ++i) frame[i] *= window[i];
    frames.push_back(std::move(frame));
  }
  return frames;
}

std::vector<double> cosine_transform(std::span<const double> frame) {
  if (frame.empty()) throw InvalidArgument("cosine transform of an empty frame");
  for (double v : frame) {
    if (!std::isfinite(v)) throw InvalidArgument("cosine transform input is not finite");
  }
  const double n = static_cast<double>(frame.size());
  auto out = fft::dct2(frame);
  out[0] *= 0.5 * std::sqrt(1.0 / n);
  const double s = 0.5 * std::sqrt(2.0 / n);
  for (std::size_t k = 1; k < out.size(); ++k) out[k] *= s;
  return out;
}

std::vector<double> inverse_cosine_transform(std::span<const double> coeffs) {
  if (coeffs.empty()) throw InvalidArgument("inverse cosine transform of an empty vector");
  const double n = static_cast<double>(coeffs.size());
  std::vector<double> scaled(coeffs.begin(), coeffs.end());
  scaled[0] *= std::sqrt(1.0 / n);
  const double s = 0.5 * std::sqrt(2.0 / n);
  for (std::size_t k = 1; k < scaled.size(); ++k) scaled[k] *= s;
  return fft::dct3(scaled);
}

double hz_to_bark(double hz) { return 6.0 * std::asinh(hz / 600.0); }

double bark_to_hz(double bark) { return 600.0 * std::sinh(bark / 6.0); }

double CochlearFilterbank::coeff_hz(std::size_t k) const {
  return static_cast<double>(k) * (0.5 * sample_rate) / static_cast<double>(n_coeffs - 1);
}

std::size_t CochlearFilterbank::coeff_index(double hz) const {
  const double idx = hz * static_cast<double>(n_coeffs - 1) / (0.5 * sample_rate);
  return static_cast<std::size_t>(
      std::clamp<long>(std::lround(idx), 0L, static_cast<long>(n_coeffs - 1)));
}

CochlearFilterbank design_filterbank(std::size_t n_bands, std::size_t n_coeffs, int sample_rate,
                                     const FilterbankOptions& options) {
  if (n_bands < 1) throw InvalidArgument("filterbank needs at least one band");
  if (sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
  if (n_coeffs <= 2 * n_bands) {
    throw InvalidArgument("too many bands (" + std::to_string(n_bands) + ") for " +
                          std::to_string(n_coeffs) + " coefficients");
  }
  if (!(options.width_bark > 0.0) || options.min_overlap < 0.0 || options.min_overlap >= 1.0) {
    throw InvalidArgument("invalid filterbank options");
  }

  CochlearFilterbank fb;
  fb.n_bands = n_bands;
  fb.n_coeffs = n_coeffs;
  fb.sample_rate = sample_rate;

  const double z_max = hz_to_bark(0.5 * sample_rate);
  const double spacing = z_max / static_cast<double>(n_bands);
  const double width = std::max(options.width_bark, spacing / (1.0 - options.min_overlap));
  const double half = 0.5 * width;

  std::vector<double> z(n_coeffs);
  for (std::size_t k = 0; k < n_coeffs; ++k) z[k] = hz_to_bark(fb.coeff_hz(k));

  for (std::size_t b = 0; b < n_bands; ++b) {
    const double zc = (static_cast<double>(b) + 0.5) * spacing;
    std::vector<double> w(n_coeffs, 0.0);
    std::size_t lo = n_coeffs;
    std::size_t hi = 0;
    double peak = 0.0;
    for (std::size_t k = 0; k < n_coeffs; ++k) {
      const double d = (z[k] - zc) / half;
      if (std::abs(d) < 1.0) {
        w[k] = 0.5 + 0.5 * std::cos(std::numbers::pi * d);
        if (w[k] > 0.0) {
          lo = std::min(lo, k);
          hi = k + 1;
        }
        peak = std::max(peak, w[k]);
      }
    }
    if (peak <= 0.5) {
      throw InvalidArgument("band " + std::to_string(b) +
                            " has no well-defined passband; too many bands for " +
                            std::to_string(n_coeffs) + " coefficients");
    }
    fb.band_weights.push_back(std::move(w));
    fb.support.emplace_back(lo, hi);
    fb.centers_hz.push_back(bark_to_hz(zc));
    fb.band_edges_hz.emplace_back(bark_to_hz(std::max(0.0, zc - half)),
                                  bark_to_hz(std::min(z_max, zc + half)));
  }
  return fb;
}

}  // namespace fdlp
