// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// dsp.hpp
//
// Shared signal-processing primitives: audio container, analysis
// configuration, windowing and framing, the orthonormal cosine transform and
// the Bark-spaced cochlear filterbank used to carve the frequency-domain
// coefficients into sub-bands.

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace fdlp {

class AudioBuffer {
 public:
  // Throws InvalidArgument when samples are empty or non-finite, or when the
  // rate is not positive.
  AudioBuffer(std::vector<double> samples, int sample_rate);

  std::span<const double> samples() const noexcept { return samples_; }
  int sample_rate() const noexcept { return sample_rate_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double duration_s() const noexcept {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

 private:
  std::vector<double> samples_;
  int sample_rate_;
};

struct AnalysisConfig {
  double window_len_s = 1.5;
  double hop_s = 0.01;
  std::size_t model_order = 80;
  std::size_t n_mod_coeffs = 80;
  std::size_t n_bands = 20;
  // Subtract the segment mean before the transform.
  bool remove_dc = false;

  std::size_t window_samples(int sample_rate) const;
  std::size_t hop_samples(int sample_rate) const;
  double resolution_hz() const { return 1.0 / window_len_s; }

  // Throws InvalidArgument if the configuration cannot be used at this rate.
  void validate(int sample_rate) const;
};

enum class WindowShape { kHann, kRectangular };

// Symmetric Hanning window, w[i] = 0.5 - 0.5 cos(2 pi i / (n - 1)).
std::vector<double> hann_window(std::size_t n);

// Start offsets (in samples) of the analysis frames covering n_samples.
// Always at least one frame; the last one may run past the end.
std::vector<std::size_t> frame_starts(std::size_t n_samples,
                                      std::size_t window_len,
                                      std::size_t hop_len);

// Cuts the audio into window_len_s frames every hop_s, zero-padding the tail,
// and multiplies each frame by the requested window.
std::vector<std::vector<double>> frame_signal(
    const AudioBuffer& audio, const AnalysisConfig& cfg,
    WindowShape shape = WindowShape::kHann);

// Single frame of window_len samples starting at `start` (may be negative or
// past the end; out-of-range samples read as zero).
std::vector<double> extract_segment(std::span<const double> samples,
                                    std::ptrdiff_t start,
                                    std::size_t window_len);

// Orthonormal DCT-II and its inverse (DCT-III).
std::vector<double> cosine_transform(std::span<const double> frame);
std::vector<double> inverse_cosine_transform(std::span<const double> coeffs);

double hz_to_bark(double hz);
double bark_to_hz(double bark);

struct FilterbankOptions {
  double width_bark = 2.5;
  // Minimum fractional overlap between neighbouring bands; widens the bands
  // beyond width_bark when the centre spacing demands it.
  double min_overlap = 0.63;
};

struct CochlearFilterbank {
  std::size_t n_bands = 0;
  std::size_t n_coeffs = 0;
  int sample_rate = 0;
  // band_weights[b][k] over all coefficient indices, nonnegative.
  std::vector<std::vector<double>> band_weights;
  // Half-open index range of the nonzero weights of each band.
  std::vector<std::pair<std::size_t, std::size_t>> support;
  std::vector<std::pair<double, double>> band_edges_hz;
  std::vector<double> centers_hz;

  double coeff_hz(std::size_t k) const;
  std::size_t coeff_index(double hz) const;
};

// Raised-cosine bumps equally spaced on the Bark scale between 0 Hz and
// Nyquist. Coefficient k sits at k * (fs / 2) / (n_coeffs - 1) Hz.
CochlearFilterbank design_filterbank(std::size_t n_bands, std::size_t n_coeffs,
                                     int sample_rate,
                                     const FilterbankOptions& options = {});

}  // namespace fdlp
