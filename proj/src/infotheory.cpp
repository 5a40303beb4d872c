// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// infotheory.cpp

#include "fdlp/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "fdlp/errors.hpp"
#include "fdlp/modulation.hpp"
#include "fdlp/parallel.hpp"

namespace fdlp {

void HistogramSpec::validate() const {
  if (n_bins < 2) throw InvalidArgument("histogram needs at least 2 bins");
  if (!(min < max)) throw InvalidArgument("histogram range must satisfy min < max");
}

void ExtremaAccumulator::add(double v) {
  min_ = std::min(min_, v);
  max_ = std::max(max_, v);
  ++count_;
}

void ExtremaAccumulator::merge(const ExtremaAccumulator& other) {
  min_ = std::min(min_, other.min_);
  max_ = std::max(max_, other.max_);
  count_ += other.count_;
}

std::pair<double, double> ExtremaAccumulator::result() const {
  if (count_ == 0) throw DegenerateDistribution("no values");
  if (!(min_ < max_)) throw DegenerateDistribution("all values are equal");
  return {min_, max_};
}

std::pair<double, double> global_extrema(std::span<const double> values) {
  ExtremaAccumulator acc;
  for (double v : values) acc.add(v);
  return acc.result();
}

std::size_t discretize(double value, const HistogramSpec& spec) {
  if (!(value > spec.min)) return 0;
  if (!(value < spec.max)) return spec.n_bins - 1;
  const double pos = (value - spec.min) / (spec.max - spec.min) * static_cast<double>(spec.n_bins);
  return std::min(static_cast<std::size_t>(pos), spec.n_bins - 1);
}

JointHistogram::JointHistogram(std::size_t n_bins, std::size_t n_classes)
    : n_bins_(n_bins), n_classes_(n_classes), counts_(n_bins * n_classes, 0) {
  if (n_bins == 0 || n_classes == 0) throw InvalidArgument("histogram dimensions must be positive");
}

void JointHistogram::add(std::size_t bin, std::size_t cls, std::uint64_t count) {
  if (bin >= n_bins_ || cls >= n_classes_) throw InvalidArgument("histogram cell out of range");
  counts_[bin * n_classes_ + cls] += count;
  total_ += count;
}

void JointHistogram::merge(const JointHistogram& other) {
  if (other.n_bins_ != n_bins_ || other.n_classes_ != n_classes_) {
    throw InvalidArgument("cannot merge histograms of different shapes");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
}

namespace {

std::vector<double> marginal_x(const JointHistogram& h) {
  std::vector<double> px(h.n_bins(), 0.0);
  for (std::size_t x = 0; x < h.n_bins(); ++x) {
    for (std::size_t y = 0; y < h.n_classes(); ++y) px[x] += static_cast<double>(h.count(x, y));
  }
  return px;
}

std::vector<double> marginal_y(const JointHistogram& h) {
  std::vector<double> py(h.n_classes(), 0.0);
  for (std::size_t x = 0; x < h.n_bins(); ++x) {
    for (std::size_t y = 0; y < h.n_classes(); ++y) py[y] += static_cast<double>(h.count(x, y));
  }
  return py;
}

double entropy_of_counts(const std::vector<double>& counts, double total) {
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) h -= (c / total) * std::log2(c / total);
  }
  return h;
}

}  // namespace

double mutual_information(const JointHistogram& joint) {
  if (joint.total() == 0) throw InvalidArgument("mutual information of an empty histogram");
  const double total = static_cast<double>(joint.total());
  const auto px = marginal_x(joint);
  const auto py = marginal_y(joint);
  double mi = 0.0;
  for (std::size_t x = 0; x < joint.n_bins(); ++x) {
    if (px[x] == 0.0) continue;
    for (std::size_t y = 0; y < joint.n_classes(); ++y) {
      const auto c = static_cast<double>(joint.count(x, y));
      if (c == 0.0) continue;
      // Integer-valued products stay exact, so independence gives log2(1) == 0.
      mi += (c / total) * std::log2((c * total) / (px[x] * py[y]));
    }
  }
  return std::max(mi, 0.0);
}

double entropy_x(const JointHistogram& joint) {
  if (joint.total() == 0) throw InvalidArgument("entropy of an empty histogram");
  return entropy_of_counts(marginal_x(joint), static_cast<double>(joint.total()));
}

double entropy_y(const JointHistogram& joint) {
  if (joint.total() == 0) throw InvalidArgument("entropy of an empty histogram");
  return entropy_of_counts(marginal_y(joint), static_cast<double>(joint.total()));
}

std::vector<double> MIMatrix::band_average() const {
  std::vector<double> avg(n_mod_bins, 0.0);
  if (n_bands == 0) return avg;
  for (std::size_t b = 0; b < n_bands; ++b) {
    for (std::size_t n = 0; n < n_mod_bins; ++n) avg[n] += at(b, n);
  }
  for (double& v : avg) v /= static_cast<double>(n_bands);
  return avg;
}

double MIMatrix::max() const {
  return mi.empty() ? 0.0 : *std::max_element(mi.begin(), mi.end());
}

std::size_t window_label_index(std::size_t start_sample, std::size_t window_len, int sample_rate,
                               const LabelTrack& labels) {
  if (labels.labels.empty()) throw AlignmentError("empty label track");
  const double centre_s =
      (static_cast<double>(start_sample) + 0.5 * static_cast<double>(window_len)) / sample_rate;
  const auto idx = static_cast<long>(std::lround(centre_s * labels.frame_rate_hz));
  return static_cast<std::size_t>(
      std::clamp<long>(idx, 0L, static_cast<long>(labels.labels.size()) - 1));
}

namespace {

// Compensated magnitudes of every window of one utterance, window-major then
// band-major then bin. Degenerate band-windows are NaN.
struct UtteranceMagnitudes {
  std::vector<double> values;
  std::vector<std::size_t> label_of_window;
  std::size_t n_windows = 0;
};

UtteranceMagnitudes compensated_magnitudes(const Utterance& utt, const CochlearFilterbank& fb,
                                           const AnalysisConfig& cfg) {
  const int rate = utt.audio.sample_rate();
  const std::size_t win = cfg.window_samples(rate);
  const std::size_t hop = cfg.hop_samples(rate);
  const std::size_t n_mod = cfg.n_mod_coeffs;
  const auto starts = frame_starts(utt.audio.size(), win, hop);

  UtteranceMagnitudes out;
  out.n_windows = starts.size();
  out.values.resize(starts.size() * fb.n_bands * n_mod);
  out.label_of_window.resize(starts.size());
  for (std::size_t w = 0; w < starts.size(); ++w) {
    const auto segment =
        extract_segment(utt.audio.samples(), static_cast<std::ptrdiff_t>(starts[w]), win);
    const auto spectra = modulation_spectrum(segment, fb, cfg);
    for (std::size_t b = 0; b < fb.n_bands; ++b) {
      double* dst = &out.values[(w * fb.n_bands + b) * n_mod];
      if (spectra[b].degenerate) {
        std::fill(dst, dst + n_mod, std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      const auto comp = one_over_f_compensate(spectra[b]);
      for (std::size_t n = 0; n < n_mod; ++n) dst[n] = std::abs(comp.coeffs[n]);
    }
    out.label_of_window[w] = static_cast<std::size_t>(
        utt.labels.labels[window_label_index(starts[w], win, rate, utt.labels)]);
  }
  return out;
}

void check_alignment(const Utterance& utt) {
  utt.labels.validate();
  const std::size_t expected = frames_in(utt.audio.duration_s(), utt.labels.frame_rate_hz);
  const std::size_t have = utt.labels.labels.size();
  const std::size_t diff = have > expected ? have - expected : expected - have;
  if (have == 0 || diff > 2) {
    throw AlignmentError("labels of '" + utt.name + "' cover " + std::to_string(have) +
                         " frames, audio has " + std::to_string(expected));
  }
}

}  // namespace

MIMatrix mi_analysis(std::span<const Utterance> corpus, const CochlearFilterbank& fb,
                     const AnalysisConfig& cfg, const MiOptions& options) {
  if (corpus.empty()) throw InvalidArgument("empty corpus");
  if (options.n_bins < 2) throw InvalidArgument("histogram needs at least 2 bins");
  const std::size_t n_classes = corpus.front().labels.n_classes;
  for (const auto& utt : corpus) {
    if (utt.audio.sample_rate() != fb.sample_rate) {
      throw InvalidArgument("utterance '" + utt.name + "' has sample rate " +
                            std::to_string(utt.audio.sample_rate()) + ", filterbank expects " +
                            std::to_string(fb.sample_rate));
    }
    if (utt.labels.n_classes != n_classes) {
      throw InvalidArgument("utterance '" + utt.name + "' disagrees on the class count");
    }
    check_alignment(utt);
  }
  cfg.validate(fb.sample_rate);

  const std::size_t n_mod = cfg.n_mod_coeffs;
  const std::size_t n_cells = fb.n_bands * n_mod;

  // Pass 1: corpus-wide extremes per cell.
  std::vector<std::vector<ExtremaAccumulator>> shard_extrema(corpus.size());
  parallel_for(corpus.size(), options.jobs, [&](std::size_t u) {
    const auto mags = compensated_magnitudes(corpus[u], fb, cfg);
    auto& acc = shard_extrema[u];
    acc.resize(n_cells);
    for (std::size_t w = 0; w < mags.n_windows; ++w) {
      for (std::size_t cell = 0; cell < n_cells; ++cell) {
        const double v = mags.values[w * n_cells + cell];
        if (!std::isnan(v)) acc[cell].add(v);
      }
    }
  });
  std::vector<ExtremaAccumulator> extrema(n_cells);
  for (const auto& shard : shard_extrema) {
    for (std::size_t cell = 0; cell < n_cells; ++cell) extrema[cell].merge(shard[cell]);
  }
  shard_extrema.clear();

  std::vector<HistogramSpec> specs(n_cells);
  std::vector<bool> usable(n_cells, false);
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    try {
      const auto [lo, hi] = extrema[cell].result();
      specs[cell] = HistogramSpec{options.n_bins, lo, hi};
      usable[cell] = true;
    } catch (const DegenerateDistribution&) {
      // Constant cell (bin 0 after compensation, or a band that never had
      // energy): carries no information.
    }
  }

  // Pass 2: joint histograms. Counts are integers, so the merge order cannot
  // change the result.
  std::vector<JointHistogram> joints(n_cells, JointHistogram(options.n_bins, n_classes));
  std::vector<std::uint64_t> samples_per_band(fb.n_bands, 0);
  std::mutex merge_mutex;
  parallel_for(corpus.size(), options.jobs, [&](std::size_t u) {
    const auto mags = compensated_magnitudes(corpus[u], fb, cfg);
    std::vector<std::uint32_t> bins(mags.values.size(), 0);
    for (std::size_t w = 0; w < mags.n_windows; ++w) {
      for (std::size_t cell = 0; cell < n_cells; ++cell) {
        const double v = mags.values[w * n_cells + cell];
        if (usable[cell] && !std::isnan(v)) {
          bins[w * n_cells + cell] = static_cast<std::uint32_t>(discretize(v, specs[cell]));
        }
      }
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    for (std::size_t w = 0; w < mags.n_windows; ++w) {
      const std::size_t label = mags.label_of_window[w];
      for (std::size_t b = 0; b < fb.n_bands; ++b) {
        if (std::isnan(mags.values[(w * fb.n_bands + b) * n_mod])) continue;
        ++samples_per_band[b];
        for (std::size_t n = 0; n < n_mod; ++n) {
          const std::size_t cell = b * n_mod + n;
          if (usable[cell]) joints[cell].add(bins[w * n_cells + cell], label);
        }
      }
    }
  });

  MIMatrix result;
  result.n_bands = fb.n_bands;
  result.n_mod_bins = n_mod;
  result.mi.assign(n_cells, 0.0);
  result.band_centers_hz = fb.centers_hz;
  result.samples_per_band = samples_per_band;
  for (std::size_t n = 0; n < n_mod; ++n) {
    result.mod_freqs_hz.push_back(static_cast<double>(n) * cfg.resolution_hz());
  }
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    if (usable[cell] && joints[cell].total() > 0) result.mi[cell] = mutual_information(joints[cell]);
  }
  return result;
}

}  // namespace fdlp
