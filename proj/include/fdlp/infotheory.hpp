// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// infotheory.hpp
//
// Plug-in mutual information between discretised modulation magnitudes and
// frame labels. Every (band, modulation bin) cell is treated as its own scalar
// variable; magnitudes are 1/f compensated, binned on equal-width histograms
// spanning the corpus-wide extremes, and paired with the label of the frame at
// each analysis window's centre. Results are in bits.

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "fdlp/corpus.hpp"
#include "fdlp/dsp.hpp"

namespace fdlp {

struct HistogramSpec {
  std::size_t n_bins = 100;
  double min = 0.0;
  double max = 1.0;

  void validate() const;
};

// Running min / max; merging is associative and commutative.
class ExtremaAccumulator {
 public:
  void add(double v);
  void merge(const ExtremaAccumulator& other);
  bool empty() const { return count_ == 0; }
  std::size_t count() const { return count_; }
  // Throws DegenerateDistribution when fewer than two distinct values were seen.
  std::pair<double, double> result() const;

 private:
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
  std::size_t count_ = 0;
};

std::pair<double, double> global_extrema(std::span<const double> values);

// Equal-width bin; values at or below min go to 0, at or above max to n_bins - 1.
std::size_t discretize(double value, const HistogramSpec& spec);

class JointHistogram {
 public:
  JointHistogram(std::size_t n_bins, std::size_t n_classes);

  void add(std::size_t bin, std::size_t cls, std::uint64_t count = 1);
  void merge(const JointHistogram& other);

  std::size_t n_bins() const { return n_bins_; }
  std::size_t n_classes() const { return n_classes_; }
  std::uint64_t total() const { return total_; }
  std::uint64_t count(std::size_t bin, std::size_t cls) const {
    return counts_[bin * n_classes_ + cls];
  }

 private:
  std::size_t n_bins_;
  std::size_t n_classes_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

// Plug-in estimate, 0 log 0 := 0. Throws InvalidArgument on an empty table.
double mutual_information(const JointHistogram& joint);
double entropy_x(const JointHistogram& joint);
double entropy_y(const JointHistogram& joint);

struct MIMatrix {
  std::size_t n_bands = 0;
  std::size_t n_mod_bins = 0;
  std::vector<double> mi;  // band-major
  std::vector<double> band_centers_hz;
  std::vector<double> mod_freqs_hz;
  // Windows that contributed to each band (degenerate band-windows skipped).
  std::vector<std::uint64_t> samples_per_band;

  double at(std::size_t band, std::size_t bin) const { return mi[band * n_mod_bins + bin]; }
  // Arithmetic mean over bands, per modulation bin.
  std::vector<double> band_average() const;
  double max() const;
};

struct MiOptions {
  std::size_t n_bins = 100;
  std::size_t jobs = 1;
};

// Label index paired with a window starting at `start_sample`: the frame under
// the window centre, clamped to the track.
std::size_t window_label_index(std::size_t start_sample, std::size_t window_len,
                               int sample_rate, const LabelTrack& labels);

// Two-pass analysis over the corpus. Throws AlignmentError naming the
// utterance when a label track does not cover its audio.
MIMatrix mi_analysis(std::span<const Utterance> corpus, const CochlearFilterbank& fb,
                     const AnalysisConfig& cfg, const MiOptions& options = {});

}  // namespace fdlp
