// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// corpus.cpp

#include "fdlp/corpus.hpp"

#include <cmath>
#include <set>

#include "fdlp/errors.hpp"

namespace fdlp {

void LabelTrack::validate() const {
  if (!(frame_rate_hz > 0.0)) throw InvalidArgument("label frame rate must be positive");
  if (n_classes == 0) throw InvalidArgument("label track needs at least one class");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= n_classes) {
      throw InvalidArgument("class id " + std::to_string(labels[i]) + " at frame " +
                            std::to_string(i) + " outside [0, " + std::to_string(n_classes) +
                            ")");
    }
  }
}

std::size_t LabelTrack::classes_present() const {
  return std::set<int>(labels.begin(), labels.end()).size();
}

std::size_t frames_in(double duration_s, double frame_rate_hz) {
  // Tolerate representation error in e.g. 0.04 s * 100 Hz.
  return static_cast<std::size_t>(std::floor(duration_s * frame_rate_hz + 1e-9));
}

}  // namespace fdlp
