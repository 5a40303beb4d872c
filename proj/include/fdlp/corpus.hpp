// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// corpus.hpp

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fdlp/dsp.hpp"

namespace fdlp {

// A label track may differ from the audio's frame count by fewer than this
// many frames; it is then trimmed or padded with its last label.
inline constexpr std::size_t kLabelLengthSlack = 2;

// One class index per frame.
struct LabelTrack {
  std::vector<int> labels;
  std::size_t n_classes = 48;
  double frame_rate_hz = 100.0;

  // Throws InvalidArgument on out-of-range ids or a non-positive frame rate.
  void validate() const;
  // Number of distinct classes that actually occur.
  std::size_t classes_present() const;
};

struct Utterance {
  std::string name;
  AudioBuffer audio;
  LabelTrack labels;
};

// Frames of 1 / frame_rate_hz that fit entirely in `duration_s`.
std::size_t frames_in(double duration_s, double frame_rate_hz);

}  // namespace fdlp
