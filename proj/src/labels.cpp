// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// labels.cpp

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <string>

#include "fdlp/errors.hpp"
#include "fdlp/io.hpp"

namespace fdlp {

LabelTrack parse_labels(std::string_view text, std::size_t expected_frames,
                        std::size_t n_classes, double frame_rate_hz, const std::string& name) {
  LabelTrack track;
  track.n_classes = n_classes;
  track.frame_rate_hz = frame_rate_hz;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    const auto token = text.substr(i, j - i);
    long value = 0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || end != token.data() + token.size()) {
      throw FormatError(name + ": label " + std::to_string(track.labels.size()) + " ('" +
                        std::string(token) + "') is not an integer");
    }
    if (value < 0 || static_cast<std::size_t>(value) >= n_classes) {
      throw FormatError(name + ": class id " + std::to_string(value) + " at frame " +
                        std::to_string(track.labels.size()) + " outside [0, " +
                        std::to_string(n_classes) + ")");
    }
    track.labels.push_back(static_cast<int>(value));
    i = j;
  }
  const std::size_t have = track.labels.size();
  const std::size_t diff = have > expected_frames ? have - expected_frames : expected_frames - have;
  if (have == 0 || diff >= kLabelLengthSlack) {
    throw AlignmentError(name + ": " + std::to_string(have) + " labels for " +
                         std::to_string(expected_frames) + " frames of audio");
  }
  const int last = track.labels.back();
  track.labels.resize(expected_frames, last);
  return track;
}

LabelTrack read_labels(const std::string& path, std::size_t expected_frames,
                       std::size_t n_classes, double frame_rate_hz) {
  return parse_labels(read_text_file(path), expected_frames, n_classes, frame_rate_hz, path);
}

}  // namespace fdlp
