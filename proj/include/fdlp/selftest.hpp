// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// selftest.hpp
//
// Built-in checks run by `fdlp selftest`: the AM carrier sweep through one
// sub-band and the agreement of the cepstral recursion with the transform of
// the sampled log envelope.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fdlp/dsp.hpp"

namespace fdlp {

enum class SweepRegion { kInside, kTransition, kOutside };
const char* to_string(SweepRegion r);

struct SweepPoint {
  double carrier_hz = 0.0;
  double magnitude = 0.0;  // recovered |coefficient| at the modulation bin
  double filter_weight = 0.0;
  SweepRegion region = SweepRegion::kTransition;
  bool degenerate = false;
};

struct SweepSpec {
  double mod_hz = 2.0;
  double depth = 0.5;
  double duration_s = 1.5;
  int sample_rate = 16000;
  std::size_t band = 7;
  double carrier_start_hz = 100.0;
  double carrier_stop_hz = 2500.0;
  double carrier_step_hz = 20.0;
  double tolerance = 0.1;      // inside: |m - depth| <= tolerance
  double outside_limit = 0.05; // outside: m <= outside_limit
};

// Inside: filter weight at the carrier >= 0.5. Outside: zero weight over
// [carrier - mod, carrier + mod]. Everything else is transition and unjudged.
std::vector<SweepPoint> carrier_sweep(const SweepSpec& spec, const AnalysisConfig& cfg);
bool sweep_passes(const std::vector<SweepPoint>& points, const SweepSpec& spec);

struct TwoPathResult {
  std::size_t frames = 0;
  std::size_t bands_compared = 0;
  double max_relative_error = 0.0;
};

// Random frames (white noise shaped by random slow envelopes); compares the
// tapered modulation coefficients from the recursion against the same taper
// applied to the DFT of the model's log envelope on a dense grid. Relative
// error per band is max |difference| / max |coefficient|.
TwoPathResult two_path_check(std::size_t n_frames, std::uint64_t seed, const AnalysisConfig& cfg,
                             int sample_rate = 16000, std::size_t grid = 16384);

}  // namespace fdlp
