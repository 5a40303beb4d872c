// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// errors.hpp

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fdlp {

// Bad caller input: sizes, ranges, non-finite samples.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A sub-band with no usable energy. Callers typically skip the band.
class DegenerateBand : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Levinson recursion produced a reflection coefficient with |k| >= 1.
class NumericalDegeneracy : public std::runtime_error {
 public:
  NumericalDegeneracy(const std::string& what, std::size_t stage)
      : std::runtime_error(what), stage_(stage) {}
  std::size_t stage() const noexcept { return stage_; }

 private:
  std::size_t stage_;
};

// Model outside the domain of an operation (e.g. non-minimum-phase).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A value stream without spread (min == max).
class DegenerateDistribution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Labels do not cover their audio.
class AlignmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or malformed input file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VersionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrainingFailure : public std::runtime_error {
 public:
  TrainingFailure(const std::string& what, std::size_t epoch)
      : std::runtime_error(what), epoch_(epoch) {}
  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

}  // namespace fdlp
