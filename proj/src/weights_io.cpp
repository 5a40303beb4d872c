// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// weights_io.cpp
//
// Layout (all integers little-endian):
//   8 bytes  magic "FDLPMW\0\0"
//   u32      format version (1)
//   u32      mode (0 magnitude, 1 real-imag)
//   u32      n_bands
//   u32      n_coeffs
//   u64      parameter count
//   f64 x n  parameters, IEEE-754 bit patterns
//   u64      FNV-1a of every preceding byte

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>

#include "fdlp/errors.hpp"
#include "fdlp/frontend.hpp"
#include "fdlp/hash.hpp"
#include "fdlp/io.hpp"

namespace fdlp {

namespace {

constexpr char kMagic[8] = {'F', 'D', 'L', 'P', 'M', 'W', '\0', '\0'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 8 + 4 * 4 + 8;

void put(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get(const std::string& in, std::size_t at, int bytes) {
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(in[at + i]);
  return v;
}

}  // namespace

void save_weights(const ModulationWeights& weights, const std::string& path) {
  std::string out(kMagic, sizeof kMagic);
  put(out, kVersion, 4);
  put(out, static_cast<std::uint32_t>(weights.mode()), 4);
  put(out, weights.n_bands(), 4);
  put(out, weights.n_coeffs(), 4);
  put(out, weights.params().size(), 8);
  for (double v : weights.params()) put(out, std::bit_cast<std::uint64_t>(v), 8);
  Fnv1a h;
  h.update(out);
  put(out, h.value(), 8);
  write_text_file(path, out);
}

ModulationWeights load_weights(const std::string& path) {
  const auto in = read_text_file(path);
  if (in.size() < kHeaderBytes + 8 || std::memcmp(in.data(), kMagic, sizeof kMagic) != 0) {
    throw FormatError(path + ": not a modulation weight file");
  }
  const auto version = static_cast<std::uint32_t>(get(in, 8, 4));
  if (version != kVersion) {
    throw VersionError(path + ": weight format version " + std::to_string(version) +
                       ", this build reads version " + std::to_string(kVersion));
  }
  const auto mode = static_cast<std::uint32_t>(get(in, 12, 4));
  const auto n_bands = static_cast<std::size_t>(get(in, 16, 4));
  const auto n_coeffs = static_cast<std::size_t>(get(in, 20, 4));
  const auto n_params = get(in, 24, 8);
  if (mode > 1) throw FormatError(path + ": unknown weight mode " + std::to_string(mode));
  const std::uint64_t per = mode == 0 ? 1 : 2;
  if (n_bands == 0 || n_coeffs == 0 || n_params != n_bands * n_coeffs * per) {
    throw FormatError(path + ": header dimensions are inconsistent");
  }
  if (in.size() != kHeaderBytes + 8 * n_params + 8) {
    throw FormatError(path + ": corrupt file (expected " +
                      std::to_string(kHeaderBytes + 8 * n_params + 8) + " bytes, found " +
                      std::to_string(in.size()) + ")");
  }
  Fnv1a h;
  h.update(in.data(), in.size() - 8);
  if (h.value() != get(in, in.size() - 8, 8)) throw FormatError(path + ": corrupt file (checksum)");
  std::vector<double> params(n_params);
  for (std::size_t i = 0; i < n_params; ++i) {
    params[i] = std::bit_cast<double>(get(in, kHeaderBytes + 8 * i, 8));
  }
  try {
    return ModulationWeights(static_cast<WeightMode>(mode), n_bands, n_coeffs, std::move(params));
  } catch (const InvalidArgument& e) {
    throw FormatError(path + ": " + e.what());
  }
}

ModulationWeights load_weights(const std::string& path, std::size_t n_bands,
                               std::size_t n_coeffs) {
  auto w = load_weights(path);
  if (w.n_bands() != n_bands || w.n_coeffs() != n_coeffs) {
    throw DimensionError(path + ": weights are " + std::to_string(w.n_bands()) + " bands x " +
                         std::to_string(w.n_coeffs()) + " coefficients, configuration needs " +
                         std::to_string(n_bands) + " x " + std::to_string(n_coeffs));
  }
  return w;
}

}  // namespace fdlp
