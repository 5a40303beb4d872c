// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// wav.cpp

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>

#include "fdlp/errors.hpp"
#include "fdlp/io.hpp"

namespace fdlp {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t read_u32(std::string_view b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[at + i]);
  return v;
}

std::uint16_t read_u16(std::string_view b, std::size_t at) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                    (static_cast<unsigned char>(b[at + 1]) << 8));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

}  // namespace

AudioBuffer parse_wav(std::string_view bytes, const std::string& name) {
  auto fail = [&](const std::string& why) -> FormatError {
    return FormatError(name + ": " + why);
  };
  if (bytes.empty()) throw fail("empty file");
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE") {
    throw fail("not a RIFF/WAVE file");
  }
  bool have_fmt = false;
  int rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const auto id = bytes.substr(pos, 4);
    const std::size_t size = read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (id == "fmt ") {
      if (size < 16 || body + size > bytes.size()) throw fail("truncated fmt chunk");
      std::uint16_t format = read_u16(bytes, body);
      const std::uint16_t channels = read_u16(bytes, body + 2);
      rate = static_cast<int>(read_u32(bytes, body + 4));
      const std::uint16_t bits = read_u16(bytes, body + 14);
      if (format == kFormatExtensible && size >= 40) format = read_u16(bytes, body + 24);
      if (format != kFormatPcm) throw fail("not PCM (format tag " + std::to_string(format) + ")");
      if (channels != 1) throw fail(std::to_string(channels) + " channels, need mono");
      if (bits != 16) throw fail(std::to_string(bits) + "-bit samples, need 16-bit");
      if (rate <= 0) throw fail("invalid sample rate");
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw fail("data chunk before fmt chunk");
      if (body + size > bytes.size()) {
        throw fail("truncated data chunk (header says " + std::to_string(size) + " bytes, " +
                   std::to_string(bytes.size() - body) + " present)");
      }
      if (size % 2 != 0) throw fail("data chunk holds a partial sample");
      if (size == 0) throw fail("no samples");
      std::vector<double> samples(size / 2);
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto code = static_cast<std::int16_t>(read_u16(bytes, body + 2 * i));
        samples[i] = static_cast<double>(code) / 32768.0;
      }
      return AudioBuffer(std::move(samples), rate);
    }
    pos = body + size + (size & 1);
  }
  throw fail(have_fmt ? "missing data chunk" : "missing fmt chunk");
}

AudioBuffer read_wav(const std::string& path) {
  return parse_wav(read_text_file(path), path);
}

std::string encode_wav(const AudioBuffer& audio) {
  const auto n = audio.size();
  if (n * 2 > 0xFFFFFFFFULL - 36) throw InvalidArgument("audio too long for a WAV file");
  const auto data_bytes = static_cast<std::uint32_t>(n * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(audio.sample_rate()));
  put_u32(out, static_cast<std::uint32_t>(audio.sample_rate()) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out += "data";
  put_u32(out, data_bytes);
  for (double v : audio.samples()) {
    const double code = std::clamp(std::nearbyint(v * 32768.0), -32768.0, 32767.0);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(code)));
  }
  return out;
}

void write_wav(const std::string& path, const AudioBuffer& audio) {
  write_text_file(path, encode_wav(audio));
}

}  // namespace fdlp
