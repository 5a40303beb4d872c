// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// io.hpp
//
// Audio and label ingestion, corpus manifests and table exports.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fdlp/corpus.hpp"
#include "fdlp/dsp.hpp"

namespace fdlp {

// PCM 16-bit mono only; samples are value / 32768. Throws FormatError naming
// the path and the problem.
AudioBuffer read_wav(const std::string& path);
AudioBuffer parse_wav(std::string_view bytes, const std::string& name = "<memory>");
// Rounds to the nearest 16-bit code, clipping to [-1, 32767 / 32768].
void write_wav(const std::string& path, const AudioBuffer& audio);
std::string encode_wav(const AudioBuffer& audio);

// Whitespace-separated class ids, one per frame. A track fewer than
// kLabelLengthSlack frames off expected_frames is trimmed or padded by
// repeating its last label; anything further off throws AlignmentError. Out-of-range ids throw FormatError.
LabelTrack read_labels(const std::string& path, std::size_t expected_frames,
                       std::size_t n_classes = 48, double frame_rate_hz = 100.0);
LabelTrack parse_labels(std::string_view text, std::size_t expected_frames,
                        std::size_t n_classes = 48, double frame_rate_hz = 100.0,
                        const std::string& name = "<memory>");

struct ManifestEntry {
  std::string audio_path;
  std::optional<std::string> label_path;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;
  int expected_rate = 16000;

  // Throws FormatError when empty or when an audio path repeats.
  void validate() const;
};

// One entry per line: "audio.wav [labels.txt]". Blank lines and '#' comments
// are skipped; relative paths resolve against the manifest's directory.
CorpusManifest read_manifest(const std::string& path);
CorpusManifest parse_manifest(std::string_view text, const std::string& base_dir = "");

// Sample rates other than 16 kHz and 8 kHz are rejected.
bool supported_sample_rate(int rate);

// Reads every entry in parallel; the result keeps manifest order. All files
// must share one supported sample rate. Entries without labels get an empty
// track unless require_labels is set.
std::vector<Utterance> load_corpus(const CorpusManifest& manifest, std::size_t n_classes,
                                   bool require_labels, std::size_t jobs = 1);

struct ExportTable {
  std::string name;
  std::string row_header = "band_center_hz";
  std::string column_header = "modulation_hz";
  std::vector<std::string> row_labels;
  std::vector<std::string> column_labels;
  std::vector<double> values;  // row-major
  std::map<std::string, std::string> metadata;

  std::size_t rows() const { return row_labels.size(); }
  std::size_t cols() const { return column_labels.size(); }
  double at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }
  void validate() const;
};

// 9 significant digits, '.' decimal separator.
std::string format_number(double v);
std::vector<std::string> format_numbers(const std::vector<double>& v);

// Leading "# " + JSON metadata line, header row, then one row per label.
std::string to_csv(const ExportTable& table);
std::string to_json(const ExportTable& table);
ExportTable parse_csv(std::string_view text);
ExportTable parse_json(std::string_view text);

void write_text_file(const std::string& path, std::string_view contents);
std::string read_text_file(const std::string& path);

// Directory for exports when no explicit path is given: $FDLP_EXPORT_DIR or ".".
std::string default_export_dir();

}  // namespace fdlp
