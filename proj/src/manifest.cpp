// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// manifest.cpp

#include <filesystem>
#include <set>
#include <sstream>

#include "fdlp/errors.hpp"
#include "fdlp/io.hpp"
#include "fdlp/parallel.hpp"

namespace fdlp {

void CorpusManifest::validate() const {
  if (entries.empty()) throw FormatError("manifest lists no audio files");
  std::set<std::string> seen;
  for (const auto& e : entries) {
    if (!seen.insert(e.audio_path).second) {
      throw FormatError("manifest lists '" + e.audio_path + "' twice");
    }
  }
  if (!supported_sample_rate(expected_rate)) {
    throw InvalidArgument("unsupported sample rate " + std::to_string(expected_rate));
  }
}

CorpusManifest parse_manifest(std::string_view text, const std::string& base_dir) {
  namespace fs = std::filesystem;
  auto resolve = [&](const std::string& p) {
    if (base_dir.empty() || fs::path(p).is_absolute()) return p;
    return (fs::path(base_dir) / p).lexically_normal().string();
  };
  CorpusManifest m;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string audio, labels, extra;
    if (!(fields >> audio)) continue;
    fields >> labels;
    if (fields >> extra) {
      throw FormatError("manifest line " + std::to_string(line_no) + " has more than two fields");
    }
    ManifestEntry e{resolve(audio), std::nullopt};
    if (!labels.empty()) e.label_path = resolve(labels);
    m.entries.push_back(std::move(e));
  }
  m.validate();
  return m;
}

CorpusManifest read_manifest(const std::string& path) {
  const auto dir = std::filesystem::path(path).parent_path().string();
  return parse_manifest(read_text_file(path), dir);
}

bool supported_sample_rate(int rate) { return rate == 16000 || rate == 8000; }

std::vector<Utterance> load_corpus(const CorpusManifest& manifest, std::size_t n_classes,
                                   bool require_labels, std::size_t jobs) {
  manifest.validate();
  std::vector<std::optional<Utterance>> slots(manifest.entries.size());
  parallel_for(slots.size(), jobs, [&](std::size_t i) {
    const auto& e = manifest.entries[i];
    auto audio = read_wav(e.audio_path);
    if (!supported_sample_rate(audio.sample_rate())) {
      throw FormatError(e.audio_path + ": sample rate " + std::to_string(audio.sample_rate()) +
                        " Hz is not supported (16000 or 8000)");
    }
    LabelTrack track;
    track.n_classes = n_classes;
    if (e.label_path) {
      track = read_labels(*e.label_path, frames_in(audio.duration_s(), 100.0), n_classes);
    } else if (require_labels) {
      throw FormatError(e.audio_path + ": manifest entry has no label file");
    }
    slots[i].emplace(Utterance{e.audio_path, std::move(audio), std::move(track)});
  });
  std::vector<Utterance> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  const int rate = out.front().audio.sample_rate();
  for (const auto& u : out) {
    if (u.audio.sample_rate() != rate) {
      throw FormatError(u.name + ": sample rate " + std::to_string(u.audio.sample_rate()) +
                        " Hz differs from the corpus rate " + std::to_string(rate) + " Hz");
    }
  }
  return out;
}

}  // namespace fdlp
