// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fdlp/cli.hpp"
#include "fdlp/frontend.hpp"
#include "fdlp/io.hpp"
#include "synthetic.hpp"

using namespace fdlp;
using Catch::Approx;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fdlp");
  std::ostringstream out, err;
  const int code = cli_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string dir(const std::string& name) {
  const auto d = std::filesystem::temp_directory_path() / "fdlp-cli-tests" / name;
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d.string();
}

}  // namespace

TEST_CASE("usage errors exit with 1", "[cli]") {
  const auto r = run({"modspec", "--no-such-flag", "x.wav"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("no-such-flag") != std::string::npos);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"modspec"}).code == kExitUsage);
  CHECK(run({"modspec", "--jobs", "0", "x.wav"}).code == kExitUsage);
  CHECK(run({"modspec", "--window", "0", "x.wav"}).code == kExitUsage);
  CHECK(run({"learn-weights", "--mode", "phase", "m.txt"}).code == kExitUsage);
  CHECK(run({"synth-am", "--depth", "1.5", "-o", dir("usage") + "/a.wav"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"--version"}).code == kExitOk);
}

TEST_CASE("data errors exit with 2 and name the file", "[cli]") {
  const auto d = dir("data");
  const auto empty = d + "/empty.wav";
  write_text_file(empty, "");
  const auto r = run({"modspec", "-o", d + "/x", empty});
  CHECK(r.code == kExitDataError);
  CHECK(r.err.find(empty) != std::string::npos);

  const auto missing = d + "/missing.wav";
  const auto m = run({"fdlp-spectrogram", missing});
  CHECK(m.code == kExitDataError);
  CHECK(m.err.find(missing) != std::string::npos);

  CHECK(run({"mi", d + "/no-manifest.txt"}).code == kExitDataError);
}

TEST_CASE("synth-am and modspec", "[cli]") {
  const auto d = dir("modspec");
  const auto wav = d + "/am.wav";
  REQUIRE(run({"synth-am", "--carrier", "1000", "--mod", "2", "--duration", "1.5", "-o", wav}).code ==
          kExitOk);
  const auto audio = read_wav(wav);
  CHECK(audio.size() == 24000);

  REQUIRE(run({"modspec", "-o", d + "/a", wav}).code == kExitOk);
  REQUIRE(run({"modspec", "-o", d + "/b", wav}).code == kExitOk);
  const auto csv = read_text_file(d + "/a.csv");
  CHECK(csv == read_text_file(d + "/b.csv"));
  CHECK(read_text_file(d + "/a.json") == read_text_file(d + "/b.json"));

  const auto table = parse_csv(csv);
  CHECK(table.metadata.count("config_hash") == 1);
  CHECK(table.column_labels[3] == "2");
  double best = 0.0;
  for (std::size_t r = 0; r < table.rows(); ++r) best = std::max(best, table.at(r, 3));
  CHECK(best == Approx(0.5).margin(0.1));
}

TEST_CASE("fdlp-spectrogram", "[cli]") {
  const auto d = dir("spectrogram");
  const auto wav = d + "/am.wav";
  REQUIRE(run({"synth-am", "--duration", "2", "-o", wav}).code == kExitOk);
  REQUIRE(run({"fdlp-spectrogram", "-o", d + "/s", wav}).code == kExitOk);
  const auto t = parse_json(read_text_file(d + "/s.json"));
  CHECK(t.rows() == 200);
  CHECK(t.cols() == 20);

  const auto bad = d + "/bad.weights";
  write_text_file(bad, "not a weight file");
  const auto r = run({"fdlp-spectrogram", "--weights", bad, "-o", d + "/w", wav});
  CHECK(r.code == kExitDataError);
  CHECK(r.err.find(bad) != std::string::npos);
}

TEST_CASE("learn-weights then apply-weights", "[cli]") {
  const auto d = dir("train");
  testing::SyntheticSpec spec;
  spec.utterances = 2;
  spec.segments_per_utterance = 2;
  spec.labels = testing::LabelScheme::kPhase;
  const auto manifest = testing::write_corpus(testing::synthetic_corpus(spec), d);

  REQUIRE(run({"learn-weights", "--classes", "3", "--epochs", "8", "--freeze", "4", "-o",
               d + "/lw", manifest})
              .code == kExitOk);
  const auto w = load_weights(d + "/lw.weights", 20, 80);
  const auto r = run({"apply-weights", "--classes", "3", "--epochs", "5", "--weights",
                      d + "/lw.weights", "-o", d + "/aw", manifest});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("weights unchanged") != std::string::npos);
  CHECK(load_weights(d + "/lw.weights") == w);
  const auto loss = parse_csv(read_text_file(d + "/aw_loss.csv"));
  CHECK(loss.rows() == 6);
  CHECK(loss.values.back() < loss.values.front());

  CHECK(run({"apply-weights", "--classes", "3", "--bands", "10", "--weights", d + "/lw.weights",
             "-o", d + "/x", manifest})
            .code == kExitDataError);
}

TEST_CASE("mi on shuffled labels finds nothing", "[cli][mi]") {
  const auto d = dir("mi-null");
  testing::SyntheticSpec spec;
  spec.utterances = 5;
  spec.segments_per_utterance = 2;
  auto corpus = testing::synthetic_corpus(spec);
  std::vector<int> all;
  for (const auto& u : corpus) all.insert(all.end(), u.labels.labels.begin(), u.labels.labels.end());
  std::mt19937_64 rng(99);
  std::shuffle(all.begin(), all.end(), rng);
  std::size_t at = 0;
  for (auto& u : corpus) {
    for (int& l : u.labels.labels) l = all[at++];
  }
  const auto manifest = testing::write_corpus(corpus, d);
  const auto r = run({"mi", "--classes", "2", "-o", d + "/mi", manifest});
  REQUIRE(r.code == kExitOk);
  const auto m = parse_csv(read_text_file(d + "/mi_matrix.csv"));
  CHECK(m.rows() == 20);
  CHECK(m.cols() == 80);
  CHECK(*std::max_element(m.values.begin(), m.values.end()) < 0.05);
}

TEST_CASE("selftest", "[cli]") {
  const auto r = run({"selftest"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("sweep: PASS") != std::string::npos);
  CHECK(r.out.find("two-path:") != std::string::npos);
  CHECK(run({"selftest", "--band", "20"}).code == kExitUsage);
}
