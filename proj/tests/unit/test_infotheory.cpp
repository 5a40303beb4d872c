// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "fdlp/errors.hpp"
#include "fdlp/infotheory.hpp"
#include "fdlp/modulation.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace fdlp;
using Catch::Approx;

namespace {

JointHistogram from_table(const std::vector<std::vector<std::uint64_t>>& t) {
  JointHistogram h(t.size(), t[0].size());
  for (std::size_t x = 0; x < t.size(); ++x)
    for (std::size_t y = 0; y < t[x].size(); ++y) h.add(x, y, t[x][y]);
  return h;
}

std::vector<Utterance> small_corpus() {
  testing::SyntheticSpec spec;
  spec.utterances = 1;
  spec.segments_per_utterance = 2;
  return testing::synthetic_corpus(spec);
}

AnalysisConfig coarse_config() {
  AnalysisConfig cfg;
  cfg.hop_s = 0.25;
  cfg.n_mod_coeffs = 30;
  cfg.model_order = 30;
  return cfg;
}

}  // namespace

TEST_CASE("extrema", "[infotheory]") {
  const std::vector<double> v{3.0, -1.0, 7.5, 2.0};
  CHECK(global_extrema(v) == std::pair{-1.0, 7.5});
  CHECK_THROWS_AS(global_extrema(std::vector<double>{2.0, 2.0}), DegenerateDistribution);
  CHECK_THROWS_AS(global_extrema(std::vector<double>{}), DegenerateDistribution);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<double> all(1000);
  for (double& x : all) x = u(rng);
  ExtremaAccumulator a, b, c;
  for (std::size_t i = 0; i < all.size(); ++i) (i % 3 == 0 ? a : (i % 3 == 1 ? b : c)).add(all[i]);
  ExtremaAccumulator ab = a;
  ab.merge(b);
  ab.merge(c);
  ExtremaAccumulator cb = c;
  cb.merge(b);
  cb.merge(a);
  CHECK(ab.result() == global_extrema(all));
  CHECK(cb.result() == ab.result());
  CHECK(ab.count() == all.size());
}

TEST_CASE("discretize", "[infotheory]") {
  const HistogramSpec spec{10, 0.0, 1.0};
  CHECK(discretize(0.0, spec) == 0);
  CHECK(discretize(-3.0, spec) == 0);
  CHECK(discretize(0.05, spec) == 0);
  CHECK(discretize(0.15, spec) == 1);
  CHECK(discretize(0.999, spec) == 9);
  CHECK(discretize(1.0, spec) == 9);
  CHECK(discretize(42.0, spec) == 9);
  CHECK_THROWS_AS((HistogramSpec{0, 0.0, 1.0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((HistogramSpec{10, 1.0, 1.0}.validate()), InvalidArgument);
}

TEST_CASE("mutual information of small tables", "[infotheory]") {
  SECTION("independent variables") {
    CHECK(mutual_information(from_table({{1, 1}, {1, 1}})) == Approx(0.0).margin(1e-15));
    CHECK(mutual_information(from_table({{2, 4}, {3, 6}})) == Approx(0.0).margin(1e-15));
  }
  SECTION("deterministic relation") {
    CHECK(mutual_information(from_table({{5, 0}, {0, 5}})) == Approx(1.0).epsilon(1e-15));
    CHECK(mutual_information(from_table({{3, 0, 0, 0}, {0, 3, 0, 0}, {0, 0, 3, 0}, {0, 0, 0, 3}})) ==
          Approx(2.0).epsilon(1e-15));
  }
  SECTION("empty table") {
    JointHistogram h(3, 2);
    CHECK_THROWS_AS(mutual_information(h), InvalidArgument);
  }
  SECTION("out of range cells") {
    JointHistogram h(3, 2);
    CHECK_THROWS_AS(h.add(3, 0), InvalidArgument);
    CHECK_THROWS_AS(h.add(0, 2), InvalidArgument);
  }
}

TEST_CASE("mutual information properties", "[infotheory][property]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t nx = 1 + rng() % 12;
    const std::size_t ny = 1 + rng() % 6;
    std::vector<std::vector<std::uint64_t>> t(nx, std::vector<std::uint64_t>(ny));
    std::uint64_t total = 0;
    for (auto& row : t)
      for (auto& v : row) total += (v = rng() % 4 == 0 ? 0 : rng() % 50);
    if (total == 0) t[0][0] = total = 1;
    const auto h = from_table(t);
    const double mi = mutual_information(h);
    CAPTURE(trial, nx, ny);
    CHECK(mi == Approx(testing::brute_force_mi(t)).margin(1e-12));
    CHECK(mi >= -1e-12);
    CHECK(mi <= std::min(entropy_x(h), entropy_y(h)) + 1e-12);
    CHECK(mi <= std::log2(static_cast<double>(std::min(nx, ny))) + 1e-12);
  }
}

TEST_CASE("I(X;X) equals H(X)", "[infotheory][property]") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 20;
    std::vector<std::vector<std::uint64_t>> t(n, std::vector<std::uint64_t>(n));
    std::vector<std::uint64_t> marginal(n);
    for (std::size_t i = 0; i < n; ++i) t[i][i] = marginal[i] = 1 + rng() % 100;
    const auto h = from_table(t);
    CHECK(mutual_information(h) == Approx(entropy_x(h)).margin(1e-12));
    CHECK(entropy_x(h) == Approx(testing::brute_force_entropy(marginal)).margin(1e-12));
  }
}

TEST_CASE("a constant label carries no information", "[infotheory]") {
  std::mt19937_64 rng(8);
  JointHistogram h(50, 4);
  for (int i = 0; i < 1000; ++i) h.add(rng() % 50, 2);
  CHECK(mutual_information(h) == 0.0);
}

TEST_CASE("independent samples give a small estimate", "[infotheory]") {
  std::mt19937_64 rng(21);
  JointHistogram h(10, 3);
  const std::size_t n = 200000;
  for (std::size_t i = 0; i < n; ++i) h.add(rng() % 10, rng() % 3);
  // Plug-in bias is about (bins - 1)(classes - 1) / (2 n ln 2).
  CHECK(mutual_information(h) < 10.0 * 18.0 / (2.0 * n * std::log(2.0)));
}

TEST_CASE("histograms merge", "[infotheory]") {
  JointHistogram a(4, 2), b(4, 2), all(4, 2);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 300; ++i) {
    const std::size_t x = rng() % 4, y = rng() % 2;
    (i % 2 ? a : b).add(x, y);
    all.add(x, y);
  }
  a.merge(b);
  CHECK(a.total() == all.total());
  CHECK(mutual_information(a) == mutual_information(all));
  JointHistogram wrong(5, 2);
  CHECK_THROWS_AS(a.merge(wrong), InvalidArgument);
}

TEST_CASE("window label index", "[infotheory]") {
  LabelTrack labels;
  labels.labels.assign(300, 0);
  CHECK(window_label_index(0, 24000, 16000, labels) == 75);
  CHECK(window_label_index(160, 24000, 16000, labels) == 76);
  CHECK(window_label_index(16000 * 10, 24000, 16000, labels) == 299);
}

TEST_CASE("MI analysis on a small corpus", "[infotheory]") {
  const auto corpus = small_corpus();
  const auto cfg = coarse_config();
  const auto fb = filterbank_for(cfg, 16000);
  MiOptions opt;
  opt.n_bins = 20;
  const auto m = mi_analysis(corpus, fb, cfg, opt);
  CHECK(m.n_bands == cfg.n_bands);
  CHECK(m.n_mod_bins == cfg.n_mod_coeffs);
  CHECK(m.mi.size() == m.n_bands * m.n_mod_bins);
  CHECK(m.mod_freqs_hz[0] == 0.0);
  CHECK(m.mod_freqs_hz[1] == Approx(1.0 / 1.5));
  for (double v : m.mi) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-12);
  }
  CHECK(m.band_average().size() == m.n_mod_bins);

  SECTION("result does not depend on the thread count") {
    opt.jobs = 4;
    const auto threaded = mi_analysis(corpus, fb, cfg, opt);
    CHECK(threaded.mi == m.mi);
  }
}

TEST_CASE("MI analysis rejects misaligned labels", "[infotheory]") {
  auto corpus = small_corpus();
  corpus[0].name = "utt-short";
  corpus[0].labels.labels.resize(corpus[0].labels.labels.size() / 2);
  const auto cfg = coarse_config();
  const auto fb = filterbank_for(cfg, 16000);
  try {
    mi_analysis(corpus, fb, cfg);
    FAIL("expected AlignmentError");
  } catch (const AlignmentError& e) {
    CHECK(std::string(e.what()).find("utt-short") != std::string::npos);
  }
}
