// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <string>

#include "fdlp/errors.hpp"
#include "fdlp/frontend.hpp"
#include "fdlp/io.hpp"
#include "fdlp/modulation.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace fdlp;
using Catch::Approx;

namespace {

constexpr double kOff = -std::numeric_limits<double>::infinity();

const AnalysisConfig kCfg{};

const CochlearFilterbank& filterbank() {
  static const CochlearFilterbank fb = filterbank_for(kCfg, 16000);
  return fb;
}

std::vector<Utterance> phase_corpus(std::uint64_t seed = 1, std::size_t utterances = 2) {
  testing::SyntheticSpec spec;
  spec.utterances = utterances;
  spec.segments_per_utterance = 2;
  spec.seed = seed;
  spec.labels = testing::LabelScheme::kPhase;
  return testing::synthetic_corpus(spec);
}

const std::vector<PreparedUtterance>& prepared_phase_corpus() {
  static const auto corpus = phase_corpus();
  static const auto prepared = prepare_corpus(corpus, filterbank(), kCfg, 100.0, 2);
  return prepared;
}

ModulationWeights random_weights(WeightMode mode, std::uint64_t seed) {
  ModulationWeights w(mode, kCfg.n_bands, kCfg.n_mod_coeffs);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (double& p : w.params()) p = u(rng);
  return w;
}

ClassifierParams random_classifier(const PreparedUtterance& utt, std::uint64_t seed) {
  auto c = ClassifierParams::initialise(3, kCfg.n_bands, seed, 0.5);
  const auto spec = assemble_spectrogram(utt.cepstra, std::nullopt);
  for (std::size_t b = 0; b < spec.n_bands; ++b) {
    double mean = 0.0;
    for (std::size_t f = 0; f < spec.n_frames; ++f) mean += spec.at(f, b);
    c.feature_mean[b] = mean / static_cast<double>(spec.n_frames);
    c.feature_scale[b] = 2.0;
  }
  return c;
}

std::string temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "fdlp-frontend-tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_CASE("modulation weights", "[frontend][weights]") {
  ModulationWeights w(WeightMode::kMagnitude, 3, 4);
  CHECK(w.params().size() == 12);
  for (std::size_t b = 0; b < 3; ++b)
    for (std::size_t n = 0; n < 4; ++n) CHECK(w.effective(b, n) == 1.0);

  ModulationWeights ri(WeightMode::kRealImag, 3, 4);
  CHECK(ri.params().size() == 24);
  CHECK(ri.index(1, 2, 1) == 2 * (4 + 2) + 1);

  std::vector<double> p(12, 0.0);
  p[w.index(0, 1)] = kOff;
  p[w.index(2, 3)] = std::log(2.0);
  ModulationWeights custom(WeightMode::kMagnitude, 3, 4, p);
  CHECK(custom.effective(0, 1) == 0.0);
  CHECK(custom.effective(2, 3) == Approx(2.0));

  const std::vector<std::complex<double>> cep{{1.0, 0.0}, {0.5, -0.5}, {0.25, 0.25}, {2.0, 1.0}};
  const auto out = custom.apply(2, cep);
  CHECK(out[3] == std::complex<double>(4.0, 2.0));
  CHECK(custom.apply(0, cep)[1] == std::complex<double>{});

  std::vector<double> ri_params(24, 0.0);
  ri_params[ri.index(1, 1, 0)] = std::log(3.0);
  ri_params[ri.index(1, 1, 1)] = kOff;
  ModulationWeights ri_custom(WeightMode::kRealImag, 3, 4, ri_params);
  const auto ri_out = ri_custom.apply(1, cep);
  CHECK(ri_out[1].real() == Approx(1.5));
  CHECK(ri_out[1].imag() == 0.0);

  CHECK_THROWS_AS(ModulationWeights(WeightMode::kMagnitude, 3, 4, std::vector<double>(11)),
                  InvalidArgument);
  CHECK_THROWS_AS(ModulationWeights(WeightMode::kMagnitude, 1, 1,
                                    std::vector<double>{std::nan("")}),
                  InvalidArgument);
  CHECK_THROWS_AS(ModulationWeights(WeightMode::kMagnitude, 0, 4), InvalidArgument);
  CHECK(weight_mode_from_string("real-imag") == WeightMode::kRealImag);
  CHECK(std::string(to_string(WeightMode::kMagnitude)) == "magnitude");
  CHECK_THROWS_AS(weight_mode_from_string("phase"), InvalidArgument);
}

TEST_CASE("FDLP spectrogram shape", "[frontend]") {
  const auto s = am_test_signal(1000.0, 4.0, 0.5, 2.345, 16000);
  const auto spec = fdlp_spectrogram(s, filterbank(), kCfg);
  CHECK(spec.n_frames == 234);
  CHECK(spec.n_bands == kCfg.n_bands);
  CHECK(spec.frame_rate_hz == 100.0);
  CHECK(spec.band_centers_hz == filterbank().centers_hz);
  for (double v : spec.values) CHECK(std::isfinite(v));
}

TEST_CASE("identity weights reproduce the plain spectrogram", "[frontend][property]") {
  const auto& utt = prepared_phase_corpus().front();
  const auto plain = assemble_spectrogram(utt.cepstra, std::nullopt);
  for (WeightMode mode : {WeightMode::kMagnitude, WeightMode::kRealImag}) {
    const auto weighted =
        assemble_spectrogram(utt.cepstra, ModulationWeights(mode, kCfg.n_bands, kCfg.n_mod_coeffs));
    CHECK(weighted.values == plain.values);
  }
}

TEST_CASE("weights gate the modulation content", "[frontend]") {
  const auto corpus = phase_corpus(3, 1);
  const auto& audio = corpus.front().audio;

  auto run = [&](double max_mod_hz) {
    ModulationWeights w(WeightMode::kMagnitude, kCfg.n_bands, kCfg.n_mod_coeffs);
    for (std::size_t b = 0; b < kCfg.n_bands; ++b) {
      for (std::size_t n = 1; n < kCfg.n_mod_coeffs; ++n) {
        if (static_cast<double>(n) * kCfg.resolution_hz() > max_mod_hz + 1e-9) {
          w.params()[w.index(b, n)] = kOff;
        }
      }
    }
    const auto spec = fdlp_spectrogram(audio, filterbank(), w, kCfg);
    const auto prepared = prepare_cepstra(audio, filterbank(), kCfg);
    const auto oracle = testing::lowpass_envelope_spectrogram(audio, filterbank(), kCfg, max_mod_hz,
                                                              prepared.points_per_frame);
    REQUIRE(oracle.size() == spec.values.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      worst = std::max(worst, std::abs(oracle[i] - spec.values[i]));
    }
    return worst;
  };

  SECTION("only c[0] left gives flat window envelopes") { CHECK(run(0.0) < 1e-6); }
  SECTION("low-pass at 10 Hz") { CHECK(run(10.0) < 1e-6); }
}

TEST_CASE("weight dimensions are checked", "[frontend]") {
  const auto s = am_test_signal(1000.0, 4.0, 0.5, 1.0, 16000);
  CHECK_THROWS_AS(fdlp_spectrogram(s, filterbank(),
                                   ModulationWeights(WeightMode::kMagnitude, 19, 80), kCfg),
                  InvalidArgument);
  CHECK_THROWS_AS(fdlp_spectrogram(s, filterbank(),
                                   ModulationWeights(WeightMode::kMagnitude, 20, 40), kCfg),
                  InvalidArgument);
}

TEST_CASE("analytic weight gradient", "[frontend][gradient]") {
  const auto& utt = prepared_phase_corpus().front();
  GradientCheckSample sample{utt, 140, 5, random_classifier(utt, 4)};
  for (WeightMode mode : {WeightMode::kMagnitude, WeightMode::kRealImag}) {
    CAPTURE(to_string(mode));
    const auto w = random_weights(mode, 9);
    const double dev = weight_gradient_check(w, sample);
    CHECK(dev < 1e-4);
    CHECK(weight_gradient_check(w, sample) == dev);
  }
  CHECK_THROWS_AS(weight_gradient_check(random_weights(WeightMode::kMagnitude, 1),
                                        GradientCheckSample{utt, 0, 11, sample.classifier}),
                  InvalidArgument);
}

TEST_CASE("a weight on a zero coefficient has zero gradient", "[frontend][gradient]") {
  PreparedUtterance utt = prepared_phase_corpus().front();
  const std::size_t band = 3;
  const std::size_t coeff = 7;
  for (auto& window : utt.cepstra.cepstra) {
    if (!window[band].empty()) window[band][coeff] = {};
  }
  const auto classifier = random_classifier(utt, 2);
  const auto w = random_weights(WeightMode::kMagnitude, 5);
  std::vector<std::vector<bool>> mask(1, std::vector<bool>(utt.cepstra.n_frames, false));
  for (std::size_t f = 100; f < 105; ++f) mask[0][f] = true;
  const std::span<const PreparedUtterance> one(&utt, 1);
  const auto lg = frame_loss(one, w, classifier, GradientRequest::kAll, &mask);
  CHECK(lg.weight_grad[w.index(band, coeff)] == 0.0);
  auto probe = w;
  probe.params()[w.index(band, coeff)] += 1e-5;
  CHECK(frame_loss(one, probe, classifier, GradientRequest::kNone, &mask).loss == lg.loss);
  CHECK(weight_gradient_check(w, GradientCheckSample{utt, 100, 5, classifier}) < 1e-4);
}

TEST_CASE("training", "[frontend][train]") {
  const auto& corpus = prepared_phase_corpus();

  SECTION("schedule checks") {
    CHECK_THROWS_AS((TrainSchedule{10, 11, 0.5, 2.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((TrainSchedule{10, 5, 0.0, 2.0}.validate()), InvalidArgument);
    CHECK_NOTHROW(TrainSchedule{10, 10, 0.5, 0.0}.validate());
  }
  SECTION("fully frozen keeps the initial weights") {
    TrainOptions opt;
    opt.initial_weights = random_weights(WeightMode::kMagnitude, 3);
    const auto r = train_weights(corpus, TrainSchedule{20, 20, 0.5, 2.0}, WeightMode::kMagnitude, opt);
    CHECK(r.weights == *opt.initial_weights);
    const auto d = train_weights(corpus, TrainSchedule{5, 5, 0.5, 2.0}, WeightMode::kRealImag);
    CHECK(d.weights == ModulationWeights(WeightMode::kRealImag, kCfg.n_bands, kCfg.n_mod_coeffs));
  }
  SECTION("frozen phase lowers the loss every epoch") {
    const auto r = train_weights(corpus, TrainSchedule{6, 6, 0.5, 2.0}, WeightMode::kMagnitude);
    REQUIRE(r.loss_curve.size() == 6);
    for (std::size_t e = 1; e < 6; ++e) CHECK(r.loss_curve[e] < r.loss_curve[e - 1]);
  }
  SECTION("weights stay positive and the gradient stays exact") {
    const auto r = train_weights(corpus, TrainSchedule{50, 10, 0.5, 2.0}, WeightMode::kMagnitude);
    for (double p : r.weights.params()) CHECK(std::isfinite(p));
    for (std::size_t b = 0; b < kCfg.n_bands; ++b)
      for (std::size_t n = 0; n < kCfg.n_mod_coeffs; ++n) CHECK(r.weights.effective(b, n) > 0.0);
    CHECK(r.final_loss < r.loss_curve.front());
    CHECK(weight_gradient_check(r.weights, GradientCheckSample{corpus[1], 200, 5, r.classifier}) <
          1e-4);
  }
  SECTION("training is deterministic") {
    TrainOptions opt;
    opt.seed = 17;
    const TrainSchedule sched{12, 6, 0.5, 2.0};
    const auto a = train_weights(corpus, sched, WeightMode::kRealImag, opt);
    opt.jobs = 3;
    const auto b = train_weights(corpus, sched, WeightMode::kRealImag, opt);
    CHECK(a.weights == b.weights);
    CHECK(a.classifier.weights == b.classifier.weights);
    CHECK(a.loss_curve == b.loss_curve);
  }
  SECTION("a single class is rejected") {
    auto one_class = corpus;
    for (auto& p : one_class) std::fill(p.frame_labels.begin(), p.frame_labels.end(), 2);
    CHECK_THROWS_AS(train_weights(one_class, TrainSchedule{}, WeightMode::kMagnitude),
                    InvalidArgument);
  }
  SECTION("mismatched initial weights") {
    TrainOptions opt;
    opt.initial_weights = ModulationWeights(WeightMode::kMagnitude, 10, 80);
    const auto raw = phase_corpus(1, 1);
    CHECK_THROWS_AS(train_weights(raw, filterbank(), kCfg, TrainSchedule{2, 2, 0.5, 2.0},
                                  WeightMode::kMagnitude, opt),
                    DimensionError);
  }
}

TEST_CASE("label alignment", "[frontend]") {
  auto corpus = phase_corpus(5, 1);
  corpus[0].name = "utt-x";
  auto& labels = corpus[0].labels.labels;
  const std::size_t n = labels.size();

  labels.resize(n + 1, labels.back());
  CHECK(prepare_corpus(corpus, filterbank(), kCfg, 100.0, 1)[0].frame_labels.size() == n);
  labels.resize(n - 1);
  CHECK(prepare_corpus(corpus, filterbank(), kCfg, 100.0, 1)[0].frame_labels.size() == n);
  labels.resize(n - 2);
  try {
    prepare_corpus(corpus, filterbank(), kCfg, 100.0, 1);
    FAIL("expected AlignmentError");
  } catch (const AlignmentError& e) {
    CHECK(std::string(e.what()).find("utt-x") != std::string::npos);
  }
}

TEST_CASE("weight files", "[frontend][io]") {
  const auto w = random_weights(WeightMode::kRealImag, 12);
  auto with_off = random_weights(WeightMode::kMagnitude, 13);
  with_off.params()[with_off.index(4, 9)] = kOff;
  const auto path = temp_path("w.bin");

  SECTION("round trip is bit exact") {
    save_weights(w, path);
    CHECK(load_weights(path) == w);
    CHECK(load_weights(path, kCfg.n_bands, kCfg.n_mod_coeffs) == w);
    save_weights(with_off, path);
    const auto back = load_weights(path);
    CHECK(back.params()[back.index(4, 9)] == kOff);
    CHECK(back == with_off);
  }
  SECTION("errors") {
    save_weights(w, path);
    CHECK_THROWS_AS(load_weights(path, 10, kCfg.n_mod_coeffs), DimensionError);
    CHECK_THROWS_AS(load_weights(path, kCfg.n_bands, 40), DimensionError);

    const auto good = read_text_file(path);
    auto bad = good;
    bad[8] = 2;
    write_text_file(path, bad);
    CHECK_THROWS_AS(load_weights(path), VersionError);

    bad = good;
    bad[40] ^= 0x01;
    write_text_file(path, bad);
    CHECK_THROWS_AS(load_weights(path), FormatError);

    write_text_file(path, good.substr(0, good.size() - 9));
    CHECK_THROWS_AS(load_weights(path), FormatError);

    bad = good;
    bad[0] = 'X';
    write_text_file(path, bad);
    CHECK_THROWS_AS(load_weights(path), FormatError);
  }
}

TEST_CASE("frozen transfer", "[frontend][train]") {
  const auto trained = train_weights(prepared_phase_corpus(), TrainSchedule{40, 10, 0.5, 2.0},
                                     WeightMode::kMagnitude);
  const auto path = temp_path("transfer.bin");
  save_weights(trained.weights, path);

  const auto other = prepare_corpus(phase_corpus(77, 1), filterbank(), kCfg, 100.0, 1);
  TrainOptions opt;
  opt.seed = 5;
  opt.initial_weights = load_weights(path, kCfg.n_bands, kCfg.n_mod_coeffs);
  const TrainSchedule frozen{30, 30, 0.5, 2.0};
  const auto a = train_weights(other, frozen, WeightMode::kMagnitude, opt);
  CHECK(a.weights == trained.weights);
  CHECK(a.final_loss < a.loss_curve.front());
  const auto b = train_weights(other, frozen, WeightMode::kMagnitude, opt);
  CHECK(a.classifier.weights == b.classifier.weights);
  CHECK(a.classifier.bias == b.classifier.bias);
}

TEST_CASE("real-imag weights classify as well as magnitude weights", "[frontend][train][slow]") {
  testing::SyntheticSpec spec;
  spec.labels = testing::LabelScheme::kPhase;
  const auto prepared = prepare_corpus(testing::synthetic_corpus(spec), filterbank(), kCfg, 100.0, 1);
  const auto mag = train_weights(prepared, TrainSchedule{}, WeightMode::kMagnitude);
  const auto ri = train_weights(prepared, TrainSchedule{}, WeightMode::kRealImag);
  CAPTURE(mag.frame_error, ri.frame_error);
  CHECK(ri.frame_error <= mag.frame_error + 0.01);
}
