// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// frontend.cpp

#include "fdlp/frontend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "fdlp/errors.hpp"
#include "fdlp/fft.hpp"
#include "fdlp/modulation.hpp"
#include "fdlp/parallel.hpp"

namespace fdlp {

namespace {

constexpr double kEnergyFloor = 1e-10;

std::size_t integer_ratio(double value, const char* what) {
  const double rounded = std::round(value);
  if (rounded < 1.0 || std::abs(value - rounded) > 1e-9 * std::max(1.0, value)) {
    throw InvalidArgument(std::string(what) + " must be a positive integer");
  }
  return static_cast<std::size_t>(rounded);
}

double ola_weight(std::size_t i, std::size_t m) {
  return 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                              static_cast<double>(m));
}

// Envelope grids of one utterance plus the per-frame energies they produce.
struct ForwardPass {
  std::vector<double> energy;                  // frame-major
  std::vector<std::vector<double>> envelopes;  // [window * n_bands + band], empty if degenerate
};

void check_dimensions(const UtteranceCepstra& prepared, const ModulationWeights& w) {
  if (w.n_bands() != prepared.n_bands || w.n_coeffs() != prepared.n_coeffs) {
    throw InvalidArgument("weights are " + std::to_string(w.n_bands()) + "x" +
                          std::to_string(w.n_coeffs()) + ", spectrogram needs " +
                          std::to_string(prepared.n_bands) + "x" +
                          std::to_string(prepared.n_coeffs));
  }
}

ForwardPass forward(const UtteranceCepstra& prepared, const ModulationWeights* weights,
                    bool keep_envelopes) {
  const std::size_t nb = prepared.n_bands;
  const std::size_t m = prepared.grid_points();
  const std::size_t p = prepared.points_per_frame;
  const auto n_frames = static_cast<long>(prepared.n_frames);
  ForwardPass out;
  out.energy.assign(prepared.n_frames * nb, 0.0);
  if (keep_envelopes) out.envelopes.resize(prepared.n_windows() * nb);

  std::vector<double> ola(m);
  for (std::size_t i = 0; i < m; ++i) ola[i] = ola_weight(i, m) / static_cast<double>(p);

  std::vector<Complex> grid(m);
  std::vector<double> env(m);
  for (std::size_t k = 0; k < prepared.n_windows(); ++k) {
    const long start = prepared.window_start_frame[k];
    for (std::size_t b = 0; b < nb; ++b) {
      const auto& cep = prepared.cepstra[k][b];
      if (cep.empty()) continue;
      std::fill(grid.begin(), grid.end(), Complex{});
      if (weights != nullptr) {
        const auto weighted = weights->apply(b, cep);
        std::copy(weighted.begin(), weighted.end(), grid.begin());
      } else {
        std::copy(cep.begin(), cep.end(), grid.begin());
      }
      const auto log_env = fft::forward(grid);
      for (std::size_t i = 0; i < m; ++i) env[i] = std::exp(log_env[i].real());
      for (std::size_t i = 0; i < m; ++i) {
        const long f = start + static_cast<long>(i / p);
        if (f < 0 || f >= n_frames) continue;
        out.energy[static_cast<std::size_t>(f) * nb + b] += ola[i] * env[i];
      }
      if (keep_envelopes) out.envelopes[k * nb + b] = env;
    }
  }
  return out;
}

FdlpSpectrogram to_spectrogram(const UtteranceCepstra& prepared, const ForwardPass& pass) {
  FdlpSpectrogram s;
  s.n_frames = prepared.n_frames;
  s.n_bands = prepared.n_bands;
  s.frame_rate_hz = prepared.frame_rate_hz;
  s.band_centers_hz = prepared.band_centers_hz;
  s.values.resize(pass.energy.size());
  for (std::size_t i = 0; i < pass.energy.size(); ++i) {
    s.values[i] = std::log(std::max(pass.energy[i], kEnergyFloor));
  }
  return s;
}

void backward(const UtteranceCepstra& prepared, const ModulationWeights& w,
              const ForwardPass& pass, std::span<const double> dloss_dcell,
              std::span<double> grad) {
  const std::size_t nb = prepared.n_bands;
  const std::size_t m = prepared.grid_points();
  const std::size_t p = prepared.points_per_frame;
  const std::size_t nc = prepared.n_coeffs;
  const auto n_frames = static_cast<long>(prepared.n_frames);

  // d loss / d energy; cells clamped at the floor pass no gradient.
  std::vector<double> g(pass.energy.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (pass.energy[i] > kEnergyFloor) g[i] = dloss_dcell[i] / pass.energy[i];
  }

  std::vector<double> ola(m);
  for (std::size_t i = 0; i < m; ++i) ola[i] = ola_weight(i, m) / static_cast<double>(p);

  std::vector<Complex> q(m);
  for (std::size_t k = 0; k < prepared.n_windows(); ++k) {
    const long start = prepared.window_start_frame[k];
    for (std::size_t b = 0; b < nb; ++b) {
      const auto& cep = prepared.cepstra[k][b];
      if (cep.empty()) continue;
      const auto& env = pass.envelopes[k * nb + b];
      bool any = false;
      for (std::size_t i = 0; i < m; ++i) {
        const long f = start + static_cast<long>(i / p);
        double v = 0.0;
        if (f >= 0 && f < n_frames) v = g[static_cast<std::size_t>(f) * nb + b] * ola[i] * env[i];
        q[i] = Complex(v, 0.0);
        any = any || v != 0.0;
      }
      if (!any) continue;
      // dL / d log-envelope projected on e^{-j 2 pi n i / M}.
      const auto proj = fft::forward(q);
      if (w.mode() == WeightMode::kMagnitude) {
        for (std::size_t n = 0; n < nc; ++n) {
          const double e = w.effective(b, n);
          if (e == 0.0) continue;
          grad[w.index(b, n)] += (cep[n] * e * proj[n]).real();
        }
      } else {
        for (std::size_t n = 0; n < nc; ++n) {
          const double er = w.effective(b, n);
          const double ei = w.effective_imag(b, n);
          if (er != 0.0) grad[w.index(b, n, 0)] += cep[n].real() * er * proj[n].real();
          if (ei != 0.0) grad[w.index(b, n, 1)] -= cep[n].imag() * ei * proj[n].imag();
        }
      }
    }
  }
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t class_count(std::span<const PreparedUtterance> corpus) {
  std::size_t n = 0;
  for (const auto& u : corpus) n = std::max(n, u.n_classes);
  return n;
}

}  // namespace

const char* to_string(WeightMode mode) {
  return mode == WeightMode::kMagnitude ? "magnitude" : "real-imag";
}

WeightMode weight_mode_from_string(const std::string& name) {
  if (name == "magnitude") return WeightMode::kMagnitude;
  if (name == "real-imag") return WeightMode::kRealImag;
  throw InvalidArgument("unknown weight mode '" + name + "' (magnitude | real-imag)");
}

ModulationWeights::ModulationWeights(WeightMode mode, std::size_t n_bands, std::size_t n_coeffs)
    : mode_(mode), n_bands_(n_bands), n_coeffs_(n_coeffs) {
  if (n_bands == 0 || n_coeffs == 0) throw InvalidArgument("weights need bands and coefficients");
  params_.assign(n_bands * n_coeffs * params_per_coeff(), 0.0);
}

ModulationWeights::ModulationWeights(WeightMode mode, std::size_t n_bands, std::size_t n_coeffs,
                                     std::vector<double> params)
    : ModulationWeights(mode, n_bands, n_coeffs) {
  if (params.size() != params_.size()) {
    throw InvalidArgument("expected " + std::to_string(params_.size()) + " weight parameters, got " +
                          std::to_string(params.size()));
  }
  for (double v : params) {
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
      throw InvalidArgument("weight parameters must be finite or -inf");
    }
  }
  params_ = std::move(params);
}

double ModulationWeights::effective(std::size_t band, std::size_t coeff) const {
  return std::exp(params_[index(band, coeff, 0)]);
}

double ModulationWeights::effective_imag(std::size_t band, std::size_t coeff) const {
  return std::exp(params_[index(band, coeff, params_per_coeff() - 1)]);
}

std::vector<Complex> ModulationWeights::apply(std::size_t band,
                                              std::span<const Complex> cepstrum) const {
  if (band >= n_bands_ || cepstrum.size() != n_coeffs_) {
    throw InvalidArgument("cepstrum does not match the weight dimensions");
  }
  std::vector<Complex> out(n_coeffs_);
  for (std::size_t n = 0; n < n_coeffs_; ++n) {
    if (mode_ == WeightMode::kMagnitude) {
      out[n] = cepstrum[n] * effective(band, n);
    } else {
      out[n] = Complex(cepstrum[n].real() * effective(band, n),
                       cepstrum[n].imag() * effective_imag(band, n));
    }
  }
  return out;
}

UtteranceCepstra prepare_cepstra(const AudioBuffer& audio, const CochlearFilterbank& fb,
                                 const AnalysisConfig& cfg, double frame_rate_hz) {
  const int rate = audio.sample_rate();
  cfg.validate(rate);
  if (!(frame_rate_hz > 0.0)) throw InvalidArgument("frame rate must be positive");
  if (fb.sample_rate != rate || fb.n_bands != cfg.n_bands) {
    throw InvalidArgument("filterbank does not match the audio rate or band count");
  }
  const std::size_t spf = integer_ratio(rate / frame_rate_hz, "samples per frame");
  const std::size_t wf = integer_ratio(cfg.window_len_s * frame_rate_hz, "frames per window");
  if (wf % 2 != 0) throw InvalidArgument("window must span an even number of frames");
  const std::size_t win = wf * spf;
  if (win != cfg.window_samples(rate) || win / 2 + 1 != fb.n_coeffs) {
    throw InvalidArgument("filterbank was not designed for this window length");
  }

  UtteranceCepstra out;
  out.n_frames = frames_in(audio.duration_s(), frame_rate_hz);
  if (out.n_frames == 0) throw InvalidArgument("audio is shorter than one frame");
  out.n_bands = cfg.n_bands;
  out.n_coeffs = cfg.n_mod_coeffs;
  out.frames_per_window = wf;
  out.points_per_frame = std::max<std::size_t>(1, (2 * cfg.n_mod_coeffs + wf - 1) / wf);
  out.frame_rate_hz = frame_rate_hz;
  out.band_centers_hz = fb.centers_hz;

  const long half = static_cast<long>(wf / 2);
  for (long s = -half; s < static_cast<long>(out.n_frames); s += half) {
    out.window_start_frame.push_back(s);
  }
  out.cepstra.resize(out.n_windows());
  for (std::size_t k = 0; k < out.n_windows(); ++k) {
    const auto seg = extract_segment(audio.samples(),
                                     out.window_start_frame[k] * static_cast<long>(spf), win);
    auto spectra = modulation_spectrum(seg, fb, cfg);
    out.cepstra[k].resize(out.n_bands);
    for (std::size_t b = 0; b < out.n_bands; ++b) {
      if (!spectra[b].degenerate) out.cepstra[k][b] = std::move(spectra[b].cepstrum);
    }
  }
  return out;
}

FdlpSpectrogram assemble_spectrogram(const UtteranceCepstra& prepared,
                                     const std::optional<ModulationWeights>& weights) {
  if (weights) check_dimensions(prepared, *weights);
  return to_spectrogram(prepared, forward(prepared, weights ? &*weights : nullptr, false));
}

FdlpSpectrogram fdlp_spectrogram(const AudioBuffer& audio, const CochlearFilterbank& fb,
                                 const ModulationWeights& weights, const AnalysisConfig& cfg) {
  if (weights.n_bands() != fb.n_bands || weights.n_coeffs() != cfg.n_mod_coeffs) {
    throw InvalidArgument("weights do not match (n_bands, n_mod_coeffs)");
  }
  return assemble_spectrogram(prepare_cepstra(audio, fb, cfg), weights);
}

FdlpSpectrogram fdlp_spectrogram(const AudioBuffer& audio, const CochlearFilterbank& fb,
                                 const AnalysisConfig& cfg) {
  return assemble_spectrogram(prepare_cepstra(audio, fb, cfg), std::nullopt);
}

void accumulate_weight_gradient(const UtteranceCepstra& prepared, const ModulationWeights& weights,
                                std::span<const double> dloss_dcell, std::span<double> grad) {
  check_dimensions(prepared, weights);
  if (dloss_dcell.size() != prepared.n_frames * prepared.n_bands ||
      grad.size() != weights.params().size()) {
    throw InvalidArgument("gradient buffers have the wrong size");
  }
  const auto pass = forward(prepared, &weights, true);
  backward(prepared, weights, pass, dloss_dcell, grad);
}

ClassifierParams ClassifierParams::initialise(std::size_t n_classes, std::size_t n_features,
                                              std::uint64_t seed, double init_range) {
  if (n_classes < 2 || n_features == 0) throw InvalidArgument("classifier needs >= 2 classes");
  ClassifierParams c;
  c.n_classes = n_classes;
  c.n_features = n_features;
  std::mt19937_64 rng(seed);
  c.weights.resize(n_classes * n_features);
  for (double& v : c.weights) v = init_range * (2.0 * uniform01(rng) - 1.0);
  c.bias.assign(n_classes, 0.0);
  c.feature_mean.assign(n_features, 0.0);
  c.feature_scale.assign(n_features, 1.0);
  return c;
}

void TrainSchedule::validate() const {
  if (freeze_epochs > total_epochs) throw InvalidArgument("freeze_epochs exceeds total_epochs");
  if (!(learning_rate_classifier > 0.0) || !(learning_rate_weights >= 0.0) ||
      !std::isfinite(learning_rate_classifier) || !std::isfinite(learning_rate_weights)) {
    throw InvalidArgument("learning rates must be finite and positive");
  }
}

std::vector<PreparedUtterance> prepare_corpus(std::span<const Utterance> corpus,
                                              const CochlearFilterbank& fb,
                                              const AnalysisConfig& cfg, double frame_rate_hz,
                                              std::size_t jobs) {
  std::vector<PreparedUtterance> out(corpus.size());
  parallel_for(corpus.size(), jobs, [&](std::size_t u) {
    const auto& utt = corpus[u];
    utt.labels.validate();
    if (std::abs(utt.labels.frame_rate_hz - frame_rate_hz) > 1e-9) {
      throw AlignmentError("labels of '" + utt.name + "' are not at the spectrogram frame rate");
    }
    auto& p = out[u];
    p.name = utt.name;
    p.n_classes = utt.labels.n_classes;
    p.cepstra = prepare_cepstra(utt.audio, fb, cfg, frame_rate_hz);
    const std::size_t want = p.cepstra.n_frames;
    const auto& have = utt.labels.labels;
    const auto diff = static_cast<long>(have.size()) - static_cast<long>(want);
    if (have.empty() || static_cast<std::size_t>(std::abs(diff)) >= kLabelLengthSlack) {
      throw AlignmentError("labels of '" + utt.name + "' cover " + std::to_string(have.size()) +
                           " frames, audio has " + std::to_string(want));
    }
    p.frame_labels.assign(have.begin(), have.begin() + std::min(have.size(), want));
    p.frame_labels.resize(want, have.back());
  });
  return out;
}

LossAndGradient frame_loss(std::span<const PreparedUtterance> corpus,
                           const ModulationWeights& weights, const ClassifierParams& classifier,
                           GradientRequest request,
                           const std::vector<std::vector<bool>>* frame_mask, std::size_t jobs) {
  const std::size_t kc = classifier.n_classes;
  const std::size_t nf = classifier.n_features;
  if (frame_mask != nullptr && frame_mask->size() != corpus.size()) {
    throw InvalidArgument("frame mask must have one entry per utterance");
  }
  std::size_t total = 0;
  for (std::size_t u = 0; u < corpus.size(); ++u) {
    const auto& p = corpus[u];
    check_dimensions(p.cepstra, weights);
    if (p.cepstra.n_bands != nf) throw InvalidArgument("classifier feature count mismatch");
    if (frame_mask == nullptr) {
      total += p.cepstra.n_frames;
    } else {
      const auto& mask = (*frame_mask)[u];
      if (mask.size() != p.cepstra.n_frames) throw InvalidArgument("frame mask length mismatch");
      total += static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
    }
  }
  if (total == 0) throw InvalidArgument("no frames to evaluate");
  const double inv_total = 1.0 / static_cast<double>(total);

  std::vector<LossAndGradient> parts(corpus.size());
  parallel_for(corpus.size(), jobs, [&](std::size_t u) {
    const auto& p = corpus[u];
    auto& part = parts[u];
    const bool want_w = request == GradientRequest::kAll;
    const auto pass = forward(p.cepstra, &weights, want_w);
    const auto spec = to_spectrogram(p.cepstra, pass);
    if (request != GradientRequest::kNone) {
      part.classifier_weight_grad.assign(kc * nf, 0.0);
      part.classifier_bias_grad.assign(kc, 0.0);
    }
    std::vector<double> dcell(want_w ? spec.values.size() : 0, 0.0);
    std::vector<double> x(nf), z(kc);
    for (std::size_t f = 0; f < spec.n_frames; ++f) {
      if (frame_mask != nullptr && !(*frame_mask)[u][f]) continue;
      const auto y = static_cast<std::size_t>(p.frame_labels[f]);
      if (y >= kc) throw InvalidArgument("label of '" + p.name + "' outside the classifier range");
      for (std::size_t b = 0; b < nf; ++b) {
        x[b] = (spec.at(f, b) - classifier.feature_mean[b]) / classifier.feature_scale[b];
      }
      double zmax = -std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < kc; ++c) {
        double acc = classifier.bias[c];
        for (std::size_t b = 0; b < nf; ++b) acc += classifier.weights[c * nf + b] * x[b];
        z[c] = acc;
        zmax = std::max(zmax, acc);
      }
      double sum = 0.0;
      for (std::size_t c = 0; c < kc; ++c) sum += std::exp(z[c] - zmax);
      const double log_norm = zmax + std::log(sum);
      part.loss += (log_norm - z[y]) * inv_total;
      if (request == GradientRequest::kNone) continue;
      for (std::size_t c = 0; c < kc; ++c) {
        const double dz = (std::exp(z[c] - log_norm) - (c == y ? 1.0 : 0.0)) * inv_total;
        part.classifier_bias_grad[c] += dz;
        for (std::size_t b = 0; b < nf; ++b) {
          part.classifier_weight_grad[c * nf + b] += dz * x[b];
          if (want_w) {
            dcell[f * nf + b] +=
                dz * classifier.weights[c * nf + b] / classifier.feature_scale[b];
          }
        }
      }
    }
    if (want_w) {
      part.weight_grad.assign(weights.params().size(), 0.0);
      backward(p.cepstra, weights, pass, dcell, part.weight_grad);
    }
  });

  LossAndGradient out;
  if (request != GradientRequest::kNone) {
    out.classifier_weight_grad.assign(kc * nf, 0.0);
    out.classifier_bias_grad.assign(kc, 0.0);
  }
  if (request == GradientRequest::kAll) out.weight_grad.assign(weights.params().size(), 0.0);
  for (const auto& part : parts) {
    out.loss += part.loss;
    for (std::size_t i = 0; i < part.classifier_weight_grad.size(); ++i) {
      out.classifier_weight_grad[i] += part.classifier_weight_grad[i];
    }
    for (std::size_t i = 0; i < part.classifier_bias_grad.size(); ++i) {
      out.classifier_bias_grad[i] += part.classifier_bias_grad[i];
    }
    for (std::size_t i = 0; i < part.weight_grad.size(); ++i) {
      out.weight_grad[i] += part.weight_grad[i];
    }
  }
  return out;
}

double frame_error_rate(std::span<const PreparedUtterance> corpus, const ModulationWeights& weights,
                        const ClassifierParams& classifier) {
  const std::size_t kc = classifier.n_classes;
  const std::size_t nf = classifier.n_features;
  std::size_t errors = 0;
  std::size_t total = 0;
  for (const auto& p : corpus) {
    const auto spec = assemble_spectrogram(p.cepstra, weights);
    for (std::size_t f = 0; f < spec.n_frames; ++f) {
      std::size_t best = 0;
      double best_z = -std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < kc; ++c) {
        double acc = classifier.bias[c];
        for (std::size_t b = 0; b < nf; ++b) {
          acc += classifier.weights[c * nf + b] *
                 (spec.at(f, b) - classifier.feature_mean[b]) / classifier.feature_scale[b];
        }
        if (acc > best_z) {
          best_z = acc;
          best = c;
        }
      }
      errors += best != static_cast<std::size_t>(p.frame_labels[f]) ? 1 : 0;
      ++total;
    }
  }
  if (total == 0) throw InvalidArgument("no frames to evaluate");
  return static_cast<double>(errors) / static_cast<double>(total);
}

TrainResult train_weights(std::span<const PreparedUtterance> corpus, const TrainSchedule& sched,
                          WeightMode mode, const TrainOptions& options) {
  sched.validate();
  if (corpus.empty()) throw InvalidArgument("training corpus is empty");
  std::set<int> present;
  for (const auto& p : corpus) present.insert(p.frame_labels.begin(), p.frame_labels.end());
  if (present.size() < 2) throw InvalidArgument("training needs at least two classes in the labels");

  const std::size_t nb = corpus.front().cepstra.n_bands;
  const std::size_t nc = corpus.front().cepstra.n_coeffs;
  ModulationWeights weights = options.initial_weights.value_or(ModulationWeights(mode, nb, nc));
  if (weights.mode() != mode) throw InvalidArgument("initial weights use a different mode");

  auto classifier = ClassifierParams::initialise(class_count(corpus), nb, options.seed);

  // Fixed per-band standardisation from the initial spectrograms.
  std::vector<double> sum(nb, 0.0), sum_sq(nb, 0.0);
  std::size_t count = 0;
  for (const auto& p : corpus) {
    const auto spec = assemble_spectrogram(p.cepstra, weights);
    for (std::size_t f = 0; f < spec.n_frames; ++f) {
      for (std::size_t b = 0; b < nb; ++b) {
        sum[b] += spec.at(f, b);
        sum_sq[b] += spec.at(f, b) * spec.at(f, b);
      }
    }
    count += spec.n_frames;
  }
  for (std::size_t b = 0; b < nb; ++b) {
    const double mean = sum[b] / static_cast<double>(count);
    const double var = std::max(0.0, sum_sq[b] / static_cast<double>(count) - mean * mean);
    classifier.feature_mean[b] = mean;
    classifier.feature_scale[b] = var > 1e-12 ? std::sqrt(var) : 1.0;
  }

  TrainResult result{weights, classifier, {}, 0.0, 0.0};
  auto& w = result.weights;
  auto& cl = result.classifier;
  for (std::size_t epoch = 0; epoch < sched.total_epochs; ++epoch) {
    const bool train_w = epoch >= sched.freeze_epochs;
    const auto lg = frame_loss(corpus, w, cl,
                               train_w ? GradientRequest::kAll : GradientRequest::kClassifier,
                               nullptr, options.jobs);
    if (!std::isfinite(lg.loss)) {
      throw TrainingFailure("loss became non-finite at epoch " + std::to_string(epoch), epoch);
    }
    result.loss_curve.push_back(lg.loss);
    for (std::size_t i = 0; i < cl.weights.size(); ++i) {
      cl.weights[i] -= sched.learning_rate_classifier * lg.classifier_weight_grad[i];
    }
    for (std::size_t i = 0; i < cl.bias.size(); ++i) {
      cl.bias[i] -= sched.learning_rate_classifier * lg.classifier_bias_grad[i];
    }
    if (train_w) {
      auto params = w.params();
      for (std::size_t b = 0; b < w.n_bands(); ++b) {
        for (std::size_t n = 1; n < w.n_coeffs(); ++n) {
          for (std::size_t part = 0; part < w.params_per_coeff(); ++part) {
            const std::size_t i = w.index(b, n, part);
            params[i] -= sched.learning_rate_weights * lg.weight_grad[i];
          }
        }
      }
    }
  }
  result.final_loss = frame_loss(corpus, w, cl, GradientRequest::kNone, nullptr, options.jobs).loss;
  if (!std::isfinite(result.final_loss)) {
    throw TrainingFailure("loss became non-finite after the last epoch", sched.total_epochs);
  }
  result.frame_error = frame_error_rate(corpus, w, cl);
  return result;
}

TrainResult train_weights(std::span<const Utterance> corpus, const CochlearFilterbank& fb,
                          const AnalysisConfig& cfg, const TrainSchedule& sched, WeightMode mode,
                          const TrainOptions& options) {
  sched.validate();
  std::set<int> present;
  for (const auto& u : corpus) present.insert(u.labels.labels.begin(), u.labels.labels.end());
  if (present.size() < 2) throw InvalidArgument("training needs at least two classes in the labels");
  if (options.initial_weights && (options.initial_weights->n_bands() != cfg.n_bands ||
                                  options.initial_weights->n_coeffs() != cfg.n_mod_coeffs)) {
    throw DimensionError("initial weights do not match (n_bands, n_mod_coeffs)");
  }
  const auto prepared = prepare_corpus(corpus, fb, cfg, options.frame_rate_hz, options.jobs);
  return train_weights(std::span<const PreparedUtterance>(prepared), sched, mode, options);
}

double weight_gradient_check(const ModulationWeights& weights, const GradientCheckSample& sample) {
  const auto& utt = sample.utterance;
  if (sample.n_frames == 0 || sample.n_frames > 10 ||
      sample.first_frame + sample.n_frames > utt.cepstra.n_frames) {
    throw InvalidArgument("gradient check needs 1 to 10 frames inside the utterance");
  }
  std::vector<std::vector<bool>> mask(1, std::vector<bool>(utt.cepstra.n_frames, false));
  for (std::size_t f = 0; f < sample.n_frames; ++f) mask[0][sample.first_frame + f] = true;

  // Windows that do not reach the checked frames cannot change the loss.
  PreparedUtterance local = utt;
  const auto first = static_cast<long>(sample.first_frame);
  const auto last = first + static_cast<long>(sample.n_frames);
  const auto span = static_cast<long>(local.cepstra.frames_per_window);
  for (std::size_t k = 0; k < local.cepstra.n_windows(); ++k) {
    const long start = local.cepstra.window_start_frame[k];
    if (start + span <= first || start >= last) {
      for (auto& band : local.cepstra.cepstra[k]) band.clear();
    }
  }
  const std::span<const PreparedUtterance> one(&local, 1);

  const auto analytic =
      frame_loss(one, weights, sample.classifier, GradientRequest::kAll, &mask).weight_grad;
  constexpr double kStep = 1e-5;
  double worst = 0.0;
  ModulationWeights probe = weights;
  for (std::size_t i = 0; i < probe.params().size(); ++i) {
    const double saved = probe.params()[i];
    double numeric = 0.0;
    if (std::isfinite(saved)) {
      probe.params()[i] = saved + kStep;
      const double up = frame_loss(one, probe, sample.classifier, GradientRequest::kNone, &mask).loss;
      probe.params()[i] = saved - kStep;
      const double down =
          frame_loss(one, probe, sample.classifier, GradientRequest::kNone, &mask).loss;
      probe.params()[i] = saved;
      numeric = (up - down) / (2.0 * kStep);
    }
    const double scale = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-6});
    worst = std::max(worst, std::abs(analytic[i] - numeric) / scale);
  }
  return worst;
}

}  // namespace fdlp
