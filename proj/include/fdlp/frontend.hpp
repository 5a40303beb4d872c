// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// frontend.hpp
//
// FDLP-spectrogram with learnable modulation weights.
//
// Each utterance is covered by window_len_s analysis windows at 50% overlap,
// the first one centred on t = 0. Per window and band the raw model cepstrum
// c[0..N-1] is multiplied by the modulation weights, turned back into a log
// envelope on a grid of P points per output frame,
//   L(i) = Re sum_n w[n] c[n] e^{-j 2 pi n i / M},   M = P * frames_per_window,
// exponentiated, and overlap-added with periodic Hann weights (which sum to one
// at 50% overlap). A spectrogram cell is ln(max(mean envelope over the frame,
// 1e-10)).
//
// A linear softmax frame classifier on the spectrogram rows stands in for the
// recogniser; the loss gradient reaches the modulation weights analytically.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fdlp/corpus.hpp"
#include "fdlp/dsp.hpp"

namespace fdlp {

enum class WeightMode : std::uint32_t { kMagnitude = 0, kRealImag = 1 };

const char* to_string(WeightMode mode);
WeightMode weight_mode_from_string(const std::string& name);

// Effective weights are exp(param), so every finite parameter gives a
// strictly positive weight and params == 0 is the identity. A parameter of
// -inf switches a coefficient off. Layout is band-major, then coefficient,
// then (real, imag) in real-imag mode.
class ModulationWeights {
 public:
  ModulationWeights(WeightMode mode, std::size_t n_bands, std::size_t n_coeffs);
  ModulationWeights(WeightMode mode, std::size_t n_bands, std::size_t n_coeffs,
                    std::vector<double> params);

  WeightMode mode() const { return mode_; }
  std::size_t n_bands() const { return n_bands_; }
  std::size_t n_coeffs() const { return n_coeffs_; }
  std::size_t params_per_coeff() const { return mode_ == WeightMode::kMagnitude ? 1 : 2; }

  std::span<const double> params() const { return params_; }
  std::span<double> params() { return params_; }
  std::size_t index(std::size_t band, std::size_t coeff, std::size_t part = 0) const {
    return (band * n_coeffs_ + coeff) * params_per_coeff() + part;
  }

  // Magnitude mode: the weight; real-imag mode: the real-part weight.
  double effective(std::size_t band, std::size_t coeff) const;
  // Real-imag mode only; equals effective() in magnitude mode.
  double effective_imag(std::size_t band, std::size_t coeff) const;

  // Applies the weights of one band to a cepstrum of n_coeffs terms.
  std::vector<std::complex<double>> apply(std::size_t band,
                                          std::span<const std::complex<double>> cepstrum) const;

  bool operator==(const ModulationWeights& other) const = default;

 private:
  WeightMode mode_;
  std::size_t n_bands_;
  std::size_t n_coeffs_;
  std::vector<double> params_;
};

struct FdlpSpectrogram {
  std::size_t n_frames = 0;
  std::size_t n_bands = 0;
  double frame_rate_hz = 100.0;
  std::vector<double> values;  // frame-major
  std::vector<double> band_centers_hz;

  double at(std::size_t frame, std::size_t band) const { return values[frame * n_bands + band]; }
};

// Model cepstra of every (window, band) of one utterance; they do not depend
// on the weights, so training computes them once.
struct UtteranceCepstra {
  std::size_t n_frames = 0;
  std::size_t n_bands = 0;
  std::size_t n_coeffs = 0;
  std::size_t frames_per_window = 0;
  std::size_t points_per_frame = 0;
  double frame_rate_hz = 100.0;
  std::vector<long> window_start_frame;
  // [window][band] -> n_coeffs terms; empty when the band was degenerate.
  std::vector<std::vector<std::vector<std::complex<double>>>> cepstra;
  std::vector<double> band_centers_hz;

  std::size_t grid_points() const { return frames_per_window * points_per_frame; }
  std::size_t n_windows() const { return window_start_frame.size(); }
};

UtteranceCepstra prepare_cepstra(const AudioBuffer& audio, const CochlearFilterbank& fb,
                                 const AnalysisConfig& cfg, double frame_rate_hz = 100.0);

// Weighted spectrogram; std::nullopt skips the weighting step entirely.
FdlpSpectrogram assemble_spectrogram(const UtteranceCepstra& prepared,
                                     const std::optional<ModulationWeights>& weights);

FdlpSpectrogram fdlp_spectrogram(const AudioBuffer& audio, const CochlearFilterbank& fb,
                                 const ModulationWeights& weights, const AnalysisConfig& cfg);
FdlpSpectrogram fdlp_spectrogram(const AudioBuffer& audio, const CochlearFilterbank& fb,
                                 const AnalysisConfig& cfg);

// d loss / d params given d loss / d spectrogram cell (frame-major, same shape
// as the spectrogram). Added into `grad`.
void accumulate_weight_gradient(const UtteranceCepstra& prepared, const ModulationWeights& weights,
                                std::span<const double> dloss_dcell, std::span<double> grad);

struct ClassifierParams {
  std::size_t n_classes = 0;
  std::size_t n_features = 0;
  std::vector<double> weights;        // n_classes x n_features, class-major
  std::vector<double> bias;           // n_classes
  std::vector<double> feature_mean;   // n_features
  std::vector<double> feature_scale;  // n_features

  // Uniform +-init_range weights from `seed`, zero bias, identity scaling.
  static ClassifierParams initialise(std::size_t n_classes, std::size_t n_features,
                                     std::uint64_t seed, double init_range = 0.01);
};

struct TrainSchedule {
  std::size_t total_epochs = 150;
  std::size_t freeze_epochs = 60;
  double learning_rate_classifier = 0.5;
  double learning_rate_weights = 2.0;

  void validate() const;
};

struct TrainOptions {
  std::uint64_t seed = 0;
  std::optional<ModulationWeights> initial_weights;
  std::size_t jobs = 1;
  double frame_rate_hz = 100.0;
};

struct TrainResult {
  ModulationWeights weights;
  ClassifierParams classifier;
  std::vector<double> loss_curve;  // loss at the start of every epoch
  double final_loss = 0.0;
  double frame_error = 0.0;
};

// Utterance ready for training: cepstra plus one label per spectrogram frame.
struct PreparedUtterance {
  std::string name;
  std::size_t n_classes = 0;
  UtteranceCepstra cepstra;
  std::vector<int> frame_labels;
};

std::vector<PreparedUtterance> prepare_corpus(std::span<const Utterance> corpus,
                                              const CochlearFilterbank& fb,
                                              const AnalysisConfig& cfg, double frame_rate_hz,
                                              std::size_t jobs);

// Full-batch gradient descent on the mean frame cross-entropy. Modulation
// weights stay frozen for sched.freeze_epochs epochs, then train jointly.
// The n = 0 weights scale the band's log level rather than a modulation and
// are never updated.
TrainResult train_weights(std::span<const Utterance> corpus, const CochlearFilterbank& fb,
                          const AnalysisConfig& cfg, const TrainSchedule& sched, WeightMode mode,
                          const TrainOptions& options = {});
TrainResult train_weights(std::span<const PreparedUtterance> corpus, const TrainSchedule& sched,
                          WeightMode mode, const TrainOptions& options = {});

enum class GradientRequest { kNone, kClassifier, kAll };

// Mean cross-entropy of the given frames and, optionally, its gradients.
struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> weight_grad;
  std::vector<double> classifier_weight_grad;
  std::vector<double> classifier_bias_grad;
};

// frame_mask (optional, per utterance, per frame) restricts the loss to a
// subset of frames.
LossAndGradient frame_loss(std::span<const PreparedUtterance> corpus,
                           const ModulationWeights& weights, const ClassifierParams& classifier,
                           GradientRequest request,
                           const std::vector<std::vector<bool>>* frame_mask = nullptr,
                           std::size_t jobs = 1);

double frame_error_rate(std::span<const PreparedUtterance> corpus, const ModulationWeights& weights,
                        const ClassifierParams& classifier);

struct GradientCheckSample {
  PreparedUtterance utterance;
  std::size_t first_frame = 0;
  std::size_t n_frames = 5;  // at most 10
  ClassifierParams classifier;
};

// Largest |analytic - numeric| / max(|analytic|, |numeric|, 1e-6) over all
// weight parameters; numeric gradients by central differences, step 1e-5.
double weight_gradient_check(const ModulationWeights& weights, const GradientCheckSample& sample);

// Versioned binary weight file, see docs/weight_format.md.
void save_weights(const ModulationWeights& weights, const std::string& path);
ModulationWeights load_weights(const std::string& path);
// Also checks the dimensions against the expected configuration.
ModulationWeights load_weights(const std::string& path, std::size_t n_bands,
                               std::size_t n_coeffs);

}  // namespace fdlp
