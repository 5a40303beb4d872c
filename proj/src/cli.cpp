// Copyright 2026 The fdlp-modulation Authors
// SPDX-License-Identifier: Apache-2.0
//
// cli.cpp

#include "fdlp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdlp/errors.hpp"
#include "fdlp/frontend.hpp"
#include "fdlp/hash.hpp"
#include "fdlp/infotheory.hpp"
#include "fdlp/io.hpp"
#include "fdlp/modulation.hpp"
#include "fdlp/parallel.hpp"
#include "fdlp/selftest.hpp"

namespace fdlp {

namespace {

using nlohmann::json;

// Bad flag values discovered after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  AnalysisConfig cfg;
  std::size_t bins = 100;
  std::size_t classes = 48;
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
  std::string out;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--window", o.cfg.window_len_s, "analysis window length in seconds")
      ->capture_default_str();
  app->add_option("--hop", o.cfg.hop_s, "analysis hop in seconds")->capture_default_str();
  app->add_option("--order", o.cfg.model_order, "all-pole model order")->capture_default_str();
  app->add_option("--ncoef", o.cfg.n_mod_coeffs, "modulation coefficients per band")
      ->capture_default_str();
  app->add_option("--bands", o.cfg.n_bands, "cochlear sub-bands")->capture_default_str();
  app->add_option("--bins", o.bins, "histogram bins for mutual information")->capture_default_str();
  app->add_option("--classes", o.classes, "number of label classes")->capture_default_str();
  app->add_option("--jobs", o.jobs, "worker threads")->capture_default_str();
  app->add_option("--seed", o.seed, "random seed")->capture_default_str();
  app->add_option("-o,--out", o.out, "output path prefix (default: $FDLP_EXPORT_DIR/<command>)");
}

void check_common(const CommonOptions& o) {
  try {
    o.cfg.validate(16000);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  if (o.jobs == 0) throw UsageError("--jobs must be at least 1");
  if (o.bins < 2) throw UsageError("--bins must be at least 2");
  if (o.classes < 2) throw UsageError("--classes must be at least 2");
}

json config_json(const std::string& command, const CommonOptions& o) {
  json j;
  j["command"] = command;
  j["window"] = o.cfg.window_len_s;
  j["hop"] = o.cfg.hop_s;
  j["order"] = o.cfg.model_order;
  j["ncoef"] = o.cfg.n_mod_coeffs;
  j["bands"] = o.cfg.n_bands;
  j["bins"] = o.bins;
  j["classes"] = o.classes;
  j["seed"] = o.seed;
  return j;
}

std::map<std::string, std::string> metadata(const json& config) {
  return {{"config_hash", fnv1a_hex(config.dump())}, {"tool_version", FDLP_VERSION}};
}

std::string out_prefix(const CommonOptions& o, const std::string& command) {
  if (!o.out.empty()) return o.out;
  return (std::filesystem::path(default_export_dir()) / command).string();
}

void export_table(const ExportTable& t, const std::string& prefix, std::ostream& out) {
  write_text_file(prefix + ".csv", to_csv(t));
  write_text_file(prefix + ".json", to_json(t));
  out << "wrote " << prefix << ".csv and " << prefix << ".json\n";
}

std::vector<std::string> modulation_labels(const AnalysisConfig& cfg) {
  std::vector<double> hz(cfg.n_mod_coeffs);
  for (std::size_t n = 0; n < hz.size(); ++n) hz[n] = static_cast<double>(n) * cfg.resolution_hz();
  return format_numbers(hz);
}

// --- synth-am ---------------------------------------------------------------

struct SynthOptions {
  double carrier = 1000.0;
  double mod = 2.0;
  double depth = 0.5;
  double duration = 1.5;
  int rate = 16000;
  std::string out = "am.wav";
};

int run_synth(const SynthOptions& o, std::ostream& out) {
  if (!supported_sample_rate(o.rate)) throw UsageError("--rate must be 16000 or 8000");
  std::optional<AudioBuffer> audio;
  try {
    audio.emplace(am_test_signal(o.carrier, o.mod, o.depth, o.duration, o.rate));
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  // Keep the peak (1 + depth) inside the 16-bit range.
  std::vector<double> s(audio->samples().begin(), audio->samples().end());
  const double scale = 0.9 / (1.0 + o.depth);
  for (double& v : s) v *= scale;
  write_wav(o.out, AudioBuffer(std::move(s), o.rate));
  out << "wrote " << o.out << " (carrier " << format_number(o.carrier) << " Hz, modulation "
      << format_number(o.mod) << " Hz, depth " << format_number(o.depth) << ", scaled by "
      << format_number(scale) << ")\n";
  return kExitOk;
}

// --- modspec ----------------------------------------------------------------

int run_modspec(const CommonOptions& o, const std::string& wav, bool compensate,
                std::ostream& out) {
  const auto audio = read_wav(wav);
  if (!supported_sample_rate(audio.sample_rate())) {
    throw FormatError(wav + ": sample rate " + std::to_string(audio.sample_rate()) +
                      " Hz is not supported (16000 or 8000)");
  }
  const auto fb = filterbank_for(o.cfg, audio.sample_rate());
  const auto frames = frame_signal(audio, o.cfg, WindowShape::kRectangular);
  const std::size_t nb = o.cfg.n_bands;
  const std::size_t nc = o.cfg.n_mod_coeffs;
  std::vector<std::vector<ModulationSpectrum>> spectra(frames.size());
  parallel_for(frames.size(), o.jobs,
               [&](std::size_t f) { spectra[f] = modulation_spectrum(frames[f], fb, o.cfg); });

  ExportTable t;
  t.name = "modulation_spectrum";
  t.row_labels = format_numbers(fb.centers_hz);
  t.column_labels = modulation_labels(o.cfg);
  t.values.assign(nb * nc, 0.0);
  std::vector<std::size_t> used(nb, 0);
  for (const auto& per_frame : spectra) {
    for (std::size_t b = 0; b < nb; ++b) {
      if (per_frame[b].degenerate) continue;
      const auto ms = compensate ? one_over_f_compensate(per_frame[b]) : per_frame[b];
      for (std::size_t n = 0; n < nc; ++n) t.values[b * nc + n] += std::abs(ms.coeffs[n]);
      ++used[b];
    }
  }
  for (std::size_t b = 0; b < nb; ++b) {
    if (used[b] == 0) continue;
    for (std::size_t n = 0; n < nc; ++n) t.values[b * nc + n] /= static_cast<double>(used[b]);
  }
  auto config = config_json("modspec", o);
  config["compensate"] = compensate;
  t.metadata = metadata(config);
  t.metadata["frames"] = std::to_string(frames.size());
  export_table(t, out_prefix(o, "modspec"), out);
  return kExitOk;
}

// --- mi -----------------------------------------------------------------------

int run_mi(const CommonOptions& o, const std::string& manifest_path, std::ostream& out) {
  const auto manifest = read_manifest(manifest_path);
  const auto corpus = load_corpus(manifest, o.classes, true, o.jobs);
  const auto fb = filterbank_for(o.cfg, corpus.front().audio.sample_rate());
  const auto mi = mi_analysis(corpus, fb, o.cfg, MiOptions{o.bins, o.jobs});

  const auto meta = metadata(config_json("mi", o));
  const auto prefix = out_prefix(o, "mi");
  ExportTable matrix;
  matrix.name = "mutual_information_bits";
  matrix.row_labels = format_numbers(mi.band_centers_hz);
  matrix.column_labels = format_numbers(mi.mod_freqs_hz);
  matrix.values = mi.mi;
  matrix.metadata = meta;
  export_table(matrix, prefix + "_matrix", out);

  ExportTable avg;
  avg.name = "mutual_information_band_average_bits";
  avg.row_header = "bands";
  avg.row_labels = {"average_of_" + std::to_string(mi.n_bands)};
  avg.column_labels = matrix.column_labels;
  avg.values = mi.band_average();
  avg.metadata = meta;
  export_table(avg, prefix + "_average", out);

  std::size_t best = 0;
  for (std::size_t i = 1; i < mi.mi.size(); ++i) {
    if (mi.mi[i] > mi.mi[best]) best = i;
  }
  out << "max MI " << format_number(mi.max()) << " bits at band "
      << format_number(mi.band_centers_hz[best / mi.n_mod_bins]) << " Hz, modulation "
      << format_number(mi.mod_freqs_hz[best % mi.n_mod_bins]) << " Hz\n";
  return kExitOk;
}

// --- fdlp-spectrogram ---------------------------------------------------------

int run_spectrogram(const CommonOptions& o, const std::string& wav,
                    const std::string& weights_path, std::ostream& out) {
  const auto audio = read_wav(wav);
  if (!supported_sample_rate(audio.sample_rate())) {
    throw FormatError(wav + ": sample rate " + std::to_string(audio.sample_rate()) +
                      " Hz is not supported (16000 or 8000)");
  }
  const auto fb = filterbank_for(o.cfg, audio.sample_rate());
  const auto spec = weights_path.empty()
                        ? fdlp_spectrogram(audio, fb, o.cfg)
                        : fdlp_spectrogram(audio, fb,
                                           load_weights(weights_path, o.cfg.n_bands,
                                                        o.cfg.n_mod_coeffs),
                                           o.cfg);
  ExportTable t;
  t.name = "fdlp_spectrogram_log_energy";
  t.row_header = "time_s";
  t.column_header = "band_center_hz";
  std::vector<double> times(spec.n_frames);
  for (std::size_t f = 0; f < times.size(); ++f) times[f] = static_cast<double>(f) / spec.frame_rate_hz;
  t.row_labels = format_numbers(times);
  t.column_labels = format_numbers(spec.band_centers_hz);
  t.values = spec.values;
  auto config = config_json("fdlp-spectrogram", o);
  config["weighted"] = !weights_path.empty();
  t.metadata = metadata(config);
  export_table(t, out_prefix(o, "fdlp_spectrogram"), out);
  return kExitOk;
}

// --- learn-weights / apply-weights --------------------------------------------

struct TrainFlags {
  std::string manifest;
  std::string mode = "magnitude";
  std::string weights;
  TrainSchedule sched;
};

ExportTable loss_table(const TrainResult& r, const std::map<std::string, std::string>& meta) {
  ExportTable t;
  t.name = "training_loss";
  t.row_header = "epoch";
  t.column_header = "quantity";
  t.column_labels = {"cross_entropy"};
  for (std::size_t e = 0; e < r.loss_curve.size(); ++e) {
    t.row_labels.push_back(std::to_string(e));
    t.values.push_back(r.loss_curve[e]);
  }
  t.row_labels.push_back("final");
  t.values.push_back(r.final_loss);
  t.metadata = meta;
  t.metadata["frame_error"] = format_number(r.frame_error);
  return t;
}

ExportTable weight_table(const ModulationWeights& w, const AnalysisConfig& cfg,
                         const std::vector<double>& centers, bool imag,
                         const std::map<std::string, std::string>& meta) {
  ExportTable t;
  t.name = imag ? "effective_weights_imag" : "effective_weights";
  t.row_labels = format_numbers(centers);
  t.column_labels = modulation_labels(cfg);
  for (std::size_t b = 0; b < w.n_bands(); ++b) {
    for (std::size_t n = 0; n < w.n_coeffs(); ++n) {
      t.values.push_back(imag ? w.effective_imag(b, n) : w.effective(b, n));
    }
  }
  t.metadata = meta;
  return t;
}

int run_training(const CommonOptions& o, const TrainFlags& flags, bool transfer,
                 std::ostream& out) {
  const WeightMode mode = [&] {
    try {
      return weight_mode_from_string(flags.mode);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }();
  TrainSchedule sched = flags.sched;
  if (transfer) sched.freeze_epochs = sched.total_epochs;
  try {
    sched.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  TrainOptions opts;
  opts.seed = o.seed;
  opts.jobs = o.jobs;
  std::optional<ModulationWeights> loaded;
  if (transfer) {
    loaded = load_weights(flags.weights, o.cfg.n_bands, o.cfg.n_mod_coeffs);
    opts.initial_weights = loaded;
  }
  const auto manifest = read_manifest(flags.manifest);
  const auto corpus = load_corpus(manifest, o.classes, true, o.jobs);
  const auto fb = filterbank_for(o.cfg, corpus.front().audio.sample_rate());
  const auto result =
      train_weights(corpus, fb, o.cfg, sched, loaded ? loaded->mode() : mode, opts);

  const std::string command = transfer ? "apply-weights" : "learn-weights";
  auto config = config_json(command, o);
  config["epochs"] = sched.total_epochs;
  config["freeze"] = sched.freeze_epochs;
  config["lr_classifier"] = sched.learning_rate_classifier;
  config["lr_weights"] = sched.learning_rate_weights;
  config["mode"] = to_string(result.weights.mode());
  const auto meta = metadata(config);
  const auto prefix = out_prefix(o, transfer ? "apply_weights" : "learn_weights");

  export_table(loss_table(result, meta), prefix + "_loss", out);
  if (transfer) {
    if (!(result.weights == *loaded)) throw std::logic_error("frozen weights changed in training");
    out << "weights unchanged (frozen for all " << sched.total_epochs << " epochs)\n";
  } else {
    save_weights(result.weights, prefix + ".weights");
    out << "wrote " << prefix << ".weights\n";
    export_table(weight_table(result.weights, o.cfg, fb.centers_hz, false, meta),
                 prefix + "_effective", out);
    if (result.weights.mode() == WeightMode::kRealImag) {
      export_table(weight_table(result.weights, o.cfg, fb.centers_hz, true, meta),
                   prefix + "_effective_imag", out);
    }
  }
  out << "loss " << format_number(result.loss_curve.empty() ? result.final_loss
                                                            : result.loss_curve.front())
      << " -> " << format_number(result.final_loss) << ", frame error "
      << format_number(result.frame_error) << "\n";
  return kExitOk;
}

// --- selftest ---------------------------------------------------------------

int run_selftest(const CommonOptions& o, std::size_t band, std::ostream& out) {
  SweepSpec spec;
  spec.band = band;
  if (band >= o.cfg.n_bands) throw UsageError("--band must be below --bands");
  const auto points = carrier_sweep(spec, o.cfg);
  const bool sweep_ok = sweep_passes(points, spec);

  char line[128];
  out << "AM sweep: modulation " << format_number(spec.mod_hz) << " Hz, depth "
      << format_number(spec.depth) << ", " << format_number(spec.duration_s) << " s, band "
      << band << "\n";
  out << "carrier_hz  filter_weight  region      magnitude_2hz\n";
  for (const auto& p : points) {
    std::snprintf(line, sizeof line, "%10.1f  %13.4f  %-10s  %13.6f%s\n", p.carrier_hz,
                  p.filter_weight, to_string(p.region), p.magnitude,
                  p.degenerate ? "  (no energy)" : "");
    out << line;
  }
  out << "sweep: " << (sweep_ok ? "PASS" : "FAIL") << " (inside within "
      << format_number(spec.tolerance) << " of " << format_number(spec.depth)
      << ", outside <= " << format_number(spec.outside_limit) << ")\n";

  const auto two = two_path_check(20, o.seed, o.cfg);
  const bool two_ok = two.bands_compared > 0 && two.max_relative_error < 1e-6;
  out << "two-path: " << two.bands_compared << " band-frames, max relative difference "
      << format_number(two.max_relative_error) << ": " << (two_ok ? "PASS" : "FAIL") << "\n";
  return sweep_ok && two_ok ? kExitOk : kExitDataError;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Modulation analysis with frequency domain linear prediction", "fdlp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", FDLP_VERSION);

  CommonOptions common;
  SynthOptions synth;
  std::string wav, manifest, weights;
  bool compensate = false;
  std::size_t band = 7;
  TrainFlags train;

  auto* synth_cmd = app.add_subcommand("synth-am", "write an amplitude-modulated test tone");
  synth_cmd->add_option("--carrier", synth.carrier, "carrier frequency (Hz)")->capture_default_str();
  synth_cmd->add_option("--mod", synth.mod, "modulation frequency (Hz)")->capture_default_str();
  synth_cmd->add_option("--depth", synth.depth, "modulation depth")->capture_default_str();
  synth_cmd->add_option("--duration", synth.duration, "seconds")->capture_default_str();
  synth_cmd->add_option("--rate", synth.rate, "sample rate")->capture_default_str();
  synth_cmd->add_option("-o,--out", synth.out, "output WAV")->capture_default_str();

  auto* modspec_cmd = app.add_subcommand("modspec", "mean modulation magnitudes of one file");
  add_common(modspec_cmd, common);
  modspec_cmd->add_option("wav", wav, "PCM16 mono WAV")->required();
  modspec_cmd->add_flag("--compensate", compensate, "multiply magnitudes by modulation frequency");

  auto* mi_cmd = app.add_subcommand("mi", "mutual information between modulations and labels");
  add_common(mi_cmd, common);
  mi_cmd->add_option("manifest", manifest, "corpus manifest")->required();

  auto* spec_cmd = app.add_subcommand("fdlp-spectrogram", "FDLP spectrogram of one file");
  add_common(spec_cmd, common);
  spec_cmd->add_option("wav", wav, "PCM16 mono WAV")->required();
  spec_cmd->add_option("--weights", weights, "modulation weight file");

  auto add_training = [&](CLI::App* cmd) {
    add_common(cmd, common);
    cmd->add_option("manifest", train.manifest, "labelled corpus manifest")->required();
    cmd->add_option("--epochs", train.sched.total_epochs, "training epochs")->capture_default_str();
    cmd->add_option("--lr-classifier", train.sched.learning_rate_classifier)->capture_default_str();
  };
  auto* learn_cmd = app.add_subcommand("learn-weights", "learn modulation weights");
  add_training(learn_cmd);
  learn_cmd->add_option("--mode", train.mode, "magnitude | real-imag")->capture_default_str();
  learn_cmd->add_option("--freeze", train.sched.freeze_epochs, "epochs with frozen weights")
      ->capture_default_str();
  learn_cmd->add_option("--lr-weights", train.sched.learning_rate_weights)->capture_default_str();

  auto* apply_cmd = app.add_subcommand("apply-weights", "train the classifier on frozen weights");
  add_training(apply_cmd);
  apply_cmd->add_option("--weights", train.weights, "modulation weight file")->required();

  auto* self_cmd = app.add_subcommand("selftest", "AM carrier sweep and two-path check");
  add_common(self_cmd, common);
  self_cmd->add_option("--band", band, "sub-band swept by the carrier")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (app.exit(e, out, err) == 0) return kExitOk;
    err << app.help();
    return kExitUsage;
  }

  try {
    if (*synth_cmd) return run_synth(synth, out);
    check_common(common);
    if (*modspec_cmd) return run_modspec(common, wav, compensate, out);
    if (*mi_cmd) return run_mi(common, manifest, out);
    if (*spec_cmd) return run_spectrogram(common, wav, weights, out);
    if (*learn_cmd) return run_training(common, train, false, out);
    if (*apply_cmd) return run_training(common, train, true, out);
    if (*self_cmd) return run_selftest(common, band, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsage;
}

int cli_dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return cli_dispatch(args, std::cout, std::cerr);
}

}  // namespace fdlp
