// Copyright 2026 The rbmscope Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <iostream>
#include <json.hpp>
#include <numeric>
#include <sstream>

#include "cli_config.hpp"
#include "rbmscope/boson.hpp"
#include "rbmscope/checkpoint.hpp"
#include "rbmscope/errors.hpp"
#include "rbmscope/io.hpp"
#include "rbmscope/parallel.hpp"
#include "rbmscope/partition.hpp"
#include "rbmscope/spectral.hpp"
#include "rbmscope/symmetry.hpp"
#include "rbmscope/training.hpp"
#include "rbmscope/version.hpp"

namespace rbmscope::cli {

namespace {

struct CommonOpts {
  std::string out;
  std::string config_path;
  std::uint64_t seed = 0;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& common, FieldSet& fields) {
  fields.bind(cmd->add_option("--out", common.out, "Output directory"), "out", &common.out,
              /*required=*/true);
  cmd->add_option("--config", common.config_path,
                  "JSON config file; command-line flags take precedence");
  fields.bind(cmd->add_option("--seed", common.seed, "Random seed"), "seed", &common.seed);
  fields.bind(cmd->add_option("--threads", common.threads, "Worker threads"), "threads",
              &common.threads);
}

std::filesystem::path finish_resolution(const CommonOpts& common, FieldSet& fields) {
  const nlohmann::json config =
      common.config_path.empty() ? nlohmann::json::object() : load_config_file(common.config_path);
  fields.resolve(config);
  set_max_threads(common.threads);
  std::filesystem::path out_dir(common.out);
  std::filesystem::create_directories(out_dir);
  return out_dir;
}

Matrix sample_chains(const RbmParams& params, std::size_t n_chains, int k_steps,
                     std::uint64_t seed, Matrix* hidden_out) {
  Matrix visible(params.n_visible(), static_cast<Index>(n_chains));
  Matrix hidden(params.n_hidden(), static_cast<Index>(n_chains));
  parallel_for(n_chains, [&](std::size_t c) {
    Rng rng = Rng::stream(seed, {0x73616d70ULL, c});
    ChainState state;
    state.v = Vector(params.n_visible());
    state.h = Vector(params.n_hidden());
    for (Index i = 0; i < state.v.size(); ++i) state.v[i] = rng.bit();
    for (Index j = 0; j < state.h.size(); ++j) state.h[j] = rng.bit();
    state = block_gibbs(params, std::move(state), k_steps, rng);
    visible.col(static_cast<Index>(c)) = state.v;
    hidden.col(static_cast<Index>(c)) = state.h;
  });
  if (hidden_out != nullptr) *hidden_out = std::move(hidden);
  return visible;
}

std::string bits_to_csv(const Matrix& columns) {
  std::ostringstream out;
  for (Index c = 0; c < columns.cols(); ++c) {
    for (Index i = 0; i < columns.rows(); ++i) {
      if (i > 0) out << ',';
      out << static_cast<int>(columns(i, c));
    }
    out << '\n';
  }
  return out.str();
}

std::string reals_to_csv(const Matrix& columns) {
  std::ostringstream out;
  for (Index c = 0; c < columns.cols(); ++c) {
    for (Index i = 0; i < columns.rows(); ++i) {
      if (i > 0) out << ',';
      out << fmt_double(columns(i, c));
    }
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------- train --

struct TrainOpts {
  CommonOpts common;
  std::string data;
  int hidden = 16;
  std::string strategy = "cd";
  int k_steps = 100;
  double learning_rate = 0.01;
  std::size_t batch_size = 64;
  int epochs = 10;
  std::size_t n_chains = 64;
  double init_sigma = 0.01;
  bool exact_gradients = false;
  int checkpoint_every = 0;  // 0: final checkpoint only
};

void setup_train(CLI::App& app) {
  auto opts = std::make_shared<TrainOpts>();
  auto fields = std::make_shared<FieldSet>();
  CLI::App* cmd = app.add_subcommand("train", "Train an RBM and write checkpoints");
  add_common(cmd, opts->common, *fields);
  fields->bind(cmd->add_option("--data", opts->data, "Dataset spec (bars-stripes:... or idx:...)"),
               "data", &opts->data, /*required=*/true);
  fields->bind(cmd->add_option("--hidden", opts->hidden, "Hidden layer size M"), "hidden",
               &opts->hidden);
  fields->bind(cmd->add_option("--strategy", opts->strategy, "rdmk, cd or pcd"), "strategy",
               &opts->strategy);
  fields->bind(cmd->add_option("--k", opts->k_steps, "Block Gibbs sweeps per update"), "k",
               &opts->k_steps);
  fields->bind(cmd->add_option("--lr", opts->learning_rate, "Learning rate"), "lr",
               &opts->learning_rate);
  fields->bind(cmd->add_option("--batch-size", opts->batch_size, "Minibatch size"), "batch-size",
               &opts->batch_size);
  fields->bind(cmd->add_option("--epochs", opts->epochs, "Training epochs"), "epochs",
               &opts->epochs);
  fields->bind(cmd->add_option("--chains", opts->n_chains, "Negative-phase chains"), "chains",
               &opts->n_chains);
  fields->bind(cmd->add_option("--init-sigma", opts->init_sigma, "Coupling init std dev"),
               "init-sigma", &opts->init_sigma);
  fields->bind(cmd->add_flag("--exact-gradient", opts->exact_gradients,
                             "Enumeration negative phase (small models only)"),
               "exact-gradient", &opts->exact_gradients);
  fields->bind(cmd->add_option("--checkpoint-every", opts->checkpoint_every,
                               "Write a checkpoint every E epochs (0: final only)"),
               "checkpoint-every", &opts->checkpoint_every);

  cmd->callback([opts, fields] {
    const auto out_dir = finish_resolution(opts->common, *fields);
    const BinaryDataset dataset = load_data_spec(opts->data);

    TrainConfig config;
    config.n_hidden = opts->hidden;
    config.strategy = strategy_from_string(opts->strategy);
    config.k_steps = opts->k_steps;
    config.learning_rate = opts->learning_rate;
    config.batch_size = opts->batch_size;
    config.epochs = opts->epochs;
    config.n_chains = opts->n_chains;
    config.seed = opts->common.seed;
    config.init_sigma = opts->init_sigma;
    config.exact_gradients = opts->exact_gradients;

    std::vector<std::string> checkpoint_names(static_cast<std::size_t>(opts->epochs) + 1);
    auto on_epoch = [&](int epoch, const RbmParams& params) {
      const bool periodic =
          opts->checkpoint_every > 0 && epoch % opts->checkpoint_every == 0;
      if (!periodic && epoch != opts->epochs) return;
      char name[64];
      std::snprintf(name, sizeof(name), "checkpoint_epoch_%06d.rbm", epoch);
      save_checkpoint(params, out_dir / name,
                      CheckpointMeta{epoch, opts->strategy, opts->common.seed});
      checkpoint_names[static_cast<std::size_t>(epoch)] = name;
    };

    const TrainResult result = train(config, dataset, on_epoch);
    save_checkpoint(result.params, out_dir / "checkpoint_final.rbm",
                    CheckpointMeta{opts->epochs, opts->strategy, opts->common.seed});

    std::ostringstream trace;
    for (const auto& rec : result.trace.records) {
      nlohmann::ordered_json line;
      line["epoch"] = rec.epoch;
      line["strategy"] = opts->strategy;
      line["ll_proxy"] = rec.ll_proxy;
      line["checkpoint"] = checkpoint_names[static_cast<std::size_t>(rec.epoch)];
      trace << line.dump() << '\n';
    }
    write_text_file(out_dir / "trace.jsonl", trace.str());
    write_manifest(out_dir, "train", opts->common.seed, fields->manifest_config());
  });
}

// --------------------------------------------------------------- sample --

struct SampleOpts {
  CommonOpts common;
  std::string checkpoint;
  std::size_t n_samples = 100;
  int k_steps = 1000;
};

void setup_sample(CLI::App& app) {
  auto opts = std::make_shared<SampleOpts>();
  auto fields = std::make_shared<FieldSet>();
  CLI::App* cmd = app.add_subcommand("sample", "Draw block Gibbs samples from a checkpoint");
  add_common(cmd, opts->common, *fields);
  fields->bind(cmd->add_option("--checkpoint", opts->checkpoint, "Model checkpoint"),
               "checkpoint", &opts->checkpoint, /*required=*/true);
  fields->bind(cmd->add_option("--n", opts->n_samples, "Number of samples"), "n",
               &opts->n_samples);
  fields->bind(cmd->add_option("--k", opts->k_steps, "Sweeps per chain"), "k", &opts->k_steps);

  cmd->callback([opts, fields] {
    const auto out_dir = finish_resolution(opts->common, *fields);
    const RbmParams params = load_checkpoint(opts->checkpoint);
    const Matrix visible =
        sample_chains(params, opts->n_samples, opts->k_steps, opts->common.seed, nullptr);
    write_text_file(out_dir / "samples.csv", bits_to_csv(visible));
    write_manifest(out_dir, "sample", opts->common.seed, fields->manifest_config());
  });
}

// --------------------------------------------------------- estimate-logz --

struct LogZOpts {
  CommonOpts common;
  std::string checkpoint;
  std::string mode = "ais";
  int n_temps = 1000;
  int n_chains = 100;
  int burn_in = 1000;
};

void setup_estimate_logz(CLI::App& app) {
  auto opts = std::make_shared<LogZOpts>();
  auto fields = std::make_shared<FieldSet>();
  CLI::App* cmd = app.add_subcommand("estimate-logz", "Exact or annealed log partition function");
  add_common(cmd, opts->common, *fields);
  fields->bind(cmd->add_option("--checkpoint", opts->checkpoint, "Model checkpoint"),
               "checkpoint", &opts->checkpoint, /*required=*/true);
  fields->bind(cmd->add_option("--mode", opts->mode, "ais, rais or exact"), "mode", &opts->mode);
  fields->bind(cmd->add_option("--temps", opts->n_temps, "Annealing steps"), "temps",
               &opts->n_temps);
  fields->bind(cmd->add_option("--chains", opts->n_chains, "Annealing chains"), "chains",
               &opts->n_chains);
  fields->bind(cmd->add_option("--burn-in", opts->burn_in, "RAIS equilibration sweeps"),
               "burn-in", &opts->burn_in);

  cmd->callback([opts, fields] {
    const auto out_dir = finish_resolution(opts->common, *fields);
    const RbmParams params = load_checkpoint(opts->checkpoint);

    AisConfig cfg;
    cfg.n_temps = opts->n_temps;
    cfg.n_chains = opts->n_chains;
    cfg.seed = opts->common.seed;
    cfg.rais_burn_in = opts->burn_in;

    LogZEstimate estimate;
    if (opts->mode == "ais") {
      estimate = ais_log_z(params, cfg);
    } else if (opts->mode == "rais") {
      estimate = rais_log_z(params, cfg);
    } else if (opts->mode == "exact") {
      estimate = exact_log_z(params);
    } else {
      throw ParseError("config field 'mode' must be ais, rais or exact");
    }

    nlohmann::ordered_json j;
    j["log_z"] = estimate.log_z;
    j["std_err"] = estimate.std_err;
    j["mode"] = to_string(estimate.direction);
    write_text_file(out_dir / "logz.json", j.dump(2) + "\n");
    write_manifest(out_dir, "estimate-logz", opts->common.seed, fields->manifest_config());
  });
}

// ------------------------------------------------------- analyze-spectrum --

struct SpectrumOpts {
  CommonOpts common;
  std::string checkpoint;
  int bins = 60;
  double sigma = 0.0;  // 0: estimate from the coupling entries
};

void setup_analyze_spectrum(CLI::App& app) {
  auto opts = std::make_shared<SpectrumOpts>();
  auto fields = std::make_shared<FieldSet>();
  CLI::App* cmd = app.add_subcommand("analyze-spectrum",
                                     "Singular spectrum, saddles and the MP reference law");
  add_common(cmd, opts->common, *fields);
  fields->bind(cmd->add_option("--checkpoint", opts->checkpoint, "Model checkpoint"),
               "checkpoint", &opts->checkpoint, /*required=*/true);
  fields->bind(cmd->add_option("--bins", opts->bins, "Histogram bins"), "bins", &opts->bins);
  fields->bind(cmd->add_option("--sigma", opts->sigma,
                               "MP reference sigma (0: estimate from the couplings)"),
               "sigma", &opts->sigma);

  cmd->callback([opts, fields] {
    const auto out_dir = finish_resolution(opts->common, *fields);
    const RbmParams params = load_checkpoint(opts->checkpoint);
    const ReciprocalFrame frame = decompose(params);

    double sigma = opts->sigma;
    if (sigma <= 0.0) {
      const double mean = params.w.mean();
      sigma = std::sqrt((params.w.array() - mean).square().mean());
    }
    const MpLaw law = make_mp_law(params.n_visible(), params.n_hidden(), sigma);
    const SpectralReport report = spectrum_report(frame, law, opts->bins);
    write_text_file(out_dir / "spectrum.csv", report_to_csv(report));
    write_text_file(out_dir / "spectrum.json", report_to_json(report));
    write_manifest(out_dir, "analyze-spectrum", opts->common.seed, fields->manifest_config());
  });
}

// -------------------------------------------------------- probe-symmetry --

struct ProbeOpts {
  CommonOpts common;
  std::string checkpoint;
  double rotations_frac = 0.1;
  int bins = 200;
  int baseline_reps = 200;
};

void setup_probe_symmetry(CLI::App& app) {
  auto opts = std::make_shared<ProbeOpts>();
  auto fields = std::make_shared<FieldSet>();
  CLI::App* cmd = app.add_subcommand("probe-symmetry",
                                     "Random-rotation Jensen divergence of the couplings");
  add_common(cmd, opts->common, *fields);
  fields->bind(cmd->add_option("--checkpoint", opts->checkpoint, "Model checkpoint"),
               "checkpoint", &opts->checkpoint, /*required=*/true);
  fields->bind(cmd->add_option("--rotations-frac", opts->rotations_frac,
                               "Rotations per dimension fraction"),
               "rotations-frac", &opts->rotations_frac);
  fields->bind(cmd->add_option("--bins", opts->bins, "Histogram bins"), "bins", &opts->bins);
  fields->bind(cmd->add_option("--baseline-reps", opts->baseline_reps,
                               "Self-resampling baseline repetitions"),
               "baseline-reps", &opts->baseline_reps);

  cmd->callback([opts, fields] {
    const auto out_dir = finish_resolution(opts->common, *fields);
    const RbmParams params = load_checkpoint(opts->checkpoint);

    RotationPlan plan_v = default_probe_plan(params.n_visible(), opts->rotations_frac);
    RotationPlan plan_h = default_probe_plan(params.n_hidden(), opts->rotations_frac);

    Rng probe_rng = Rng::stream(opts->common.seed, {0x70726f6265ULL});
    const SymmetryProbeResult probe =
        rotation_symmetry_probe_detail(params, plan_v, plan_h, opts->bins, probe_rng);

    std::vector<double> baseline(static_cast<std::size_t>(opts->baseline_reps));
    for (int r = 0; r < opts->baseline_reps; ++r) {
      Rng rng = Rng::stream(opts->common.seed, {0x62617365ULL, static_cast<std::uint64_t>(r)});
      baseline[static_cast<std::size_t>(r)] = self_resampling_baseline(params, opts->bins, rng);
    }
    std::sort(baseline.begin(), baseline.end());
    const double baseline_mean =
        baseline.empty() ? 0.0
                         : std::accumulate(baseline.begin(), baseline.end(), 0.0) /
                               static_cast<double>(baseline.size());
    const double baseline_p99 =
        baseline.empty()
            ? 0.0
            : baseline[std::min(baseline.size() - 1,
                                static_cast<std::size_t>(0.99 * static_cast<double>(baseline.size())))];

    // Fresh Gaussian model of the same shape: the rotational-invariance line.
    Rng untrained_init = Rng::stream(opts->common.seed, {0x756e7472ULL});
    const RbmParams untrained =
        init_params(params.n_visible(), params.n_hidden(), 0.01, untrained_init);
    Rng untrained_rng = Rng::stream(opts->common.seed, {0x756e7472ULL, 1});
    const double untrained_jsd =
        rotation_symmetry_probe(untrained, plan_v, plan_h, opts->bins, untrained_rng);

    nlohmann::ordered_json j;
    j["jsd"] = probe.jsd;
    j["baseline_mean"] = baseline_mean;
    j["baseline_p99"] = baseline_p99;
    j["baseline_reps"] = opts->baseline_reps;
    j["untrained_jsd"] = untrained_jsd;
    j["rotations_visible"] = plan_v.n_rotations;
    j["rotations_hidden"] = plan_h.n_rotations;
    j["bins"] = opts->bins;
    write_text_file(out_dir / "symmetry.json", j.dump(2) + "\n");

    std::ostringstream csv;
    csv << "bin_lo,bin_hi,count_original,count_rotated\n";
    for (std::size_t i = 0; i < probe.original.counts.size(); ++i) {
      csv << fmt_double(probe.original.bin_edges[i]) << ','
          << fmt_double(probe.original.bin_edges[i + 1]) << ',' << probe.original.counts[i] << ','
          << probe.rotated.counts[i] << '\n';
    }
    write_text_file(out_dir / "weight_histograms.csv", csv.str());
    write_manifest(out_dir, "probe-symmetry", opts->common.seed, fields->manifest_config());
  });
}

// ------------------------------------------------------ rotate-experiment --

struct RotateOpts {
  CommonOpts common;
  std::string checkpoint;
  std::string mode = "top2_pi";
  std::size_t n_samples = 16;
  int gibbs_k = 500;
};

void setup_rotate_experiment(CLI::App& app) {
  auto opts = std::make_shared<RotateOpts>();
  auto fields = std::make_shared<FieldSet>();
  CLI::App* cmd = app.add_subcommand("rotate-experiment",
                                     "Reconstruction before/after eigenvector rotations");
  add_common(cmd, opts->common, *fields);
  fields->bind(cmd->add_option("--checkpoint", opts->checkpoint, "Model checkpoint"),
               "checkpoint", &opts->checkpoint, /*required=*/true);
  fields->bind(cmd->add_option("--mode", opts->mode, "identity, top2_pi or top5_burst"), "mode",
               &opts->mode);
  fields->bind(cmd->add_option("--samples", opts->n_samples, "Gibbs samples to push through"),
               "samples", &opts->n_samples);
  fields->bind(cmd->add_option("--gibbs-k", opts->gibbs_k, "Sweeps per sample chain"), "gibbs-k",
               &opts->gibbs_k);

  cmd->callback([opts, fields] {
    const auto out_dir = finish_resolution(opts->common, *fields);
    const RbmParams params = load_checkpoint(opts->checkpoint);

    RotationExperiment mode;
    if (opts->mode == "identity") {
      mode = RotationExperiment::Identity;
    } else if (opts->mode == "top2_pi") {
      mode = RotationExperiment::Top2Pi;
    } else if (opts->mode == "top5_burst" || opts->mode == "top5_protected_burst") {
      mode = RotationExperiment::Top5ProtectedBurst;
    } else {
      throw ParseError("config field 'mode' must be identity, top2_pi or top5_burst");
    }

    Matrix hidden;
    sample_chains(params, opts->n_samples, opts->gibbs_k, opts->common.seed, &hidden);
    Rng rot_rng = Rng::stream(opts->common.seed, {0x726f74ULL});
    const RotatedReconstruction rec = hierarchical_rotation(params, hidden, mode, rot_rng);

    write_text_file(out_dir / "before.csv", reals_to_csv(rec.before));
    write_text_file(out_dir / "after.csv", reals_to_csv(rec.after));

    nlohmann::ordered_json j;
    j["mode"] = opts->mode;
    j["n_samples"] = opts->n_samples;
    j["mean_abs_change"] = (rec.after - rec.before).cwiseAbs().mean();
    write_text_file(out_dir / "scores.json", j.dump(2) + "\n");
    write_manifest(out_dir, "rotate-experiment", opts->common.seed, fields->manifest_config());
  });
}

// --------------------------------------------------------- kurtosis-scan --

struct KurtosisOpts {
  CommonOpts common;
  std::string checkpoint;
  std::size_t n_samples = 100000;
};

void setup_kurtosis_scan(CLI::App& app) {
  auto opts = std::make_shared<KurtosisOpts>();
  auto fields = std::make_shared<FieldSet>();
  CLI::App* cmd = app.add_subcommand("kurtosis-scan",
                                     "Gaussianity of the reciprocal variables per mode");
  add_common(cmd, opts->common, *fields);
  fields->bind(cmd->add_option("--checkpoint", opts->checkpoint, "Model checkpoint"),
               "checkpoint", &opts->checkpoint, /*required=*/true);
  fields->bind(cmd->add_option("--samples", opts->n_samples, "Monte Carlo samples (>= 1e4)"),
               "samples", &opts->n_samples);

  cmd->callback([opts, fields] {
    const auto out_dir = finish_resolution(opts->common, *fields);
    const RbmParams params = load_checkpoint(opts->checkpoint);
    const ReciprocalFrame frame = decompose(params);
    const KurtosisScan scan = kurtosis_scan(frame, opts->n_samples, opts->common.seed);

    std::ostringstream csv;
    csv << "mode,lambda,kurtosis_y,kurtosis_x\n";
    for (Index k = 0; k < static_cast<Index>(scan.modes.size()); ++k) {
      const Index mode = scan.modes[static_cast<std::size_t>(k)];
      csv << (mode + 1) << ',' << fmt_double(frame.lambdas[mode]) << ','
          << fmt_double(scan.kurtosis_y[k]) << ',' << fmt_double(scan.kurtosis_x[k]) << '\n';
    }
    write_text_file(out_dir / "kurtosis.csv", csv.str());

    nlohmann::ordered_json j;
    j["n_samples"] = opts->n_samples;
    j["n_modes"] = scan.modes.size();
    j["mean_y"] = scan.mean_y;
    j["sd_y"] = scan.sd_y;
    j["mean_x"] = scan.mean_x;
    j["sd_x"] = scan.sd_x;
    write_text_file(out_dir / "kurtosis.json", j.dump(2) + "\n");
    write_manifest(out_dir, "kurtosis-scan", opts->common.seed, fields->manifest_config());
  });
}

// ---------------------------------------------------------- boson-report --

struct BosonOpts {
  CommonOpts common;
  std::string checkpoint;
  double beta = 1.0;
  double k_diag = 4.0;
};

void setup_boson_report(CLI::App& app) {
  auto opts = std::make_shared<BosonOpts>();
  auto fields = std::make_shared<FieldSet>();
  CLI::App* cmd = app.add_subcommand("boson-report",
                                     "Harmonic mode frequencies and divergent modes");
  add_common(cmd, opts->common, *fields);
  fields->bind(cmd->add_option("--checkpoint", opts->checkpoint, "Model checkpoint"),
               "checkpoint", &opts->checkpoint, /*required=*/true);
  fields->bind(cmd->add_option("--beta", opts->beta, "Inverse temperature"), "beta", &opts->beta);
  fields->bind(cmd->add_option("--k", opts->k_diag, "Constraint curvature constant"), "k",
               &opts->k_diag);

  cmd->callback([opts, fields] {
    const auto out_dir = finish_resolution(opts->common, *fields);
    const RbmParams params = load_checkpoint(opts->checkpoint);
    const ReciprocalFrame frame = decompose(params);
    const OscillatorSpectrum spectrum = mode_frequencies(frame, opts->beta, opts->k_diag);
    const DivergentReport divergent = divergent_modes(spectrum);

    nlohmann::ordered_json j;
    j["beta"] = spectrum.beta;
    j["k"] = spectrum.k_diag;
    j["lambda_c"] = divergent.lambda_c;
    j["n_coupled"] = spectrum.n_coupled;
    j["omegas"] = std::vector<double>(spectrum.omegas.data(),
                                      spectrum.omegas.data() + spectrum.omegas.size());
    std::vector<Index> divergent_one_based;
    for (Index m : divergent.modes) divergent_one_based.push_back(m + 1);
    j["divergent"] = divergent_one_based;
    write_text_file(out_dir / "boson.json", j.dump(2) + "\n");
    write_manifest(out_dir, "boson-report", opts->common.seed, fields->manifest_config());
  });
}

// ------------------------------------------------------- trace-landscape --

struct TraceOpts {
  CommonOpts common;
  std::string checkpoints_glob;
  std::string modes = "1";
  std::string data;
  std::size_t gibbs_chains = 512;
  int gibbs_k = 200;
};

std::vector<Index> parse_modes(const std::string& spec, Index n_coupled) {
  std::vector<Index> modes;
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    Index one_based;
    if (token == "M+1" || token == "m+1") {
      one_based = n_coupled + 1;  // first tail mode
    } else {
      try {
        one_based = static_cast<Index>(std::stol(token));
      } catch (const std::exception&) {
        throw ParseError("config field 'modes' has a malformed entry: " + token);
      }
    }
    if (one_based < 1) throw ParseError("config field 'modes' entries must be >= 1");
    modes.push_back(one_based - 1);
  }
  if (modes.empty()) throw ParseError("config field 'modes' selects no modes");
  return modes;
}

void setup_trace_landscape(CLI::App& app) {
  auto opts = std::make_shared<TraceOpts>();
  auto fields = std::make_shared<FieldSet>();
  CLI::App* cmd = app.add_subcommand("trace-landscape",
                                     "Per-epoch reciprocal coordinates of data and samples");
  add_common(cmd, opts->common, *fields);
  fields->bind(cmd->add_option("--checkpoints", opts->checkpoints_glob,
                               "Checkpoint glob, e.g. run/checkpoint_epoch_*.rbm"),
               "checkpoints", &opts->checkpoints_glob, /*required=*/true);
  fields->bind(cmd->add_option("--modes", opts->modes, "1-based mode list, e.g. 1,M+1"), "modes",
               &opts->modes);
  fields->bind(cmd->add_option("--data", opts->data, "Test dataset spec"), "data", &opts->data,
               /*required=*/true);
  fields->bind(cmd->add_option("--gibbs-chains", opts->gibbs_chains, "Sampling chains per epoch"),
               "gibbs-chains", &opts->gibbs_chains);
  fields->bind(cmd->add_option("--gibbs-k", opts->gibbs_k, "Sweeps per sampling chain"),
               "gibbs-k", &opts->gibbs_k);

  cmd->callback([opts, fields] {
    const auto out_dir = finish_resolution(opts->common, *fields);
    const auto paths = expand_glob(opts->checkpoints_glob);

    std::vector<std::pair<int, RbmParams>> checkpoints;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      RbmParams params = load_checkpoint(paths[i]);
      const CheckpointMeta meta = load_checkpoint_meta(paths[i]);
      checkpoints.emplace_back(meta.epoch, std::move(params));
    }
    std::stable_sort(checkpoints.begin(), checkpoints.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    const BinaryDataset test_data = load_data_spec(opts->data);
    const Index n_coupled =
        std::min(checkpoints.front().second.n_visible(), checkpoints.front().second.n_hidden());
    const std::vector<Index> modes = parse_modes(opts->modes, n_coupled);

    GibbsConfig gibbs;
    gibbs.n_chains = opts->gibbs_chains;
    gibbs.k_steps = opts->gibbs_k;
    gibbs.seed = opts->common.seed;

    const LandscapeTrace trace = landscape_trace(checkpoints, test_data, gibbs, modes);

    std::ostringstream csv;
    csv << "epoch,mode,mu,saddle,test_mean,test_sd,gibbs_mean,gibbs_sd\n";
    for (const auto& r : trace.records) {
      csv << r.epoch << ',' << (r.mode + 1) << ',' << fmt_double(r.mu) << ','
          << fmt_double(r.saddle) << ',' << fmt_double(r.test_mean) << ','
          << fmt_double(r.test_sd) << ',' << fmt_double(r.gibbs_mean) << ','
          << fmt_double(r.gibbs_sd) << '\n';
    }
    write_text_file(out_dir / "landscape.csv", csv.str());
    write_manifest(out_dir, "trace-landscape", opts->common.seed, fields->manifest_config());
  });
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"RBM training and reciprocal-space analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  setup_train(app);
  setup_sample(app);
  setup_estimate_logz(app);
  setup_analyze_spectrum(app);
  setup_probe_symmetry(app);
  setup_rotate_experiment(app);
  setup_kurtosis_scan(app);
  setup_boson_report(app);
  setup_trace_landscape(app);

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const TooLarge& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const DegenerateMode& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const DegenerateWeights& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const NotOrthonormal& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace rbmscope::cli
