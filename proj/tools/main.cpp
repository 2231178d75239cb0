// Copyright 2026-present the spectral-probe project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// spectral: probe contextualized-embedding datasets in the frequency domain.
//
// Subcommands: gen, train, eval, profile, compare. Exit codes: 0 success,
// 2 usage error, 3 data/model error. stdout carries machine-readable JSON
// only; diagnostics go to stderr. No environment variables are consulted.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "manifest.hpp"
#include "spectral/analysis.hpp"
#include "spectral/data_io.hpp"
#include "spectral/dataset.hpp"
#include "spectral/errors.hpp"
#include "spectral/filters.hpp"
#include "spectral/probe.hpp"
#include "spectral/training.hpp"

namespace fs = std::filesystem;
using namespace spectral;

namespace {

FilterBand parse_band(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= text.size()) {
    throw UsageError("invalid band syntax '" + text + "' (expected lo:hi)");
  }
  try {
    std::size_t pos = 0;
    const long long lo = std::stoll(text.substr(0, colon), &pos);
    if (pos != colon) throw std::invalid_argument(text);
    const std::string hi_text = text.substr(colon + 1);
    const long long hi = std::stoll(hi_text, &pos);
    if (pos != hi_text.size()) throw std::invalid_argument(text);
    if (lo < 0 || hi < 0 || lo > hi) throw std::invalid_argument(text);
    return make_band(static_cast<std::size_t>(lo), static_cast<std::size_t>(hi));
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  } catch (const std::exception&) {
    throw UsageError("invalid band syntax '" + text + "' (expected lo:hi)");
  }
}

struct ModeSpec {
  ProbeMode mode = ProbeMode::orig;
  std::optional<FilterBand> band;
  std::string band_name;
};

ModeSpec parse_mode(const std::string& text) {
  ModeSpec spec;
  if (text == "orig") {
    spec.mode = ProbeMode::orig;
    return spec;
  }
  if (text == "auto") {
    spec.mode = ProbeMode::auto_filter;
    return spec;
  }
  if (text.rfind("fixed:", 0) == 0) {
    spec.mode = ProbeMode::fixed_band;
    spec.band_name = text.substr(6);
    spec.band = named_band(spec.band_name);  // throws UsageError listing the five names
    return spec;
  }
  throw UsageError("unknown mode '" + text + "' (expected orig|fixed:<band>|auto)");
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string token =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (token.empty()) throw UsageError("invalid seed list '" + text + "'");
    try {
      std::size_t pos = 0;
      const unsigned long long seed = std::stoull(token, &pos);
      if (pos != token.size()) throw std::invalid_argument(token);
      seeds.push_back(seed);
    } catch (const std::exception&) {
      throw UsageError("invalid seed '" + token + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return seeds;
}

std::vector<std::string> collect_argv(int argc, char** argv) {
  return {argv, argv + argc};
}

// Binary container when the magic matches, JSONL import otherwise.
Dataset load_any_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file", path);
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() == 4 && std::string_view(magic, 4) == "SPRB") return read_dataset(path);
  return import_jsonl(path);
}

nlohmann::json config_json(const TrainConfig& cfg) {
  return {
      {"learning_rate", cfg.learning_rate},
      {"plateau_decay", cfg.plateau_decay},
      {"batch_size", cfg.batch_size},
      {"max_epochs", cfg.max_epochs},
      {"early_stop_patience", cfg.early_stop_patience},
      {"plateau_patience", cfg.plateau_patience},
      {"plateau_min_delta", cfg.plateau_min_delta},
      {"adam_beta1", cfg.adam_beta1},
      {"adam_beta2", cfg.adam_beta2},
      {"adam_eps", cfg.adam_eps},
  };
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  std::string out;
  std::uint64_t n = 0;
  std::uint64_t e = 0;
  std::uint64_t classes = 0;
  std::uint64_t count = 0;
  std::string signal_band;
  std::string noise_band;
  double snr = 1.0;
  std::string task_kind = "sequence";
  std::uint64_t seed = 1932;
  std::string task = "synthetic";
  std::string language = "xx";
};

int run_gen(const GenArgs& args, const std::vector<std::string>& argv) {
  GenSpec spec;
  spec.seq_len = args.n;
  spec.emb_dim = args.e;
  spec.class_count = args.classes;
  spec.seq_count = args.count;
  spec.signal_band = parse_band(args.signal_band);
  spec.noise_band = parse_band(args.noise_band);
  spec.snr = args.snr;
  spec.task_kind = task_kind_from_name(args.task_kind);
  spec.task_name = args.task;
  spec.language = args.language;

  const Dataset dataset = gen_synthetic(spec, args.seed);
  write_dataset(dataset, args.out);

  nlohmann::json manifest = make_manifest("gen", argv, {});
  manifest["parameters"] = {
      {"n", args.n},           {"e", args.e},
      {"classes", args.classes}, {"count", args.count},
      {"signal_band", args.signal_band}, {"noise_band", args.noise_band},
      {"snr", args.snr},       {"task_kind", args.task_kind},
      {"seed", args.seed},     {"task", args.task},
      {"language", args.language},
  };
  manifest["outputs"].push_back(describe_input(args.out));
  write_manifest(manifest, args.out + ".manifest.json");
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string mode = "auto";
  std::string train_path;
  std::string val_path;
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string seeds_text;
  std::uint64_t filter_length = kCanonicalFilterLength;
  // config overrides; NaN / max() mean "not set"
  std::optional<double> learning_rate;
  std::optional<double> plateau_decay;
  std::optional<std::uint64_t> batch_size;
  std::optional<std::uint64_t> max_epochs;
  std::optional<std::uint64_t> early_stop_patience;
  std::optional<std::uint64_t> plateau_patience;
  std::optional<double> plateau_min_delta;
};

int run_train(const TrainArgs& args, const std::vector<std::string>& argv) {
  const ModeSpec mode = parse_mode(args.mode);
  if (args.seed && !args.seeds_text.empty()) {
    throw UsageError("--seed and --seeds are mutually exclusive");
  }
  std::vector<std::uint64_t> seeds;
  if (args.seed) {
    seeds = {*args.seed};
  } else if (!args.seeds_text.empty()) {
    seeds = parse_seed_list(args.seeds_text);
  } else {
    seeds.assign(kDefaultSeeds.begin(), kDefaultSeeds.end());
  }

  TrainConfig cfg;
  if (!args.config_path.empty()) cfg = parse_config_file(args.config_path);
  if (args.learning_rate) cfg.learning_rate = *args.learning_rate;
  if (args.plateau_decay) cfg.plateau_decay = *args.plateau_decay;
  if (args.batch_size) cfg.batch_size = *args.batch_size;
  if (args.max_epochs) cfg.max_epochs = *args.max_epochs;
  if (args.early_stop_patience) cfg.early_stop_patience = *args.early_stop_patience;
  if (args.plateau_patience) cfg.plateau_patience = *args.plateau_patience;
  if (args.plateau_min_delta) cfg.plateau_min_delta = *args.plateau_min_delta;
  try {
    validate_config(cfg);
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }

  const Dataset train_set = load_any_dataset(args.train_path);
  const Dataset val_set = load_any_dataset(args.val_path);

  ProbeModel model_template;
  switch (mode.mode) {
    case ProbeMode::orig:
      model_template = make_orig_model(train_set.emb_dim, train_set.class_count);
      break;
    case ProbeMode::fixed_band:
      model_template =
          make_fixed_band_model(*mode.band, train_set.emb_dim, train_set.class_count);
      break;
    case ProbeMode::auto_filter:
      model_template =
          make_auto_model(args.filter_length, train_set.emb_dim, train_set.class_count);
      break;
  }

  fs::create_directories(args.out_dir);
  const MultiSeedResult result =
      run_multiseed(model_template, train_set, val_set, cfg, seeds);

  nlohmann::json per_seed = nlohmann::json::array();
  bool any_failure = false;
  for (const SeedOutcome& run : result.runs) {
    nlohmann::json entry{{"seed", run.seed}, {"ok", run.ok}};
    if (run.ok) {
      const std::string stem = "seed-" + std::to_string(run.seed);
      const std::string ckpt_path = (fs::path(args.out_dir) / (stem + ".ckpt")).string();
      const std::string report_path =
          (fs::path(args.out_dir) / (stem + ".report.jsonl")).string();
      Checkpoint checkpoint;
      checkpoint.model = run.result.model;
      checkpoint.config = cfg;
      checkpoint.config.seed = run.seed;
      checkpoint.metadata = {
          {"task", train_set.task_name},
          {"language", train_set.language},
          {"mode", mode_name(mode.mode)},
          {"seed", std::to_string(run.seed)},
      };
      if (mode.mode == ProbeMode::fixed_band) checkpoint.metadata["band"] = mode.band_name;
      save_checkpoint(checkpoint, ckpt_path);
      write_report_jsonl(run.result.report, report_path);
      entry["accuracy"] = run.result.report.best_val_accuracy;
      entry["val_loss"] = run.result.report.best_val_loss;
      entry["best_epoch"] = run.result.report.best_epoch;
      entry["epochs_run"] = run.result.report.epochs.size();
      // Filenames relative to the summary itself, so identical runs into
      // different directories stay byte-identical.
      entry["checkpoint"] = stem + ".ckpt";
      entry["report"] = stem + ".report.jsonl";
    } else {
      any_failure = true;
      entry["error"] = run.error;
      std::cerr << "seed " << run.seed << " failed: " << run.error << "\n";
    }
    per_seed.push_back(std::move(entry));
  }

  nlohmann::json summary{
      {"mode", args.mode},
      {"seeds", seeds},
      {"per_seed", per_seed},
      {"mean_accuracy", result.mean_accuracy},
      {"stddev_accuracy", result.stddev_accuracy},
  };
  const std::string summary_path = (fs::path(args.out_dir) / "summary.json").string();
  {
    std::ofstream out(summary_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write summary", summary_path);
    out << summary.dump(2) << '\n';
  }

  nlohmann::json manifest =
      make_manifest("train", argv, {args.train_path, args.val_path});
  manifest["parameters"] = {
      {"mode", args.mode},
      {"config", config_json(cfg)},
      {"seeds", seeds},
      {"filter_length", args.filter_length},
  };
  if (!args.config_path.empty()) manifest["parameters"]["config_file"] = args.config_path;
  for (const SeedOutcome& run : result.runs) {
    if (!run.ok) continue;
    const std::string stem = "seed-" + std::to_string(run.seed);
    manifest["outputs"].push_back(
        describe_input((fs::path(args.out_dir) / (stem + ".ckpt")).string()));
    manifest["outputs"].push_back(
        describe_input((fs::path(args.out_dir) / (stem + ".report.jsonl")).string()));
  }
  manifest["outputs"].push_back(describe_input(summary_path));
  write_manifest(manifest, (fs::path(args.out_dir) / "manifest.json").string());

  std::cout << summary.dump() << "\n";
  return any_failure ? 3 : 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string checkpoint_path;
  std::string data_path;
};

int run_eval(const EvalArgs& args) {
  const Checkpoint checkpoint = load_checkpoint(args.checkpoint_path);
  const Dataset dataset = load_any_dataset(args.data_path);
  if (dataset.emb_dim != checkpoint.model.emb_dim()) {
    throw ValidationError("dataset width " + std::to_string(dataset.emb_dim) +
                          " does not match checkpoint width " +
                          std::to_string(checkpoint.model.emb_dim()));
  }
  const EvalResult eval = evaluate(checkpoint.model, dataset);
  nlohmann::json per_class = nlohmann::json::array();
  for (std::size_t c = 0; c < eval.per_class_accuracy.size(); ++c) {
    if (std::isnan(eval.per_class_accuracy[c])) {
      per_class.push_back(nullptr);
    } else {
      per_class.push_back(eval.per_class_accuracy[c]);
    }
  }
  const nlohmann::json out{
      {"accuracy", eval.accuracy},
      {"per_class_accuracy", per_class},
      {"per_class_positions", eval.per_class_positions},
      {"position_count", eval.position_count},
  };
  std::cout << out.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// profile / compare

struct ProfileArgs {
  std::vector<std::string> checkpoints;
  std::string out_dir;
  bool svg = false;
};

SpectralProfile profile_from_checkpoint(const std::string& path) {
  const Checkpoint checkpoint = load_checkpoint(path);
  std::string task = "unknown";
  std::string language;
  if (auto it = checkpoint.metadata.find("task"); it != checkpoint.metadata.end()) {
    task = it->second;
  }
  if (auto it = checkpoint.metadata.find("language"); it != checkpoint.metadata.end()) {
    language = it->second;
  }
  return extract_profile(checkpoint.model, task, language);
}

std::string unique_stem(const std::string& path, std::map<std::string, int>& used) {
  std::string stem = fs::path(path).stem().string();
  const int n = ++used[stem];
  if (n > 1) stem += "-" + std::to_string(n);
  return stem;
}

int run_profile(const ProfileArgs& args, const std::vector<std::string>& argv) {
  fs::create_directories(args.out_dir);
  std::vector<SpectralProfile> profiles;
  std::vector<std::string> outputs;
  std::map<std::string, int> stems;
  for (const std::string& path : args.checkpoints) {
    SpectralProfile profile = profile_from_checkpoint(path);
    const std::string stem = unique_stem(path, stems);
    const std::string csv = (fs::path(args.out_dir) / (stem + ".profile.csv")).string();
    export_profile_csv(profile, csv);
    outputs.push_back(csv);
    if (args.svg) {
      const std::string svg = (fs::path(args.out_dir) / (stem + ".profile.svg")).string();
      export_profile_svg(profile, svg);
      outputs.push_back(svg);
    }
    profiles.push_back(std::move(profile));
  }
  if (profiles.size() > 1) {
    const ProfileStats stats = average_profile(profiles);
    const std::string csv = (fs::path(args.out_dir) / "profile-mean.csv").string();
    export_profile_stats_csv(stats, csv);
    outputs.push_back(csv);
    if (args.svg) {
      const std::string svg = (fs::path(args.out_dir) / "profile-mean.svg").string();
      export_profile_stats_svg(stats, svg);
      outputs.push_back(svg);
    }
  }

  nlohmann::json manifest = make_manifest("profile", argv, args.checkpoints);
  manifest["parameters"] = {{"svg", args.svg}};
  for (const std::string& path : outputs) manifest["outputs"].push_back(describe_input(path));
  write_manifest(manifest, (fs::path(args.out_dir) / "manifest.json").string());

  nlohmann::json listing = nlohmann::json::array();
  for (const std::string& path : outputs) listing.push_back(path);
  std::cout << nlohmann::json{{"outputs", listing}}.dump() << "\n";
  return 0;
}

struct CompareArgs {
  std::vector<std::string> checkpoints;
  std::string out_dir;
  std::string labels_text;
  bool per_seed = false;
  bool svg = false;
};

int run_compare(const CompareArgs& args, const std::vector<std::string>& argv) {
  std::vector<std::string> labels;
  if (!args.labels_text.empty()) {
    std::size_t start = 0;
    while (start <= args.labels_text.size()) {
      const std::size_t comma = args.labels_text.find(',', start);
      labels.push_back(args.labels_text.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (labels.size() != args.checkpoints.size()) {
      throw UsageError("--labels must name exactly one label per checkpoint");
    }
  }

  std::vector<SpectralProfile> profiles;
  for (std::size_t i = 0; i < args.checkpoints.size(); ++i) {
    SpectralProfile profile = profile_from_checkpoint(args.checkpoints[i]);
    if (!labels.empty()) {
      profile.task = labels[i];
      profile.language.clear();
    }
    profiles.push_back(std::move(profile));
  }

  // Seed-averaged by default: checkpoints sharing a label collapse to their
  // mean profile; --per-seed keeps them separate.
  std::vector<SpectralProfile> columns;
  if (args.per_seed) {
    columns = std::move(profiles);
    std::map<std::string, int> seen;
    for (SpectralProfile& p : columns) {
      const int n = ++seen[p.label()];
      if (n > 1) p.task = p.task + "#" + std::to_string(n);
    }
  } else {
    std::vector<std::string> order;
    std::map<std::string, std::vector<SpectralProfile>> groups;
    for (SpectralProfile& p : profiles) {
      const std::string key = p.label();
      if (!groups.count(key)) order.push_back(key);
      groups[key].push_back(std::move(p));
    }
    for (const std::string& key : order) {
      const ProfileStats stats = average_profile(groups[key]);
      SpectralProfile mean = stats.mean;
      mean.task = groups[key].front().task;
      mean.language = groups[key].front().language;
      columns.push_back(std::move(mean));
    }
  }
  if (columns.size() < 2) {
    throw ValidationError("compare needs at least two distinct profiles (after grouping)");
  }

  const OverlapMatrix matrix = overlap_matrix(columns);
  fs::create_directories(args.out_dir);
  std::vector<std::string> outputs;
  const std::string csv = (fs::path(args.out_dir) / "overlap.csv").string();
  export_matrix_csv(matrix, csv);
  outputs.push_back(csv);
  if (args.svg) {
    const std::string svg = (fs::path(args.out_dir) / "overlap.svg").string();
    export_matrix_svg(matrix, svg);
    outputs.push_back(svg);
  }

  nlohmann::json manifest = make_manifest("compare", argv, args.checkpoints);
  manifest["parameters"] = {{"per_seed", args.per_seed}, {"svg", args.svg}};
  for (const std::string& path : outputs) manifest["outputs"].push_back(describe_input(path));
  write_manifest(manifest, (fs::path(args.out_dir) / "manifest.json").string());

  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < matrix.values.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < matrix.values.cols(); ++j) {
      row.push_back(matrix.values(i, j));
    }
    rows.push_back(std::move(row));
  }
  std::cout << nlohmann::json{{"labels", matrix.labels}, {"overlap", rows}}.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral probing of contextualized-embedding sequences"};
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic embedding dataset");
  gen->add_option("--out", gen_args.out, "output dataset path")->required();
  gen->add_option("--n", gen_args.n, "sequence length N")->required();
  gen->add_option("--e", gen_args.e, "embedding width E")->required();
  gen->add_option("--classes", gen_args.classes, "class count C")->required();
  gen->add_option("--count", gen_args.count, "number of sequences")->required();
  gen->add_option("--signal-band", gen_args.signal_band, "signal band lo:hi")->required();
  gen->add_option("--noise-band", gen_args.noise_band, "noise band lo:hi")->required();
  gen->add_option("--snr", gen_args.snr, "signal-to-noise amplitude ratio (default 1)");
  gen->add_option("--task-kind", gen_args.task_kind, "token|sequence (default sequence)");
  gen->add_option("--seed", gen_args.seed, "generator seed (default 1932)");
  gen->add_option("--task", gen_args.task, "task label stored in metadata");
  gen->add_option("--language", gen_args.language, "language label stored in metadata");

  TrainArgs train_args;
  CLI::App* train_cmd = app.add_subcommand("train", "train a probe (optionally multi-seed)");
  train_cmd->add_option("--mode", train_args.mode, "orig|fixed:<band>|auto")->required();
  train_cmd->add_option("--train", train_args.train_path, "training dataset")->required();
  train_cmd->add_option("--val", train_args.val_path, "validation dataset")->required();
  train_cmd->add_option("--config", train_args.config_path, "key = value config file");
  train_cmd->add_option("--out", train_args.out_dir, "output directory")->required();
  train_cmd->add_option("--seed", train_args.seed, "single seed");
  train_cmd->add_option("--seeds", train_args.seeds_text,
                        "comma-separated seeds (default 1932,2771,7308,8119,9095)");
  train_cmd->add_option("--filter-length", train_args.filter_length,
                        "canonical filter length M (default 512)");
  train_cmd->add_option("--learning-rate", train_args.learning_rate, "override config");
  train_cmd->add_option("--plateau-decay", train_args.plateau_decay, "override config");
  train_cmd->add_option("--batch-size", train_args.batch_size, "override config");
  train_cmd->add_option("--max-epochs", train_args.max_epochs, "override config");
  train_cmd->add_option("--early-stop-patience", train_args.early_stop_patience,
                        "override config");
  train_cmd->add_option("--plateau-patience", train_args.plateau_patience, "override config");
  train_cmd->add_option("--plateau-min-delta", train_args.plateau_min_delta,
                        "override config");

  EvalArgs eval_args;
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
  eval_cmd->add_option("--checkpoint", eval_args.checkpoint_path, "checkpoint path")
      ->required();
  eval_cmd->add_option("--data", eval_args.data_path, "dataset path")->required();

  ProfileArgs profile_args;
  CLI::App* profile_cmd =
      app.add_subcommand("profile", "export spectral profiles from auto checkpoints");
  profile_cmd->add_option("checkpoints", profile_args.checkpoints, "checkpoint paths")
      ->required();
  profile_cmd->add_option("--out", profile_args.out_dir, "output directory")->required();
  profile_cmd->add_flag("--svg", profile_args.svg, "also render SVG plots");

  CompareArgs compare_args;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "overlap matrix across labeled profiles");
  compare_cmd->add_option("checkpoints", compare_args.checkpoints, "checkpoint paths")
      ->required()
      ->expected(-2);
  compare_cmd->add_option("--out", compare_args.out_dir, "output directory")->required();
  compare_cmd->add_option("--labels", compare_args.labels_text,
                          "comma-separated labels, one per checkpoint");
  compare_cmd->add_flag("--per-seed", compare_args.per_seed,
                        "one column per checkpoint instead of seed-averaged profiles");
  compare_cmd->add_flag("--svg", compare_args.svg, "also render an SVG heatmap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  const std::vector<std::string> argv_list = collect_argv(argc, argv);
  try {
    if (gen->parsed()) return run_gen(gen_args, argv_list);
    if (train_cmd->parsed()) return run_train(train_args, argv_list);
    if (eval_cmd->parsed()) return run_eval(eval_args);
    if (profile_cmd->parsed()) return run_profile(profile_args, argv_list);
    if (compare_cmd->parsed()) return run_compare(compare_args, argv_list);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
