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

// Acceptance suite: ten end-to-end criteria, one pass/fail line each.
// Usage: acceptance_suite <path-to-spectral-cli>
// The heavy experiments (criteria 5-7, 9) run the same desk-scale setup:
// orthonormal transforms at N=512, probes trained with Adam at learning rate
// 0.05 over at most 30 epochs (the desk-scale datasets see ~16 optimizer
// steps per epoch, so they need larger steps than a full-size corpus would).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spectral/analysis.hpp"
#include "spectral/data_io.hpp"
#include "spectral/dct.hpp"
#include "spectral/errors.hpp"
#include "spectral/filters.hpp"
#include "spectral/probe.hpp"
#include "spectral/rng.hpp"
#include "spectral/training.hpp"

using namespace spectral;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

struct CheckFailure {
  std::string message;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw CheckFailure{message};
}

std::string fmt(double value) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

std::string g_cli_path;
fs::path g_work_dir;

int run_cli(const std::string& args) {
  const std::string command = g_cli_path + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Independent oracle: direct summation of the orthonormal DCT-II definition.
std::vector<double> naive_dct2(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      acc += x[t] * std::cos(kPi / static_cast<double>(n) *
                             (static_cast<double>(t) + 0.5) * static_cast<double>(k));
    }
    out[k] = (k == 0 ? std::sqrt(1.0 / static_cast<double>(n))
                     : std::sqrt(2.0 / static_cast<double>(n))) *
             acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shared desk-scale experiments (criterion 5 feeds 6 and 9; 7 is its own).

TrainConfig experiment_config() {
  TrainConfig cfg;
  cfg.learning_rate = 0.05;
  return cfg;  // everything else at defaults: batch 32, 30 epochs, decay 0.5
}

GenSpec low_task_spec(std::size_t count) {
  GenSpec spec;
  spec.seq_len = 512;
  spec.emb_dim = 16;
  spec.class_count = 3;
  spec.seq_count = count;
  spec.signal_band = make_band(0, 1);
  spec.noise_band = make_band(130, 511);
  spec.snr = 1.0;
  spec.task_kind = TaskKind::sequence;
  spec.task_name = "low-task";
  return spec;
}

struct LowTaskResults {
  double orig_mean = 0.0;
  double low_mean = 0.0;
  double auto_mean = 0.0;
  std::vector<SpectralProfile> auto_profiles;
};

const LowTaskResults& low_task_results() {
  static std::optional<LowTaskResults> cached;
  if (cached) return *cached;

  const Dataset train_set = gen_synthetic(low_task_spec(500), 9001);
  const Dataset val_set = gen_synthetic(low_task_spec(100), 9002);
  const TrainConfig cfg = experiment_config();
  const std::vector<std::uint64_t> seeds(kDefaultSeeds.begin(), kDefaultSeeds.end());

  LowTaskResults results;
  const MultiSeedResult orig =
      run_multiseed(make_orig_model(16, 3), train_set, val_set, cfg, seeds);
  const MultiSeedResult low = run_multiseed(make_fixed_band_model(named_band("low"), 16, 3),
                                            train_set, val_set, cfg, seeds);
  const MultiSeedResult learned =
      run_multiseed(make_auto_model(512, 16, 3), train_set, val_set, cfg, seeds);
  for (const SeedOutcome& run : orig.runs) require(run.ok, "orig seed failed: " + run.error);
  for (const SeedOutcome& run : low.runs) require(run.ok, "low seed failed: " + run.error);
  for (const SeedOutcome& run : learned.runs) {
    require(run.ok, "auto seed failed: " + run.error);
    results.auto_profiles.push_back(
        extract_profile(run.result.model, "low-task", "xx"));
  }
  results.orig_mean = orig.mean_accuracy;
  results.low_mean = low.mean_accuracy;
  results.auto_mean = learned.mean_accuracy;
  cached = std::move(results);
  return *cached;
}

double band_mean(const std::vector<double>& weights, std::size_t lo, std::size_t hi) {
  double sum = 0.0;
  for (std::size_t k = lo; k <= hi; ++k) sum += weights[k];
  return sum / static_cast<double>(hi - lo + 1);
}

// ---------------------------------------------------------------------------
// Criteria

// 1. Production transform matches the naive O(N^2) orthonormal DCT-II.
void criterion_dct_oracle() {
  Rng rng(1932);
  for (const std::size_t n : {1u, 2u, 3u, 7u, 8u, 64u, 511u, 512u}) {
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<double> x(n);
      for (double& v : x) v = rng.uniform(-1.0, 1.0);
      const std::vector<double> expect = naive_dct2(x);
      const std::vector<double> got = dct2(x);
      double scale = 1e-30;
      for (double v : expect) scale = std::max(scale, std::abs(v));
      for (std::size_t k = 0; k < n; ++k) {
        require(std::abs(expect[k] - got[k]) / scale < 1e-9,
                "N=" + std::to_string(n) + " k=" + std::to_string(k) + " diverges: " +
                    fmt(got[k]) + " vs oracle " + fmt(expect[k]));
      }
    }
  }
}

// 2. idct2(dct2(x)) recovers x; matrix variants likewise.
void criterion_round_trip() {
  Rng rng(2771);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> x(512);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    const std::vector<double> back = idct2(dct2(x));
    for (std::size_t i = 0; i < x.size(); ++i) {
      require(std::abs(back[i] - x[i]) < 1e-10, "sequence round trip error at " +
                                                    std::to_string(i) + ": " +
                                                    fmt(std::abs(back[i] - x[i])));
    }
  }
  Matrix emb(512, 8);
  for (std::size_t i = 0; i < emb.size(); ++i) emb.data()[i] = rng.uniform(-1.0, 1.0);
  const Matrix back = idct2_matrix(dct2_matrix(emb));
  for (std::size_t i = 0; i < emb.size(); ++i) {
    require(std::abs(back.data()[i] - emb.data()[i]) < 1e-10, "matrix round trip error");
  }
}

// 3. Analytic gradients for gamma, W, b match central finite differences on
//    20 instances spanning n < M, n = M, n > M.
void criterion_gradients() {
  Rng rng(7308);
  const double h = 1e-5;
  int instance = 0;
  for (int rep = 0; rep < 20; ++rep) {
    // Cycle the length regime: below, at, and above the filter length.
    const std::size_t m = 6 + static_cast<std::size_t>(rng.bounded(6));  // 6..11
    std::size_t n = 0;
    switch (rep % 3) {
      case 0: n = 2 + static_cast<std::size_t>(rng.bounded(m - 2)); break;  // n < M
      case 1: n = m; break;
      case 2: n = m + 1 + static_cast<std::size_t>(rng.bounded(6)); break;  // n > M
    }
    const std::size_t e_dim = 3 + static_cast<std::size_t>(rng.bounded(4));
    const std::size_t c_count = 2 + static_cast<std::size_t>(rng.bounded(3));

    ProbeModel model = make_auto_model(m, e_dim, c_count);
    for (std::size_t i = 0; i < model.probe.weight.size(); ++i) {
      model.probe.weight.data()[i] = 0.5 * rng.normal();
    }
    for (double& b : model.probe.bias) b = 0.2 * rng.normal();
    for (double& r : model.filter->raw) r = 0.7 * rng.normal();

    EmbeddingSequence seq;
    seq.values = Matrix(n, e_dim);
    for (std::size_t i = 0; i < seq.values.size(); ++i) seq.values.data()[i] = rng.normal();
    seq.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      seq.labels[i] = static_cast<std::uint16_t>(rng.bounded(c_count));
    }
    seq.ignore.assign(n, 0);

    const LossAndGrads lg = loss_and_grads(model, seq);
    double worst = 0.0;
    double scale = 0.0;
    auto fd_check = [&](double* param, double analytic) {
      const double saved = *param;
      *param = saved + h;
      const double plus = loss_and_grads(model, seq).loss;
      *param = saved - h;
      const double minus = loss_and_grads(model, seq).loss;
      *param = saved;
      const double fd = (plus - minus) / (2.0 * h);
      worst = std::max(worst, std::abs(analytic - fd));
      scale = std::max(scale, std::abs(fd));
    };
    for (std::size_t i = 0; i < model.probe.weight.size(); ++i) {
      fd_check(model.probe.weight.data() + i, lg.grads.weight.data()[i]);
    }
    for (std::size_t c = 0; c < c_count; ++c) {
      fd_check(&model.probe.bias[c], lg.grads.bias[c]);
    }
    for (std::size_t k = 0; k < m; ++k) {
      fd_check(&model.filter->raw[k], lg.grads.filter_raw[k]);
    }
    ++instance;
    require(worst / std::max(scale, 1e-12) < 1e-4,
            "instance " + std::to_string(instance) + " (n=" + std::to_string(n) +
                ", M=" + std::to_string(m) + "): relative gradient error " +
                fmt(worst / std::max(scale, 1e-12)));
  }
}

// 4. The five bands partition [0,511]; the low band recovers a constant.
void criterion_fixed_bands() {
  std::vector<double> sum(512, 0.0);
  for (const auto& [name, band] : canonical_bands()) {
    const AppliedFilterWeights w = band_weights(band, 512);
    for (std::size_t k = 0; k < 512; ++k) sum[k] += w.values[k];
  }
  for (std::size_t k = 0; k < 512; ++k) {
    require(sum[k] == 1.0, "band weights at k=" + std::to_string(k) + " sum to " +
                               fmt(sum[k]) + ", not 1");
  }

  const std::size_t n = 512;
  const double constant = 1.25;
  Matrix emb(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double wave = std::cos(kPi / static_cast<double>(n) *
                                 (static_cast<double>(i) + 0.5) *
                                 static_cast<double>(n - 1));
    emb(i, 0) = constant + wave;
    emb(i, 1) = constant - 0.5 * wave;
  }
  const AppliedFilterWeights low = band_weights(named_band("low"), n);
  const Matrix filtered = idct2_matrix(apply_filter(dct2_matrix(emb), low));
  for (std::size_t i = 0; i < filtered.size(); ++i) {
    require(std::abs(filtered.data()[i] - constant) < 1e-9,
            "low-pass deviation " + fmt(std::abs(filtered.data()[i] - constant)));
  }
}

// 5. Low-frequency synthetic task: Auto beats Orig by >= 0.15 and stays within
//    0.02 of the fixed low band.
void criterion_low_task_accuracy() {
  const LowTaskResults& results = low_task_results();
  const double gap = results.auto_mean - results.orig_mean;
  std::printf("      orig %.4f | fixed-low %.4f | auto %.4f | gap %.4f\n",
              results.orig_mean, results.low_mean, results.auto_mean, gap);
  require(gap >= 0.15, "auto-orig gap " + fmt(gap) + " below 0.15");
  require(results.auto_mean >= results.low_mean - 0.02,
          "auto " + fmt(results.auto_mean) + " below fixed-low " + fmt(results.low_mean) +
              " - 0.02");
}

// 6. Band recovery on the learned profiles from criterion 5.
void criterion_band_recovery() {
  const LowTaskResults& results = low_task_results();
  const ProfileStats stats = average_profile(results.auto_profiles);
  const double low_mean = band_mean(stats.mean.weights, 0, 1);
  const double high_mean = band_mean(stats.mean.weights, 130, 511);
  std::printf("      profile means: signal band %.4f, noise band %.4f\n", low_mean,
              high_mean);
  require(low_mean >= 0.9, "signal-band weight " + fmt(low_mean) + " below 0.9");
  require(high_mean <= 0.1, "noise-band weight " + fmt(high_mean) + " above 0.1");
}

// 7. Token-level high-band carrier task: Auto matches the fixed high band and
//    the learned profile keeps the carrier band.
void criterion_high_task() {
  GenSpec spec;
  spec.seq_len = 512;
  spec.emb_dim = 16;
  spec.class_count = 2;
  spec.seq_count = 300;
  spec.signal_band = make_band(130, 511);
  spec.noise_band = make_band(0, 8);
  spec.snr = 0.5;  // distractor twice the carrier amplitude
  spec.task_kind = TaskKind::token;
  spec.task_name = "high-task";
  const Dataset train_set = gen_synthetic(spec, 9003);
  GenSpec val_spec = spec;
  val_spec.seq_count = 60;
  const Dataset val_set = gen_synthetic(val_spec, 9004);

  const TrainConfig cfg = experiment_config();
  const std::vector<std::uint64_t> seeds(kDefaultSeeds.begin(), kDefaultSeeds.end());
  const MultiSeedResult high = run_multiseed(
      make_fixed_band_model(named_band("high"), 16, 2), train_set, val_set, cfg, seeds);
  const MultiSeedResult learned =
      run_multiseed(make_auto_model(512, 16, 2), train_set, val_set, cfg, seeds);
  std::vector<SpectralProfile> profiles;
  for (const SeedOutcome& run : high.runs) require(run.ok, "high seed failed: " + run.error);
  for (const SeedOutcome& run : learned.runs) {
    require(run.ok, "auto seed failed: " + run.error);
    profiles.push_back(extract_profile(run.result.model, "high-task", "xx"));
  }
  const ProfileStats stats = average_profile(profiles);
  const double carrier_mean = band_mean(stats.mean.weights, 130, 511);
  std::printf("      fixed-high %.4f | auto %.4f | carrier-band weight %.4f\n",
              high.mean_accuracy, learned.mean_accuracy, carrier_mean);
  require(learned.mean_accuracy >= high.mean_accuracy - 0.02,
          "auto " + fmt(learned.mean_accuracy) + " below fixed-high " +
              fmt(high.mean_accuracy) + " - 0.02");
  require(carrier_mean >= 0.8, "carrier-band weight " + fmt(carrier_mean) + " below 0.8");
}

// 8. Overlap metric: symmetry, self-overlap, range, triangle inequality, and
//    the hand-computed case.
void criterion_overlap_metric() {
  Rng rng(8119);
  auto random_profile = [&rng]() {
    SpectralProfile p;
    p.weights.resize(64);
    for (double& w : p.weights) w = rng.uniform01();
    return p;
  };
  for (int rep = 0; rep < 1000; ++rep) {
    const SpectralProfile a = random_profile();
    const SpectralProfile b = random_profile();
    const SpectralProfile c = random_profile();
    const double ab = overlap(a, b);
    require(std::abs(ab - overlap(b, a)) <= 1e-9, "asymmetric overlap");
    require(overlap(a, a) == 100.0, "self-overlap is not 100");
    require(ab >= -1e-9 && ab <= 100.0 + 1e-9, "overlap out of range: " + fmt(ab));
    const double dab = 100.0 - ab;
    const double dbc = 100.0 - overlap(b, c);
    const double dac = 100.0 - overlap(a, c);
    require(dac <= dab + dbc + 1e-9, "triangle inequality violated");
  }
  SpectralProfile a;
  a.weights = {1.0, 0.5, 0.0};
  SpectralProfile b;
  b.weights = {1.0, 0.0, 0.0};
  const double got = overlap(a, b);
  require(std::abs(got - 83.33) <= 0.01 + 1e-9,
          "hand-computed case: " + fmt(got) + " not within 0.01 of 83.33");
}

// 9. The criterion-5 pipeline, run twice through the CLI with seed 1932,
//    produces bitwise-identical datasets, checkpoints, reports, and profile
//    CSVs.
void criterion_determinism() {
  const fs::path dir = g_work_dir / "determinism";
  fs::create_directories(dir);
  const std::string gen_flags =
      " --n 512 --e 16 --classes 3 --signal-band 0:1 --noise-band 130:511 --snr 1"
      " --task-kind sequence --task low-task --language xx";

  const std::string train_a = (dir / "train-a.sprb").string();
  const std::string train_b = (dir / "train-b.sprb").string();
  const std::string val_file = (dir / "val.sprb").string();
  require(run_cli("gen --out " + train_a + gen_flags + " --count 500 --seed 9001") == 0,
          "gen run 1 failed");
  require(run_cli("gen --out " + train_b + gen_flags + " --count 500 --seed 9001") == 0,
          "gen run 2 failed");
  require(slurp(train_a) == slurp(train_b), "gen output differs between runs");
  require(run_cli("gen --out " + val_file + gen_flags + " --count 100 --seed 9002") == 0,
          "gen of validation set failed");

  const std::string train_flags = "train --mode auto --train " + train_a + " --val " +
                                  val_file +
                                  " --seed 1932 --learning-rate 0.05";
  const std::string run_a = (dir / "run-a").string();
  const std::string run_b = (dir / "run-b").string();
  require(run_cli(train_flags + " --out " + run_a) == 0, "train run 1 failed");
  require(run_cli(train_flags + " --out " + run_b) == 0, "train run 2 failed");
  require(slurp(run_a + "/seed-1932.ckpt") == slurp(run_b + "/seed-1932.ckpt"),
          "checkpoints differ between runs");
  require(slurp(run_a + "/seed-1932.report.jsonl") == slurp(run_b + "/seed-1932.report.jsonl"),
          "reports differ between runs");
  require(slurp(run_a + "/summary.json") == slurp(run_b + "/summary.json"),
          "summaries differ between runs");

  const std::string prof_a = (dir / "prof-a").string();
  const std::string prof_b = (dir / "prof-b").string();
  require(run_cli("profile " + run_a + "/seed-1932.ckpt --out " + prof_a) == 0,
          "profile run 1 failed");
  require(run_cli("profile " + run_b + "/seed-1932.ckpt --out " + prof_b) == 0,
          "profile run 2 failed");
  require(slurp(prof_a + "/seed-1932.profile.csv") == slurp(prof_b + "/seed-1932.profile.csv"),
          "profile CSVs differ between runs");
}

// 10. Byte-exact container round trips; every strict prefix of a valid file
//     fails with a structured error.
void criterion_io_robustness() {
  const fs::path dir = g_work_dir / "io";
  fs::create_directories(dir);

  GenSpec spec;
  spec.seq_len = 6;
  spec.emb_dim = 3;
  spec.class_count = 2;
  spec.seq_count = 2;
  spec.signal_band = make_band(0, 1);
  spec.noise_band = make_band(3, 5);
  spec.snr = 2.0;
  const Dataset dataset = gen_synthetic(spec, 5);

  const std::string a = (dir / "a.sprb").string();
  const std::string b = (dir / "b.sprb").string();
  write_dataset(dataset, a);
  write_dataset(read_dataset(a), b);
  require(slurp(a) == slurp(b), "dataset round trip is not byte-exact");

  Checkpoint checkpoint;
  checkpoint.model = make_auto_model(8, 3, 2);
  Rng rng(3);
  for (double& r : checkpoint.model.filter->raw) r = rng.normal();
  const std::string ca = (dir / "a.ckpt").string();
  const std::string cb = (dir / "b.ckpt").string();
  save_checkpoint(checkpoint, ca);
  save_checkpoint(load_checkpoint(ca), cb);
  require(slurp(ca) == slurp(cb), "checkpoint round trip is not byte-exact");

  const std::string good = slurp(a);
  const std::string prefix_path = (dir / "prefix.sprb").string();
  for (std::size_t len = 0; len < good.size(); ++len) {
    {
      std::ofstream out(prefix_path, std::ios::binary | std::ios::trunc);
      out.write(good.data(), static_cast<std::streamsize>(len));
    }
    bool structured = false;
    try {
      (void)read_dataset(prefix_path);
    } catch (const ParseError&) {
      structured = true;
    } catch (const IoError&) {
      structured = true;
    } catch (const std::exception& e) {
      require(false, "prefix " + std::to_string(len) + " raised an unstructured error: " +
                         e.what());
    }
    require(structured, "prefix " + std::to_string(len) + " was accepted");
  }
}

struct Criterion {
  int id;
  const char* title;
  void (*body)();
  double time_limit_seconds;  // 0 = unbounded
};

const Criterion kCriteria[] = {
    {1, "DCT oracle equivalence (rel err < 1e-9)", criterion_dct_oracle, 10.0},
    {2, "round trip (max err < 1e-10)", criterion_round_trip, 5.0},
    {3, "gradients vs finite differences (rel err < 1e-4)", criterion_gradients, 30.0},
    {4, "fixed-band partition and low-pass recovery", criterion_fixed_bands, 0.0},
    {5, "low-frequency task: auto vs orig vs fixed-low", criterion_low_task_accuracy, 600.0},
    {6, "band recovery in the learned profile", criterion_band_recovery, 0.0},
    {7, "token task: auto vs fixed-high, carrier recovery", criterion_high_task, 600.0},
    {8, "overlap metric properties", criterion_overlap_metric, 0.0},
    {9, "bitwise determinism of the seeded pipeline", criterion_determinism, 0.0},
    {10, "I/O round trips and truncation robustness", criterion_io_robustness, 0.0},
};

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-spectral-cli>\n", argv[0]);
    return 64;
  }
  g_cli_path = argv[1];
  g_work_dir = fs::temp_directory_path() / ("spectral-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(g_work_dir);
  fs::create_directories(g_work_dir);

  int failures = 0;
  for (const Criterion& criterion : kCriteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      criterion.body();
    } catch (const CheckFailure& f) {
      error = f.message;
    } catch (const std::exception& e) {
      error = std::string("unexpected exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (error.empty() && criterion.time_limit_seconds > 0.0 &&
        seconds > criterion.time_limit_seconds) {
      error = "exceeded the " + fmt(criterion.time_limit_seconds) + "s runtime bound (" +
              fmt(seconds) + "s)";
    }
    if (error.empty()) {
      std::printf("[PASS] criterion %2d: %s (%.1fs)\n", criterion.id, criterion.title,
                  seconds);
    } else {
      ++failures;
      std::printf("[FAIL] criterion %2d: %s (%.1fs)\n       %s\n", criterion.id,
                  criterion.title, seconds, error.c_str());
    }
    std::fflush(stdout);
  }

  std::error_code ec;
  fs::remove_all(g_work_dir, ec);
  if (failures == 0) {
    std::printf("all %zu criteria passed\n", std::size(kCriteria));
  } else {
    std::printf("%d criteria FAILED\n", failures);
  }
  return failures;
}
