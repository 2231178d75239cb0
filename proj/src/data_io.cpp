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

#include "spectral/data_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

#include <json.hpp>

#include "spectral/dct.hpp"
#include "spectral/errors.hpp"
#include "spectral/rng.hpp"

namespace spectral {
namespace {

constexpr char kDatasetMagic[8] = {'S', 'P', 'R', 'B', '0', '0', '0', '1'};
constexpr char kCheckpointMagic[8] = {'S', 'P', 'C', 'K', '0', '0', '0', '1'};
constexpr std::uint32_t kDatasetVersion = 1;
constexpr std::uint32_t kCheckpointVersion = 1;
constexpr std::size_t kMaxLabelClasses = 65535;  // labels are stored as u16

// ---------------------------------------------------------------------------
// Little-endian buffer writer / bounds-checked reader.

class Writer {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(const void* data, std::size_t n) {
    const char* p = static_cast<const char*>(data);
    buf_.insert(buf_.end(), p, p + n);
  }

  const std::string& str() const { return buf_; }

 private:
  std::string buf_;
};

class Cursor {
 public:
  explicit Cursor(const std::string& data) : data_(data) {}

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }

  void need(std::uint64_t n, const char* what) {
    if (n > remaining()) {
      throw ParseError(std::string("truncated payload reading ") + what, pos_);
    }
  }

  std::uint8_t u8(const char* what) {
    need(1, what);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint16_t u16(const char* what) {
    need(2, what);
    std::uint16_t v = 0;
    for (int i = 0; i < 2; ++i) v |= static_cast<std::uint16_t>(byte(pos_ + i)) << (8 * i);
    pos_ += 2;
    return v;
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(byte(pos_ + i)) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(byte(pos_ + i)) << (8 * i);
    pos_ += 8;
    return v;
  }
  float f32(const char* what) { return std::bit_cast<float>(u32(what)); }
  double f64(const char* what) { return std::bit_cast<double>(u64(what)); }

  std::string raw(std::uint64_t n, const char* what) {
    need(n, what);
    std::string out = data_.substr(pos_, n);
    pos_ += static_cast<std::size_t>(n);
    return out;
  }

 private:
  std::uint8_t byte(std::size_t i) const { return static_cast<std::uint8_t>(data_[i]); }

  const std::string& data_;
  std::size_t pos_ = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file", path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading file", path);
  return data;
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open file for writing", path);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.flush();
  if (!out) throw IoError("failed writing file", path);
}

// ---------------------------------------------------------------------------
// TrainConfig <-> JSON

nlohmann::json config_to_json(const TrainConfig& cfg) {
  return nlohmann::json{
      {"learning_rate", cfg.learning_rate},
      {"plateau_decay", cfg.plateau_decay},
      {"batch_size", cfg.batch_size},
      {"max_epochs", cfg.max_epochs},
      {"early_stop_patience", cfg.early_stop_patience},
      {"plateau_patience", cfg.plateau_patience},
      {"plateau_min_delta", cfg.plateau_min_delta},
      {"seed", cfg.seed},
      {"adam_beta1", cfg.adam_beta1},
      {"adam_beta2", cfg.adam_beta2},
      {"adam_eps", cfg.adam_eps},
  };
}

TrainConfig config_from_json(const nlohmann::json& j) {
  TrainConfig cfg;
  cfg.learning_rate = j.at("learning_rate").get<double>();
  cfg.plateau_decay = j.at("plateau_decay").get<double>();
  cfg.batch_size = j.at("batch_size").get<std::size_t>();
  cfg.max_epochs = j.at("max_epochs").get<std::size_t>();
  cfg.early_stop_patience = j.at("early_stop_patience").get<std::size_t>();
  cfg.plateau_patience = j.at("plateau_patience").get<std::size_t>();
  cfg.plateau_min_delta = j.at("plateau_min_delta").get<double>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.adam_beta1 = j.at("adam_beta1").get<double>();
  cfg.adam_beta2 = j.at("adam_beta2").get<double>();
  cfg.adam_eps = j.at("adam_eps").get<double>();
  return cfg;
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / 1.4142135623730951); }

// Seed for the class geometry of a synthetic task. Derived from the
// structural fields only, so datasets generated from the same spec with
// different seeds describe the same task and differ only in sampling.
std::uint64_t structure_seed(const GenSpec& spec) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t value) {
    h ^= value + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  mix(spec.seq_len);
  mix(spec.emb_dim);
  mix(spec.class_count);
  mix(spec.signal_band.lo);
  mix(spec.signal_band.hi);
  mix(spec.noise_band.lo);
  mix(spec.noise_band.hi);
  mix(static_cast<std::uint64_t>(spec.task_kind));
  return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// Dataset container

void write_dataset(const Dataset& dataset, const std::string& path) {
  validate_dataset(dataset);
  if (dataset.class_count > kMaxLabelClasses) {
    throw ValidationError("class count " + std::to_string(dataset.class_count) +
                          " exceeds the u16 label cap of 65535");
  }
  Writer w;
  w.bytes(kDatasetMagic, sizeof(kDatasetMagic));
  w.u32(kDatasetVersion);
  w.u32(static_cast<std::uint32_t>(dataset.emb_dim));
  w.u32(static_cast<std::uint32_t>(dataset.class_count));
  w.u32(static_cast<std::uint32_t>(dataset.task_kind));
  w.u64(dataset.sequences.size());
  for (const EmbeddingSequence& seq : dataset.sequences) {
    w.u64(seq.id);
    w.u32(static_cast<std::uint32_t>(seq.length()));
    for (std::size_t i = 0; i < seq.values.size(); ++i) {
      w.f32(static_cast<float>(seq.values.data()[i]));
    }
    for (std::uint16_t label : seq.labels) w.u16(label);
    for (std::uint8_t flag : seq.ignore) w.u8(flag ? 1 : 0);
  }
  const nlohmann::json meta = {{"task", dataset.task_name}, {"language", dataset.language}};
  const std::string meta_text = meta.dump();
  w.u64(meta_text.size());
  w.bytes(meta_text.data(), meta_text.size());
  write_file(path, w.str());
}

Dataset read_dataset(const std::string& path) {
  const std::string data = read_file(path);
  Cursor cur(data);

  const std::string magic = cur.raw(sizeof(kDatasetMagic), "magic");
  if (std::memcmp(magic.data(), kDatasetMagic, sizeof(kDatasetMagic)) != 0) {
    throw ParseError("bad magic (expected SPRB0001)", 0);
  }
  const std::uint32_t version = cur.u32("version");
  if (version != kDatasetVersion) {
    throw ParseError("unsupported dataset version " + std::to_string(version),
                     cur.pos() - 4);
  }
  Dataset dataset;
  dataset.emb_dim = cur.u32("embedding width");
  dataset.class_count = cur.u32("class count");
  if (dataset.emb_dim == 0) throw ParseError("embedding width must be >= 1", cur.pos() - 8);
  if (dataset.class_count < 2 || dataset.class_count > kMaxLabelClasses) {
    throw ParseError("class count must lie in [2, 65535]", cur.pos() - 4);
  }
  const std::uint32_t kind = cur.u32("task kind");
  if (kind > 1) throw ParseError("task kind must be 0 (token) or 1 (sequence)", cur.pos() - 4);
  dataset.task_kind = static_cast<TaskKind>(kind);
  const std::uint64_t seq_count = cur.u64("sequence count");

  dataset.sequences.reserve(static_cast<std::size_t>(
      std::min<std::uint64_t>(seq_count, data.size() / 16 + 1)));
  for (std::uint64_t s = 0; s < seq_count; ++s) {
    EmbeddingSequence seq;
    seq.id = cur.u64("sequence id");
    const std::uint32_t n = cur.u32("sequence length");
    if (n == 0) throw ParseError("sequence length must be >= 1", cur.pos() - 4);
    cur.need(static_cast<std::uint64_t>(n) * dataset.emb_dim * 4, "embedding values");
    seq.values = Matrix(n, dataset.emb_dim);
    for (std::size_t i = 0; i < seq.values.size(); ++i) {
      const std::size_t value_pos = cur.pos();
      const float v = cur.f32("embedding value");
      if (!std::isfinite(v)) throw ParseError("non-finite embedding value", value_pos);
      seq.values.data()[i] = static_cast<double>(v);
    }
    seq.labels.resize(n);
    const std::size_t labels_pos = cur.pos();
    for (std::uint32_t i = 0; i < n; ++i) seq.labels[i] = cur.u16("label");
    seq.ignore.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::uint8_t flag = cur.u8("ignore flag");
      if (flag > 1) throw ParseError("ignore flag must be 0 or 1", cur.pos() - 1);
      seq.ignore[i] = flag;
    }
    for (std::uint32_t i = 0; i < n; ++i) {
      if (!seq.ignore[i] && seq.labels[i] >= dataset.class_count) {
        throw ParseError("label " + std::to_string(seq.labels[i]) + " is >= class count " +
                             std::to_string(dataset.class_count),
                         labels_pos + 2 * i);
      }
    }
    dataset.sequences.push_back(std::move(seq));
  }

  const std::size_t meta_len_pos = cur.pos();
  const std::uint64_t meta_len = cur.u64("metadata length");
  const std::string meta_text = cur.raw(meta_len, "metadata");
  nlohmann::json meta = nlohmann::json::parse(meta_text, nullptr, false);
  if (meta.is_discarded() || !meta.is_object()) {
    throw ParseError("metadata is not a JSON object", meta_len_pos + 8);
  }
  dataset.task_name = meta.value("task", "");
  dataset.language = meta.value("language", "");
  if (cur.remaining() != 0) {
    throw ParseError("trailing bytes after metadata", cur.pos());
  }
  validate_dataset(dataset);
  return dataset;
}

// ---------------------------------------------------------------------------
// JSONL import

Dataset import_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file", path);

  Dataset dataset;
  bool have_meta = false;
  std::size_t meta_e = 0;
  std::size_t meta_c = 0;
  std::string line;
  std::size_t line_start = 0;
  std::size_t line_no = 0;
  std::uint16_t max_label = 0;
  bool all_constant = true;

  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t record_pos = line_start;
    line_start += line.size() + 1;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      throw ParseError("line " + std::to_string(line_no) + " is not a JSON object",
                       record_pos);
    }
    auto fail = [&](const std::string& message) -> ParseError {
      return ParseError("line " + std::to_string(line_no) + ": " + message, record_pos);
    };

    try {
      if (record.contains("meta")) {
        if (line_no != 1) throw fail("meta record must be the first line");
        const nlohmann::json& meta = record["meta"];
        have_meta = true;
        meta_e = meta.value("e", std::size_t{0});
        meta_c = meta.value("c", std::size_t{0});
        if (meta.contains("task_kind")) {
          dataset.task_kind = task_kind_from_name(meta["task_kind"].get<std::string>());
        }
        dataset.task_name = meta.value("task", "");
        dataset.language = meta.value("language", "");
        continue;
      }

      EmbeddingSequence seq;
      seq.id = record.value("id", static_cast<std::uint64_t>(dataset.sequences.size()));
      if (!record.contains("values") || !record["values"].is_array() ||
          record["values"].empty()) {
        throw fail("missing 'values' rows");
      }
      const auto& rows = record["values"];
      const std::size_t n = rows.size();
      const std::size_t e_dim = rows[0].is_array() ? rows[0].size() : 0;
      if (e_dim == 0) throw fail("empty embedding row");
      seq.values = Matrix(n, e_dim);
      for (std::size_t i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != e_dim) {
          throw fail("ragged 'values' rows");
        }
        for (std::size_t j = 0; j < e_dim; ++j) {
          if (!rows[i][j].is_number()) throw fail("non-numeric value");
          const double v =
              static_cast<double>(static_cast<float>(rows[i][j].get<double>()));
          if (!std::isfinite(v)) throw fail("non-finite value");
          seq.values(i, j) = v;
        }
      }
      if (!record.contains("labels") || !record["labels"].is_array() ||
          record["labels"].size() != n) {
        throw fail("'labels' must have length N");
      }
      seq.labels.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t label = record["labels"][i].get<std::int64_t>();
        if (label < 0 || label > static_cast<std::int64_t>(kMaxLabelClasses)) {
          throw fail("label out of u16 range");
        }
        seq.labels[i] = static_cast<std::uint16_t>(label);
        max_label = std::max(max_label, seq.labels[i]);
      }
      if (record.contains("ignore")) {
        if (!record["ignore"].is_array() || record["ignore"].size() != n) {
          throw fail("'ignore' must have length N");
        }
        seq.ignore.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
          seq.ignore[i] = record["ignore"][i].get<bool>() ? 1 : 0;
        }
      } else {
        seq.ignore.assign(n, 0);
      }
      for (std::size_t i = 1; i < n; ++i) {
        if (seq.labels[i] != seq.labels[0]) {
          all_constant = false;
          break;
        }
      }
      dataset.sequences.push_back(std::move(seq));
    } catch (const nlohmann::json::exception& e) {
      throw fail(e.what());
    }
  }

  if (dataset.sequences.empty()) {
    throw ParseError("no sequence records found", 0);
  }
  dataset.emb_dim = have_meta && meta_e > 0 ? meta_e : dataset.sequences[0].emb_dim();
  dataset.class_count = have_meta && meta_c > 0
                            ? meta_c
                            : std::max<std::size_t>(2, static_cast<std::size_t>(max_label) + 1);
  if (!have_meta) {
    dataset.task_kind = all_constant ? TaskKind::sequence : TaskKind::token;
  }
  validate_dataset(dataset);
  return dataset;
}

// ---------------------------------------------------------------------------
// Synthetic generator

Dataset gen_synthetic(const GenSpec& spec, std::uint64_t seed) {
  if (spec.seq_len == 0) throw ValidationError("gen: sequence length must be >= 1");
  if (spec.emb_dim == 0) throw ValidationError("gen: embedding width must be >= 1");
  if (spec.class_count < 2 || spec.class_count > kMaxLabelClasses) {
    throw ValidationError("gen: class count must lie in [2, 65535]");
  }
  if (spec.seq_count == 0) throw ValidationError("gen: sequence count must be >= 1");
  if (spec.signal_band.lo > spec.signal_band.hi || spec.noise_band.lo > spec.noise_band.hi) {
    throw ValidationError("gen: band lower index exceeds upper index");
  }
  if (spec.signal_band.hi >= spec.seq_len || spec.noise_band.hi >= spec.seq_len) {
    throw ValidationError("gen: band exceeds the spectrum of length-" +
                          std::to_string(spec.seq_len) + " sequences");
  }
  if (spec.signal_band.lo <= spec.noise_band.hi && spec.noise_band.lo <= spec.signal_band.hi) {
    throw ValidationError("gen: signal and noise bands overlap");
  }
  if (!(spec.snr > 0.0)) throw ValidationError("gen: snr must be > 0");

  const std::size_t n = spec.seq_len;
  const std::size_t e_dim = spec.emb_dim;
  const std::size_t band_width = spec.signal_band.width();
  // All non-class variation scales with 1/snr: band noise of unit base
  // amplitude and, for sequence tasks, within-class jitter of base amplitude
  // 2 on the signal band. snr = inf plants class-pure sequences.
  const double noise_amp = 1.0 / spec.snr;
  const double class_jitter = 2.0 / spec.snr;

  Rng rng(seed);
  Rng structure_rng(structure_seed(spec));
  Dataset dataset;
  dataset.emb_dim = e_dim;
  dataset.class_count = spec.class_count;
  dataset.task_kind = spec.task_kind;
  dataset.task_name = spec.task_name;
  dataset.language = spec.language;
  dataset.sequences.reserve(spec.seq_count);

  auto fill_noise = [&](Matrix& coeff) {
    for (std::size_t k = spec.noise_band.lo; k <= spec.noise_band.hi; ++k) {
      double* row = coeff.row(k);
      for (std::size_t e = 0; e < e_dim; ++e) row[e] = noise_amp * rng.normal();
    }
  };

  auto round_f32 = [](Matrix& m) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      m.data()[i] = static_cast<double>(static_cast<float>(m.data()[i]));
    }
  };

  if (spec.task_kind == TaskKind::sequence) {
    // Class-specific directions over the signal band (task geometry).
    std::vector<Matrix> directions(spec.class_count);
    for (std::size_t y = 0; y < spec.class_count; ++y) {
      directions[y] = Matrix(band_width, e_dim);
      for (std::size_t k = 0; k < band_width; ++k) {
        for (std::size_t e = 0; e < e_dim; ++e) directions[y](k, e) = structure_rng.normal();
      }
    }
    // Sequence-level sequences emulate encoder dumps of padded inputs: the
    // content occupies the first L <= N/2 positions and the tail is
    // ignore-masked. The low waves of the signal band then keep one sign over
    // the counted region, so they carry class evidence at every counted
    // position instead of averaging out across the sequence.
    const std::size_t min_content = std::max<std::size_t>(1, n / 4);
    const std::size_t max_content = std::max<std::size_t>(1, n / 2);
    for (std::size_t s = 0; s < spec.seq_count; ++s) {
      const std::size_t y = static_cast<std::size_t>(rng.bounded(spec.class_count));
      const std::size_t content_len =
          min_content +
          static_cast<std::size_t>(rng.bounded(max_content - min_content + 1));
      Matrix coeff(n, e_dim);
      for (std::size_t k = 0; k < band_width; ++k) {
        double* row = coeff.row(spec.signal_band.lo + k);
        for (std::size_t e = 0; e < e_dim; ++e) {
          row[e] = directions[y](k, e) + class_jitter * rng.normal();
        }
      }
      fill_noise(coeff);
      EmbeddingSequence seq;
      seq.id = s;
      seq.values = idct2_matrix(coeff);
      round_f32(seq.values);
      seq.labels.assign(n, static_cast<std::uint16_t>(y));
      seq.ignore.assign(n, 0);
      for (std::size_t i = content_len; i < n; ++i) seq.ignore[i] = 1;
      dataset.sequences.push_back(std::move(seq));
    }
  } else {
    // Token task: a per-sequence carrier in the signal band drives the
    // labels; one shared direction (task geometry) maps it into embedding
    // space.
    std::vector<double> direction(e_dim);
    for (std::size_t e = 0; e < e_dim; ++e) direction[e] = structure_rng.normal();

    const auto basis = dct_basis(n);
    std::vector<double> sigma_t(n, 0.0);
    for (std::size_t k = spec.signal_band.lo; k <= spec.signal_band.hi; ++k) {
      const double* row = basis->row(k);
      for (std::size_t i = 0; i < n; ++i) sigma_t[i] += row[i] * row[i];
    }
    for (double& v : sigma_t) v = std::sqrt(v);

    for (std::size_t s = 0; s < spec.seq_count; ++s) {
      std::vector<double> carrier(n, 0.0);
      for (std::size_t k = spec.signal_band.lo; k <= spec.signal_band.hi; ++k) {
        carrier[k] = rng.normal();
      }
      Matrix coeff(n, e_dim);
      for (std::size_t k = spec.signal_band.lo; k <= spec.signal_band.hi; ++k) {
        double* row = coeff.row(k);
        for (std::size_t e = 0; e < e_dim; ++e) row[e] = carrier[k] * direction[e];
      }
      fill_noise(coeff);
      const std::vector<double> trace = idct2(carrier);
      EmbeddingSequence seq;
      seq.id = s;
      seq.values = idct2_matrix(coeff);
      round_f32(seq.values);
      seq.labels.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double u = sigma_t[i] > 0.0 ? norm_cdf(trace[i] / sigma_t[i]) : 0.5;
        const auto bin = static_cast<std::size_t>(u * static_cast<double>(spec.class_count));
        seq.labels[i] = static_cast<std::uint16_t>(std::min(bin, spec.class_count - 1));
      }
      seq.ignore.assign(n, 0);
      dataset.sequences.push_back(std::move(seq));
    }
  }
  validate_dataset(dataset);
  return dataset;
}

// ---------------------------------------------------------------------------
// Checkpoints

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
  validate_model(checkpoint.model);
  const ProbeModel& model = checkpoint.model;
  Writer w;
  w.bytes(kCheckpointMagic, sizeof(kCheckpointMagic));
  w.u32(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(model.mode));
  w.u32(model.band ? static_cast<std::uint32_t>(model.band->lo) : 0);
  w.u32(model.band ? static_cast<std::uint32_t>(model.band->hi) : 0);
  w.u64(model.filter ? model.filter->length() : 0);
  w.u64(model.emb_dim());
  w.u64(model.class_count());
  if (model.filter) {
    for (double raw : model.filter->raw) w.f64(raw);
  }
  for (std::size_t i = 0; i < model.probe.weight.size(); ++i) {
    w.f64(model.probe.weight.data()[i]);
  }
  for (double b : model.probe.bias) w.f64(b);
  const std::string cfg_text = config_to_json(checkpoint.config).dump();
  w.u64(cfg_text.size());
  w.bytes(cfg_text.data(), cfg_text.size());
  const std::string meta_text = nlohmann::json(checkpoint.metadata).dump();
  w.u64(meta_text.size());
  w.bytes(meta_text.data(), meta_text.size());
  write_file(path, w.str());
}

Checkpoint load_checkpoint(const std::string& path) {
  const std::string data = read_file(path);
  Cursor cur(data);

  const std::string magic = cur.raw(sizeof(kCheckpointMagic), "magic");
  if (std::memcmp(magic.data(), kCheckpointMagic, sizeof(kCheckpointMagic)) != 0) {
    throw ParseError("bad magic (expected SPCK0001)", 0);
  }
  const std::uint32_t version = cur.u32("version");
  if (version != kCheckpointVersion) {
    throw ParseError("unsupported checkpoint version " + std::to_string(version),
                     cur.pos() - 4);
  }
  const std::uint32_t mode_value = cur.u32("mode");
  if (mode_value > 2) throw ParseError("unknown probe mode", cur.pos() - 4);
  const auto mode = static_cast<ProbeMode>(mode_value);
  const std::uint32_t band_lo = cur.u32("band lo");
  const std::uint32_t band_hi = cur.u32("band hi");
  const std::uint64_t filter_len = cur.u64("filter length");
  const std::uint64_t e_dim = cur.u64("embedding width");
  const std::uint64_t c_count = cur.u64("class count");
  if (e_dim == 0 || c_count < 2) {
    throw ParseError("invalid probe dimensions", cur.pos() - 16);
  }
  if (mode == ProbeMode::auto_filter && filter_len == 0) {
    throw ParseError("auto mode requires a filter length >= 1", cur.pos() - 24);
  }

  Checkpoint checkpoint;
  ProbeModel& model = checkpoint.model;
  model.mode = mode;
  if (mode == ProbeMode::fixed_band) {
    if (band_lo > band_hi) throw ParseError("band lower index exceeds upper index", 16);
    model.band = FilterBand{band_lo, band_hi};
  }
  if (mode == ProbeMode::auto_filter) {
    cur.need(filter_len * 8, "filter logits");
    model.filter = SpectralFilter::zeros(static_cast<std::size_t>(filter_len));
    for (std::uint64_t k = 0; k < filter_len; ++k) {
      model.filter->raw[k] = cur.f64("filter logit");
    }
  }
  cur.need(e_dim * c_count * 8, "probe weight");
  model.probe.weight = Matrix(static_cast<std::size_t>(e_dim),
                              static_cast<std::size_t>(c_count));
  for (std::size_t i = 0; i < model.probe.weight.size(); ++i) {
    model.probe.weight.data()[i] = cur.f64("probe weight");
  }
  model.probe.bias.resize(static_cast<std::size_t>(c_count));
  for (std::size_t c = 0; c < model.probe.bias.size(); ++c) {
    model.probe.bias[c] = cur.f64("probe bias");
  }

  const std::size_t cfg_pos = cur.pos();
  const std::uint64_t cfg_len = cur.u64("config length");
  const std::string cfg_text = cur.raw(cfg_len, "config");
  nlohmann::json cfg_json = nlohmann::json::parse(cfg_text, nullptr, false);
  if (cfg_json.is_discarded() || !cfg_json.is_object()) {
    throw ParseError("config is not a JSON object", cfg_pos + 8);
  }
  try {
    checkpoint.config = config_from_json(cfg_json);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad config payload: ") + e.what(), cfg_pos + 8);
  }

  const std::size_t meta_pos = cur.pos();
  const std::uint64_t meta_len = cur.u64("metadata length");
  const std::string meta_text = cur.raw(meta_len, "metadata");
  nlohmann::json meta = nlohmann::json::parse(meta_text, nullptr, false);
  if (meta.is_discarded() || !meta.is_object()) {
    throw ParseError("metadata is not a JSON object", meta_pos + 8);
  }
  for (const auto& [key, value] : meta.items()) {
    if (!value.is_string()) {
      throw ParseError("metadata values must be strings", meta_pos + 8);
    }
    checkpoint.metadata[key] = value.get<std::string>();
  }
  if (cur.remaining() != 0) {
    throw ParseError("trailing bytes after metadata", cur.pos());
  }
  try {
    validate_model(model);
  } catch (const ValidationError& e) {
    throw ParseError(std::string("corrupt model payload: ") + e.what(), 0);
  }
  return checkpoint;
}

}  // namespace spectral
