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

#pragma once

#include <string>
#include <vector>

#include "spectral/matrix.hpp"
#include "spectral/probe.hpp"

namespace spectral {

/// A frozen, sigmoid-scaled frequency weighting at canonical length M:
/// the exportable descriptor of what a trained auto filter learned.
struct SpectralProfile {
  std::vector<double> weights;  // length M, entries in [0, 1]
  std::string task;
  std::string language;

  std::size_t length() const noexcept { return weights.size(); }
  std::string label() const {
    return language.empty() ? task : task + ":" + language;
  }
};

/// Symmetric matrix of pairwise overlap percentages; diagonal is exactly 100.
struct OverlapMatrix {
  std::vector<std::string> labels;
  Matrix values;
};

/// sigmoid(raw) of an auto-mode model. Orig and fixed-band models carry no
/// learned profile and are rejected.
SpectralProfile extract_profile(const ProbeModel& model, std::string task,
                                std::string language);

/// 100 * (1 - ||a - b||_1 / M): 100 means identical filters, 0 maximally
/// distant. 100 minus this value is a metric (scaled L1) on [0,1]^M.
double overlap(const SpectralProfile& a, const SpectralProfile& b);

OverlapMatrix overlap_matrix(const std::vector<SpectralProfile>& profiles);

/// Integer rounding used for display only; raw values stay in all exports.
long display_rounded(double percentage);

struct ProfileStats {
  SpectralProfile mean;
  std::vector<double> lower;
  std::vector<double> upper;
};

/// Per-frequency mean with min/max envelope across the inputs.
ProfileStats average_profile(const std::vector<SpectralProfile>& profiles);

// CSV exports carry 9 significant digits. Profile CSV: one "index,weight"
// line per frequency. Stats CSV: "index,mean,lower,upper". Matrix CSV: header
// row/column of labels. SVG renderings are self-contained (no external
// references).
void export_profile_csv(const SpectralProfile& profile, const std::string& path);
void export_profile_stats_csv(const ProfileStats& stats, const std::string& path);
void export_matrix_csv(const OverlapMatrix& matrix, const std::string& path);
void export_profile_svg(const SpectralProfile& profile, const std::string& path);
void export_profile_stats_svg(const ProfileStats& stats, const std::string& path);
void export_matrix_svg(const OverlapMatrix& matrix, const std::string& path);

}  // namespace spectral
