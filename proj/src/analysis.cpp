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

#include "spectral/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "spectral/errors.hpp"
#include "spectral/filters.hpp"

namespace spectral {
namespace {

std::string fmt9(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

void require_same_length(const SpectralProfile& a, const SpectralProfile& b) {
  if (a.length() != b.length()) {
    throw ValidationError("profile lengths differ: " + std::to_string(a.length()) +
                          " vs " + std::to_string(b.length()));
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing", path);
  return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("failed writing file", path);
}

std::string csv_safe(const std::string& label) {
  std::string safe = label;
  for (char& c : safe) {
    if (c == ',' || c == '"' || c == '\n' || c == '\r') c = '_';
  }
  return safe;
}

std::string xml_escape(const std::string& text) {
  std::string escaped;
  escaped.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&':
        escaped += "&amp;";
        break;
      case '<':
        escaped += "&lt;";
        break;
      case '>':
        escaped += "&gt;";
        break;
      case '"':
        escaped += "&quot;";
        break;
      default:
        escaped += c;
    }
  }
  return escaped;
}

// Shared frame for the line plots: x spans the frequency axis, y spans [0, 1].
struct PlotFrame {
  static constexpr double width = 640.0;
  static constexpr double height = 260.0;
  static constexpr double left = 46.0;
  static constexpr double right = 620.0;
  static constexpr double top = 16.0;
  static constexpr double bottom = 232.0;

  std::size_t points;

  double x(std::size_t k) const {
    if (points <= 1) return (left + right) / 2.0;
    return left + (right - left) * static_cast<double>(k) /
                      static_cast<double>(points - 1);
  }
  double y(double weight) const { return bottom - (bottom - top) * weight; }
};

std::string polyline_points(const PlotFrame& frame, const std::vector<double>& weights) {
  std::string points;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!points.empty()) points += " ";
    points += fmt9(frame.x(k)) + "," + fmt9(frame.y(weights[k]));
  }
  return points;
}

void write_plot_header(std::ofstream& out, const std::string& title) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << PlotFrame::width
      << "\" height=\"" << PlotFrame::height << "\" viewBox=\"0 0 " << PlotFrame::width
      << " " << PlotFrame::height << "\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  out << "  <text x=\"" << (PlotFrame::left + 4) << "\" y=\"12\" font-family=\"monospace\" "
      << "font-size=\"11\">" << xml_escape(title) << "</text>\n";
}

void write_plot_axes(std::ofstream& out, std::size_t points) {
  const PlotFrame frame{points};
  out << "  <line x1=\"" << PlotFrame::left << "\" y1=\"" << PlotFrame::top << "\" x2=\""
      << PlotFrame::left << "\" y2=\"" << PlotFrame::bottom
      << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
  out << "  <line x1=\"" << PlotFrame::left << "\" y1=\"" << PlotFrame::bottom
      << "\" x2=\"" << PlotFrame::right << "\" y2=\"" << PlotFrame::bottom
      << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
  out << "  <text x=\"4\" y=\"" << (PlotFrame::top + 4)
      << "\" font-family=\"monospace\" font-size=\"10\">1.0</text>\n";
  out << "  <text x=\"4\" y=\"" << PlotFrame::bottom
      << "\" font-family=\"monospace\" font-size=\"10\">0.0</text>\n";
  out << "  <text x=\"" << PlotFrame::left << "\" y=\"" << (PlotFrame::bottom + 14)
      << "\" font-family=\"monospace\" font-size=\"10\">0</text>\n";
  out << "  <text x=\"" << (PlotFrame::right - 24) << "\" y=\"" << (PlotFrame::bottom + 14)
      << "\" font-family=\"monospace\" font-size=\"10\">" << (points == 0 ? 0 : points - 1)
      << "</text>\n";
  (void)frame;
}

}  // namespace

SpectralProfile extract_profile(const ProbeModel& model, std::string task,
                                std::string language) {
  if (model.mode != ProbeMode::auto_filter || !model.filter) {
    throw ValidationError("no learned profile: model mode is " +
                          std::string(mode_name(model.mode)));
  }
  SpectralProfile profile;
  profile.task = std::move(task);
  profile.language = std::move(language);
  profile.weights.resize(model.filter->length());
  for (std::size_t k = 0; k < profile.weights.size(); ++k) {
    profile.weights[k] = sigmoid(model.filter->raw[k]);
  }
  return profile;
}

double overlap(const SpectralProfile& a, const SpectralProfile& b) {
  require_same_length(a, b);
  double l1 = 0.0;
  for (std::size_t k = 0; k < a.length(); ++k) {
    l1 += std::abs(a.weights[k] - b.weights[k]);
  }
  return 100.0 * (1.0 - l1 / static_cast<double>(a.length()));
}

OverlapMatrix overlap_matrix(const std::vector<SpectralProfile>& profiles) {
  if (profiles.size() < 2) {
    throw ValidationError("overlap matrix needs at least two profiles");
  }
  OverlapMatrix matrix;
  matrix.values = Matrix(profiles.size(), profiles.size());
  for (const SpectralProfile& p : profiles) matrix.labels.push_back(p.label());
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    matrix.values(i, i) = 100.0;
    for (std::size_t j = i + 1; j < profiles.size(); ++j) {
      const double value = overlap(profiles[i], profiles[j]);
      matrix.values(i, j) = value;
      matrix.values(j, i) = value;
    }
  }
  return matrix;
}

long display_rounded(double percentage) { return std::lround(percentage); }

ProfileStats average_profile(const std::vector<SpectralProfile>& profiles) {
  if (profiles.empty()) throw ValidationError("average_profile: no profiles given");
  const std::size_t m = profiles.front().length();
  for (const SpectralProfile& p : profiles) require_same_length(profiles.front(), p);

  ProfileStats stats;
  stats.mean.weights.assign(m, 0.0);
  stats.lower.assign(m, std::numeric_limits<double>::infinity());
  stats.upper.assign(m, -std::numeric_limits<double>::infinity());
  bool same_task = true;
  bool same_language = true;
  for (const SpectralProfile& p : profiles) {
    same_task = same_task && p.task == profiles.front().task;
    same_language = same_language && p.language == profiles.front().language;
    for (std::size_t k = 0; k < m; ++k) {
      stats.mean.weights[k] += p.weights[k];
      stats.lower[k] = std::min(stats.lower[k], p.weights[k]);
      stats.upper[k] = std::max(stats.upper[k], p.weights[k]);
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    stats.mean.weights[k] /= static_cast<double>(profiles.size());
  }
  stats.mean.task = same_task ? profiles.front().task : "mean";
  stats.mean.language = same_language ? profiles.front().language : "";
  return stats;
}

void export_profile_csv(const SpectralProfile& profile, const std::string& path) {
  std::ofstream out = open_out(path);
  for (std::size_t k = 0; k < profile.length(); ++k) {
    out << k << ',' << fmt9(profile.weights[k]) << '\n';
  }
  finish_out(out, path);
}

void export_profile_stats_csv(const ProfileStats& stats, const std::string& path) {
  std::ofstream out = open_out(path);
  for (std::size_t k = 0; k < stats.mean.length(); ++k) {
    out << k << ',' << fmt9(stats.mean.weights[k]) << ',' << fmt9(stats.lower[k]) << ','
        << fmt9(stats.upper[k]) << '\n';
  }
  finish_out(out, path);
}

void export_matrix_csv(const OverlapMatrix& matrix, const std::string& path) {
  std::ofstream out = open_out(path);
  for (const std::string& label : matrix.labels) out << ',' << csv_safe(label);
  out << '\n';
  for (std::size_t i = 0; i < matrix.values.rows(); ++i) {
    out << csv_safe(matrix.labels[i]);
    for (std::size_t j = 0; j < matrix.values.cols(); ++j) {
      out << ',' << fmt9(matrix.values(i, j));
    }
    out << '\n';
  }
  finish_out(out, path);
}

void export_profile_svg(const SpectralProfile& profile, const std::string& path) {
  std::ofstream out = open_out(path);
  const PlotFrame frame{profile.length()};
  write_plot_header(out, profile.label().empty() ? "spectral profile" : profile.label());
  write_plot_axes(out, profile.length());
  out << "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\""
      << polyline_points(frame, profile.weights) << "\"/>\n";
  out << "</svg>\n";
  finish_out(out, path);
}

void export_profile_stats_svg(const ProfileStats& stats, const std::string& path) {
  std::ofstream out = open_out(path);
  const PlotFrame frame{stats.mean.length()};
  write_plot_header(out, stats.mean.label().empty() ? "spectral profile"
                                                    : stats.mean.label() + " (mean)");
  write_plot_axes(out, stats.mean.length());
  // Envelope polygon: upper bound forward, lower bound backward.
  std::string points = polyline_points(frame, stats.upper);
  for (std::size_t k = stats.lower.size(); k-- > 0;) {
    points += " " + fmt9(frame.x(k)) + "," + fmt9(frame.y(stats.lower[k]));
  }
  out << "  <polygon fill=\"#1f77b4\" fill-opacity=\"0.2\" stroke=\"none\" points=\""
      << points << "\"/>\n";
  out << "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\""
      << polyline_points(frame, stats.mean.weights) << "\"/>\n";
  out << "</svg>\n";
  finish_out(out, path);
}

void export_matrix_svg(const OverlapMatrix& matrix, const std::string& path) {
  std::ofstream out = open_out(path);
  const std::size_t n = matrix.values.rows();
  const double cell = 46.0;
  const double margin = 96.0;
  const double size = margin + cell * static_cast<double>(n) + 12.0;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\""
      << size << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  for (std::size_t i = 0; i < n; ++i) {
    const double y = margin + cell * static_cast<double>(i);
    out << "  <text x=\"" << (margin - 6) << "\" y=\"" << (y + cell / 2 + 4)
        << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">"
        << xml_escape(matrix.labels[i]) << "</text>\n";
    out << "  <text x=\"" << (margin + cell * static_cast<double>(i) + cell / 2)
        << "\" y=\"" << (margin - 8) << "\" text-anchor=\"middle\" "
        << "font-family=\"monospace\" font-size=\"11\">" << xml_escape(matrix.labels[i])
        << "</text>\n";
    for (std::size_t j = 0; j < n; ++j) {
      const double x = margin + cell * static_cast<double>(j);
      const double v = std::clamp(matrix.values(i, j) / 100.0, 0.0, 1.0);
      // light yellow (low) to deep blue (high)
      const int r = static_cast<int>(std::lround(252.0 + (33.0 - 252.0) * v));
      const int g = static_cast<int>(std::lround(245.0 + (102.0 - 245.0) * v));
      const int b = static_cast<int>(std::lround(196.0 + (172.0 - 196.0) * v));
      out << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
          << "\" height=\"" << cell << "\" fill=\"rgb(" << r << "," << g << "," << b
          << ")\" stroke=\"#ffffff\"/>\n";
      out << "  <text x=\"" << (x + cell / 2) << "\" y=\"" << (y + cell / 2 + 4)
          << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\" fill=\""
          << (v > 0.6 ? "#ffffff" : "#222222") << "\">" << display_rounded(matrix.values(i, j))
          << "</text>\n";
    }
  }
  out << "</svg>\n";
  finish_out(out, path);
}

}  // namespace spectral
