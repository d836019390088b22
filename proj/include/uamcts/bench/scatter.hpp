#pragma once

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "uamcts/common/error.hpp"
#include "uamcts/common/format.hpp"
#include "uamcts/gp/gp_model.hpp"
#include "uamcts/gp/mde.hpp"
#include "uamcts/pouring/episode.hpp"
#include "uamcts/pouring/types.hpp"

namespace uamcts::bench {

struct ScatterRow {
  double alpha = 0.0;
  double duration = 0.0;
  double gp_std = 0.0;
  std::string kind;  // grid | action
};

inline double gp_std_at(const gp::GpModel& model, double level, double alpha, double duration) {
  return model.predict({level, alpha, duration}).stddev();
}

/// Predictive std over a resolution x resolution grid spanning the action
/// bounds at `grid_level`, followed by one row per executed action,
/// evaluated at the level observed before that action.
inline std::vector<ScatterRow> variance_scatter(const gp::GpModel& model,
                                                const std::vector<pouring::EpisodeTrace>& traces,
                                                const pouring::ActionGrid& bounds, int resolution,
                                                double grid_level) {
  std::vector<ScatterRow> rows;
  const int r = resolution < 2 ? 2 : resolution;
  for (int i = 0; i < r; ++i) {
    const double a = bounds.alpha_min + (bounds.alpha_max - bounds.alpha_min) * i / (r - 1);
    for (int j = 0; j < r; ++j) {
      const double d = bounds.duration_min + (bounds.duration_max - bounds.duration_min) * j / (r - 1);
      rows.push_back({a, d, gp_std_at(model, grid_level, a, d), "grid"});
    }
  }
  for (const auto& t : traces)
    for (const auto& s : t.steps)
      rows.push_back({s.action.alpha, s.action.duration,
                      gp_std_at(model, s.observed, s.action.alpha, s.action.duration), "action"});
  return rows;
}

inline constexpr const char* kScatterHeader = "alpha,duration,gp_std,kind";

inline void write_scatter_csv(std::ostream& os, const std::vector<ScatterRow>& rows) {
  os << kScatterHeader << '\n';
  for (const auto& r : rows)
    os << format_double(r.alpha) << ',' << format_double(r.duration) << ',' << format_double(r.gp_std) << ','
       << r.kind << '\n';
}

inline std::vector<ScatterRow> read_scatter_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("scatter CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kScatterHeader) throw ParseError("scatter CSV row 1: unexpected header");
  std::vector<ScatterRow> rows;
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 4) throw ParseError("scatter CSV row " + std::to_string(row) + ": expected 4 fields");
    ScatterRow r;
    double* dst[3] = {&r.alpha, &r.duration, &r.gp_std};
    for (int i = 0; i < 3; ++i)
      if (!parse_double(f[i], *dst[i]))
        throw ParseError("scatter CSV row " + std::to_string(row) + ", column " + std::to_string(i + 1) +
                         ": not a number");
    if (f[3] != "grid" && f[3] != "action")
      throw ParseError("scatter CSV row " + std::to_string(row) + ", column 4: kind must be grid or action");
    r.kind = f[3];
    rows.push_back(std::move(r));
  }
  return rows;
}

/// Mean gp_std over rows of one kind; NaN when there are none.
inline double mean_std(const std::vector<ScatterRow>& rows, const std::string& kind) {
  double sum = 0.0;
  int n = 0;
  for (const auto& r : rows)
    if (r.kind == kind) {
      sum += r.gp_std;
      ++n;
    }
  return n == 0 ? std::nan("") : sum / n;
}

}  // namespace uamcts::bench
