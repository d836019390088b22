#pragma once

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uamcts/common/error.hpp"
#include "uamcts/common/format.hpp"
#include "uamcts/gp/kernel.hpp"

namespace uamcts::gp {

/// One observed transition: feature z = (level, alpha, duration) and the
/// level measured after the pour.
struct Sample {
  Feature feature;
  double next_level = 0.0;

  friend bool operator==(const Sample&, const Sample&) = default;
};

class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Sample> points) : points_(std::move(points)) { validate(); }

  void add(const Sample& s) {
    check_sample(s, points_.size());
    points_.push_back(s);
  }

  const std::vector<Sample>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Sample& operator[](std::size_t i) const { return points_[i]; }

  void validate() const {
    for (std::size_t i = 0; i < points_.size(); ++i) check_sample(points_[i], i);
  }

  /// True when two rows share a feature but disagree on the target; such
  /// data is only representable with noise_var > 0.
  bool has_conflicting_duplicates() const {
    for (std::size_t i = 0; i < points_.size(); ++i)
      for (std::size_t j = i + 1; j < points_.size(); ++j)
        if (points_[i].feature == points_[j].feature && points_[i].next_level != points_[j].next_level)
          return true;
    return false;
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;

  static void check_sample(const Sample& s, std::size_t row) {
    const auto& f = s.feature;
    if (!f.finite() || !std::isfinite(s.next_level))
      throw std::invalid_argument("dataset row " + std::to_string(row) + ": non-finite value");
    if (f.level < 0 || f.level > 100 || s.next_level < 0 || s.next_level > 100)
      throw std::invalid_argument("dataset row " + std::to_string(row) + ": level outside [0,100]");
    if (f.alpha < 0 || f.duration < 0)
      throw std::invalid_argument("dataset row " + std::to_string(row) + ": negative action component");
  }

 private:
  std::vector<Sample> points_;
};

inline constexpr const char* kDatasetHeader = "level,alpha,duration,next_level";

inline void write_csv(std::ostream& os, const Dataset& data) {
  os << kDatasetHeader << '\n';
  for (const auto& s : data.points()) {
    os << format_double(s.feature.level) << ',' << format_double(s.feature.alpha) << ','
       << format_double(s.feature.duration) << ',' << format_double(s.next_level) << '\n';
  }
}

inline void write_csv(const std::string& path, const Dataset& data) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(os, data);
  if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

/// Rows are numbered from 1 counting the header, columns from 1.
inline Dataset read_csv(std::istream& is) {
  static constexpr const char* kColumns[] = {"level", "alpha", "duration", "next_level"};
  std::string line;
  if (!std::getline(is, line)) throw ParseError("dataset: empty input (missing header)");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (line != kDatasetHeader)
    throw ParseError("dataset row 1: expected header '" + std::string(kDatasetHeader) + "', got '" + line + "'");

  std::vector<Sample> rows;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double v[4];
    std::size_t col = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view field(line.data() + start,
                                   (comma == std::string::npos ? line.size() : comma) - start);
      if (col >= 4)
        throw ParseError("dataset row " + std::to_string(row) + ": too many columns");
      if (!parse_double(field, v[col]))
        throw ParseError("dataset row " + std::to_string(row) + ", column " + std::to_string(col + 1) +
                         " (" + kColumns[col] + "): cannot parse '" + std::string(field) + "'");
      ++col;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (col != 4)
      throw ParseError("dataset row " + std::to_string(row) + ": expected 4 columns, got " + std::to_string(col));
    Sample s{{v[0], v[1], v[2]}, v[3]};
    try {
      Dataset::check_sample(s, row);
    } catch (const std::invalid_argument&) {
      throw ParseError("dataset row " + std::to_string(row) + ": value out of range");
    }
    rows.push_back(s);
  }
  if (rows.empty()) throw ParseError("dataset: no data rows");
  return Dataset(std::move(rows));
}

inline Dataset read_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_csv(is);
}

}  // namespace uamcts::gp
