#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "uamcts/bench/config.hpp"
#include "uamcts/common/error.hpp"
#include "uamcts/common/format.hpp"
#include "uamcts/gp/hyperparams.hpp"
#include "uamcts/gp/model_io.hpp"
#include "uamcts/pouring/episode.hpp"

namespace uamcts::bench {

struct ModelSummary {
  int dataset_size = 0;
  gp::KernelParams params;
  double log_likelihood = 0.0;
  bool used_fallback = false;
  double train_mse = 0.0;
  double test_mse = 0.0;  // NaN without a test set
  double mean_grid_std = 0.0;
};

struct TrialRecord {
  int trial = 0;
  double x_ref = 0.0;
  pouring::EpisodeTrace trace;
  std::string error;  // non-empty when the episode threw

  bool success() const { return error.empty() && trace.success; }
};

struct MethodResult {
  int dataset_size = 0;
  std::string method;
  int trials = 0;
  int successes = 0;
  int errors = 0;
  double success_rate = 0.0;  // percent
  double n_actions_mean = 0.0;
  double n_actions_sd = 0.0;  // population sd, over all trials
  std::vector<TrialRecord> records;
};

struct BenchReport {
  BenchConfig config;
  std::vector<double> x_refs;  // one per trial, shared by every method and model
  std::vector<ModelSummary> models;
  std::vector<MethodResult> results;

  int total_errors() const {
    int n = 0;
    for (const auto& r : results) n += r.errors;
    return n;
  }
};

/// Fills the aggregate fields of `r` from its records.
inline void aggregate(MethodResult& r) {
  r.trials = static_cast<int>(r.records.size());
  r.successes = 0;
  r.errors = 0;
  double sum = 0.0;
  for (const auto& t : r.records) {
    r.successes += t.success() ? 1 : 0;
    r.errors += t.error.empty() ? 0 : 1;
    sum += static_cast<double>(t.trace.n_actions());
  }
  if (r.trials == 0) return;
  const double n = r.trials;
  r.success_rate = 100.0 * r.successes / n;
  r.n_actions_mean = sum / n;
  double ss = 0.0;
  for (const auto& t : r.records) {
    const double d = static_cast<double>(t.trace.n_actions()) - r.n_actions_mean;
    ss += d * d;
  }
  r.n_actions_sd = std::sqrt(ss / n);
}

inline nlohmann::json to_json(const TrialRecord& t) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : t.trace.steps) steps.push_back(pouring::to_json(s));
  nlohmann::json j{{"trial", t.trial},
                   {"x_ref", t.x_ref},
                   {"success", t.success()},
                   {"outcome", t.trace.outcome},
                   {"n_actions", t.trace.n_actions()},
                   {"initial_true", t.trace.initial_true},
                   {"initial_observed", t.trace.initial_observed},
                   {"final_true", t.trace.final_true},
                   {"final_observed", t.trace.final_observed},
                   {"steps", steps}};
  if (!t.error.empty()) j["error"] = t.error;
  return j;
}

inline nlohmann::json to_json(const BenchReport& r) {
  nlohmann::json models = nlohmann::json::array();
  for (const auto& m : r.models) {
    nlohmann::json mj{{"dataset_size", m.dataset_size},
                      {"kernel_params", gp::to_json(m.params)},
                      {"log_likelihood", m.log_likelihood},
                      {"used_fallback", m.used_fallback},
                      {"train_mse", m.train_mse},
                      {"mean_grid_std", m.mean_grid_std}};
    mj["test_mse"] = std::isnan(m.test_mse) ? nlohmann::json(nullptr) : nlohmann::json(m.test_mse);
    models.push_back(mj);
  }
  nlohmann::json results = nlohmann::json::array();
  for (const auto& res : r.results) {
    nlohmann::json trials = nlohmann::json::array();
    for (const auto& t : res.records) trials.push_back(to_json(t));
    results.push_back({{"dataset_size", res.dataset_size},
                       {"method", res.method},
                       {"trials", res.trials},
                       {"successes", res.successes},
                       {"errors", res.errors},
                       {"success_rate", res.success_rate},
                       {"n_actions_mean", res.n_actions_mean},
                       {"n_actions_sd", res.n_actions_sd},
                       {"records", trials}});
  }
  return {{"config", to_json(r.config)}, {"x_refs", r.x_refs}, {"models", models}, {"results", results}};
}

inline constexpr const char* kSummaryHeader =
    "dataset_size,method,trials,successes,errors,success_rate,n_actions_mean,n_actions_sd";

/// Numbers are written in shortest round-trip form, so parsing the CSV
/// back gives the in-memory values exactly.
inline void write_summary_csv(std::ostream& os, const BenchReport& r) {
  os << kSummaryHeader << '\n';
  for (const auto& m : r.results)
    os << m.dataset_size << ',' << m.method << ',' << m.trials << ',' << m.successes << ',' << m.errors << ','
       << format_double(m.success_rate) << ',' << format_double(m.n_actions_mean) << ','
       << format_double(m.n_actions_sd) << '\n';
}

/// Rows of a summary CSV; `records` stays empty.
inline std::vector<MethodResult> read_summary_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("summary CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSummaryHeader) throw ParseError("summary CSV row 1: unexpected header");
  std::vector<MethodResult> out;
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 8) throw ParseError("summary CSV row " + std::to_string(row) + ": expected 8 fields");
    double v[8];
    for (int i : {0, 2, 3, 4, 5, 6, 7})
      if (!parse_double(f[i], v[i]))
        throw ParseError("summary CSV row " + std::to_string(row) + ", column " + std::to_string(i + 1) +
                         ": not a number");
    MethodResult m;
    m.dataset_size = static_cast<int>(v[0]);
    m.method = f[1];
    m.trials = static_cast<int>(v[2]);
    m.successes = static_cast<int>(v[3]);
    m.errors = static_cast<int>(v[4]);
    m.success_rate = v[5];
    m.n_actions_mean = v[6];
    m.n_actions_sd = v[7];
    out.push_back(std::move(m));
  }
  return out;
}

/// "1.45(0.59)"
inline std::string format_mean_sd(double mean, double sd) {
  return format_fixed(mean, 2) + "(" + format_fixed(sd, 2) + ")";
}

/// Aligned text, one block per dataset size, methods as rows.
inline void write_summary_text(std::ostream& os, const BenchReport& r) {
  for (int size : r.config.dataset_sizes) {
    os << size << "-point dataset";
    for (const auto& m : r.models)
      if (m.dataset_size == size && !std::isnan(m.test_mse)) os << " (test MSE " << format_fixed(m.test_mse, 2) << ")";
    os << '\n';
    os << "  method           success [%]   n. of actions mean (sd)\n";
    for (const auto& m : r.results) {
      if (m.dataset_size != size) continue;
      std::string name = m.method;
      name.resize(16, ' ');
      std::string rate = format_fixed(m.success_rate, 1);
      rate.insert(0, rate.size() < 11 ? 11 - rate.size() : 0, ' ');
      os << "  " << name << ' ' << rate << "   " << format_mean_sd(m.n_actions_mean, m.n_actions_sd);
      if (m.errors > 0) os << "  [" << m.errors << " errors]";
      os << '\n';
    }
  }
}

}  // namespace uamcts::bench
