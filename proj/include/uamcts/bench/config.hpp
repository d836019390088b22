#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "uamcts/bench/methods.hpp"
#include "uamcts/gp/kernel.hpp"
#include "uamcts/gp/mde.hpp"
#include "uamcts/mcts/config.hpp"
#include "uamcts/pouring/dynamics.hpp"
#include "uamcts/pouring/types.hpp"

namespace uamcts::bench {

/// Everything a benchmark run depends on. Serialized as one flat JSON
/// object so that every key has a matching command-line flag.
struct BenchConfig {
  std::uint64_t seed = 0;
  int trials = 100;
  std::vector<int> dataset_sizes{40, 20, 10, 5};
  std::vector<std::string> methods{"MCTS", "MCTS-inflated", "UA-MCTS-1"};

  double x_ref_min = 20.0;
  double x_ref_max = 90.0;
  double tol = 2.5;
  double initial_level = 0.0;
  int n_max = 10;

  gp::MdeKind mde_kind = gp::MdeKind::kVariance;
  bool fit_hyper = true;
  gp::KernelParams kernel;  // used when fit_hyper is false
  int test_points = 20;
  double max_data_level = 80.0;
  bool perfect_model = false;

  int threads = 1;
  int scatter_resolution = 20;
  std::optional<double> scatter_level;  // unset: mean training level

  mcts::SearchConfig search;
  pouring::GroundTruth ground_truth;
  pouring::ActionGrid grid;

  void validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (dataset_sizes.empty()) throw std::invalid_argument("dataset_sizes must not be empty");
    for (int n : dataset_sizes)
      if (n < 1) throw std::invalid_argument("dataset sizes must be >= 1");
    if (methods.empty()) throw std::invalid_argument("methods must not be empty");
    for (const auto& m : methods) find_method(m);
    if (!(x_ref_max >= x_ref_min)) throw std::invalid_argument("x_ref_max must be >= x_ref_min");
    if (!(tol > 0) || !(x_ref_min - tol > 0) || !(x_ref_max + tol <= 100))
      throw std::invalid_argument("x_ref range must satisfy x_ref - tol > 0 and x_ref + tol <= 100");
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    if (!(initial_level >= 0 && initial_level <= 100)) throw std::invalid_argument("initial_level must be in [0,100]");
    if (test_points < 0) throw std::invalid_argument("test_points must be >= 0");
    if (!(max_data_level >= 0 && max_data_level <= 100)) throw std::invalid_argument("max_data_level must be in [0,100]");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
    if (scatter_resolution < 2) throw std::invalid_argument("scatter_resolution must be >= 2");
    kernel.validate();
    search.validate();
    ground_truth.validate();
    grid.validate();
  }
};

inline nlohmann::json to_json(const BenchConfig& c) {
  nlohmann::json j;
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["dataset_sizes"] = c.dataset_sizes;
  j["methods"] = c.methods;
  j["x_ref_min"] = c.x_ref_min;
  j["x_ref_max"] = c.x_ref_max;
  j["tol"] = c.tol;
  j["initial_level"] = c.initial_level;
  j["n_max"] = c.n_max;
  j["mde_kind"] = std::string(gp::to_string(c.mde_kind));
  j["fit_hyper"] = c.fit_hyper;
  j["dot_sigma0_sq"] = c.kernel.dot_sigma0_sq;
  j["rq_scale"] = c.kernel.rq_scale;
  j["rq_alpha"] = c.kernel.rq_alpha;
  j["noise_var"] = c.kernel.noise_var;
  j["test_points"] = c.test_points;
  j["max_data_level"] = c.max_data_level;
  j["perfect_model"] = c.perfect_model;
  j["threads"] = c.threads;
  j["scatter_resolution"] = c.scatter_resolution;
  j["scatter_level"] = c.scatter_level ? nlohmann::json(*c.scatter_level) : nlohmann::json(nullptr);
  j["c_uct"] = c.search.c_uct;
  j["tau"] = c.search.tau;
  j["h"] = c.search.steepness;
  j["w"] = c.search.inflation_w;
  j["iteration_budget"] = c.search.iteration_budget;
  j["wall_clock_budget"] =
      c.search.wall_clock_budget ? nlohmann::json(*c.search.wall_clock_budget) : nlohmann::json(nullptr);
  j["max_depth"] = c.search.max_depth;
  j["inverted_expansion"] = c.search.inverted_expansion;
  j["kappa"] = c.ground_truth.kappa;
  j["alpha0"] = c.ground_truth.alpha0;
  j["exponent"] = c.ground_truth.exponent;
  j["obs_noise_sd"] = c.ground_truth.obs_noise_sd;
  j["alpha_min"] = c.grid.alpha_min;
  j["alpha_max"] = c.grid.alpha_max;
  j["alpha_step"] = c.grid.alpha_step;
  j["duration_min"] = c.grid.duration_min;
  j["duration_max"] = c.grid.duration_max;
  j["duration_step"] = c.grid.duration_step;
  return j;
}

namespace detail {

inline std::optional<double> optional_number(const nlohmann::json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

}  // namespace detail

/// Overlays the keys of `j` on the defaults. Unknown keys are rejected so
/// that a misspelt option cannot silently fall back to its default.
inline BenchConfig bench_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("bench config must be a JSON object");
  const nlohmann::json defaults = to_json(BenchConfig{});
  for (const auto& [key, value] : j.items())
    if (!defaults.contains(key)) throw std::invalid_argument("unknown config key '" + key + "'");
  nlohmann::json m = defaults;
  m.update(j);

  BenchConfig c;
  try {
    c.seed = m.at("seed").get<std::uint64_t>();
    c.trials = m.at("trials").get<int>();
    c.dataset_sizes = m.at("dataset_sizes").get<std::vector<int>>();
    c.methods = m.at("methods").get<std::vector<std::string>>();
    c.x_ref_min = m.at("x_ref_min").get<double>();
    c.x_ref_max = m.at("x_ref_max").get<double>();
    c.tol = m.at("tol").get<double>();
    c.initial_level = m.at("initial_level").get<double>();
    c.n_max = m.at("n_max").get<int>();
    c.mde_kind = gp::parse_mde_kind(m.at("mde_kind").get<std::string>());
    c.fit_hyper = m.at("fit_hyper").get<bool>();
    c.kernel.dot_sigma0_sq = m.at("dot_sigma0_sq").get<double>();
    c.kernel.rq_scale = m.at("rq_scale").get<double>();
    c.kernel.rq_alpha = m.at("rq_alpha").get<double>();
    c.kernel.noise_var = m.at("noise_var").get<double>();
    c.test_points = m.at("test_points").get<int>();
    c.max_data_level = m.at("max_data_level").get<double>();
    c.perfect_model = m.at("perfect_model").get<bool>();
    c.threads = m.at("threads").get<int>();
    c.scatter_resolution = m.at("scatter_resolution").get<int>();
    c.scatter_level = detail::optional_number(m.at("scatter_level"));
    c.search.c_uct = m.at("c_uct").get<double>();
    c.search.tau = m.at("tau").get<double>();
    c.search.steepness = m.at("h").get<double>();
    c.search.inflation_w = m.at("w").get<double>();
    c.search.iteration_budget = m.at("iteration_budget").get<int>();
    c.search.wall_clock_budget = detail::optional_number(m.at("wall_clock_budget"));
    c.search.max_depth = m.at("max_depth").get<int>();
    c.search.inverted_expansion = m.at("inverted_expansion").get<bool>();
    c.ground_truth.kappa = m.at("kappa").get<double>();
    c.ground_truth.alpha0 = m.at("alpha0").get<double>();
    c.ground_truth.exponent = m.at("exponent").get<double>();
    c.ground_truth.obs_noise_sd = m.at("obs_noise_sd").get<double>();
    c.grid.alpha_min = m.at("alpha_min").get<double>();
    c.grid.alpha_max = m.at("alpha_max").get<double>();
    c.grid.alpha_step = m.at("alpha_step").get<double>();
    c.grid.duration_min = m.at("duration_min").get<double>();
    c.grid.duration_max = m.at("duration_max").get<double>();
    c.grid.duration_step = m.at("duration_step").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace uamcts::bench
