// uamcts: dataset generation, GP fitting, single-episode planning,
// benchmarks and parameter sweeps for the pouring task.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "options.hpp"
#include "uamcts/bench/bench.hpp"
#include "uamcts/common/error.hpp"
#include "uamcts/common/format.hpp"
#include "uamcts/gp/dataset.hpp"
#include "uamcts/gp/hyperparams.hpp"
#include "uamcts/gp/model_io.hpp"
#include "uamcts/pouring/episode.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace uamcts;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2 };

// Keys whose default is null or an empty list carry no type information.
const std::map<std::string, cli::KeyType> kTypeHints{
    {"scatter_level", cli::KeyType::kOptNumber}, {"wall_clock_budget", cli::KeyType::kOptNumber},
    {"x_ref", cli::KeyType::kOptNumber},         {"model", cli::KeyType::kOptString},
    {"data", cli::KeyType::kOptString},          {"test", cli::KeyType::kOptString},
    {"values", cli::KeyType::kNumberList},
};

const std::map<std::string, std::string> kHelp{
    {"seed", "master seed; every random stream derives from it"},
    {"n", "number of transitions to generate"},
    {"data", "training dataset CSV"},
    {"test", "held-out dataset CSV for the test MSE"},
    {"fit_hyper", "maximize the marginal likelihood over kernel hyperparameters"},
    {"model", "model JSON written by `fit`"},
    {"perfect_model", "plan with the exact dynamics instead of a GP"},
    {"x_ref", "goal level in percent"},
    {"method", "MCTS | MCTS-inflated | UA-MCTS-1"},
    {"methods", "comma-separated method names"},
    {"dataset_sizes", "comma-separated dataset sizes"},
    {"trials", "episodes per (dataset size, method)"},
    {"mde_kind", "variance | std"},
    {"h", "sigmoid steepness of the expansion filter"},
    {"tau", "softmax temperature of the selection discount"},
    {"w", "inflation factor"},
    {"param", "swept parameter: h | tau | w"},
    {"values", "comma-separated parameter values"},
};

std::vector<cli::KeySpec> infer_keys(const json& defaults) {
  std::vector<cli::KeySpec> keys;
  for (const auto& [key, v] : defaults.items()) {
    cli::KeyType t;
    if (auto it = kTypeHints.find(key); it != kTypeHints.end())
      t = it->second;
    else if (v.is_boolean())
      t = cli::KeyType::kBool;
    else if (v.is_number_unsigned() && key == "seed")
      t = cli::KeyType::kUInt;
    else if (v.is_number_integer())
      t = cli::KeyType::kInt;
    else if (v.is_number())
      t = cli::KeyType::kNumber;
    else if (v.is_string())
      t = cli::KeyType::kString;
    else if (v.is_array() && !v.empty() && v[0].is_number_integer())
      t = cli::KeyType::kIntList;
    else if (v.is_array())
      t = cli::KeyType::kStringList;
    else
      throw std::logic_error("no flag type for config key '" + key + "'");
    const auto h = kHelp.find(key);
    keys.push_back({key, t, h == kHelp.end() ? "config key " + key : h->second});
  }
  return keys;
}

json pick(const json& from, std::initializer_list<const char*> keys) {
  json out = json::object();
  for (const char* k : keys) out[k] = from.at(k);
  return out;
}

const std::initializer_list<const char*> kTruthKeys{"kappa", "alpha0", "exponent", "obs_noise_sd"};
const std::initializer_list<const char*> kGridKeys{"alpha_min",    "alpha_max",    "alpha_step",
                                                   "duration_min", "duration_max", "duration_step"};
const std::initializer_list<const char*> kKernelKeys{"dot_sigma0_sq", "rq_scale", "rq_alpha", "noise_var"};
const std::initializer_list<const char*> kSearchKeys{"c_uct",     "tau",       "h",
                                                     "w",         "iteration_budget",
                                                     "wall_clock_budget", "max_depth",
                                                     "inverted_expansion"};

json subset(const json& bench_defaults, std::initializer_list<std::initializer_list<const char*>> groups) {
  json out = json::object();
  for (const auto& g : groups) out.update(pick(bench_defaults, g));
  return out;
}

/// The bench config parser validates every shared key, so the smaller
/// subcommands route their shared keys through it.
bench::BenchConfig shared_config(const json& cfg) {
  const json defaults = bench::to_json(bench::BenchConfig{});
  json shared = json::object();
  for (const auto& [k, v] : cfg.items())
    if (defaults.contains(k)) shared[k] = v;
  return bench::bench_config_from_json(shared);
}

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec || !fs::is_directory(p)) throw std::runtime_error("cannot create output directory '" + dir + "'");
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  os << text;
  if (!os) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void echo_config(const fs::path& out, const json& cfg) { write_text(out / "config.json", cfg.dump(2) + "\n"); }

template <class F>
void write_file(const fs::path& path, F&& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  body(os);
  if (!os) throw std::runtime_error("write failed for '" + path.string() + "'");
}

// gen-data

json gen_data_defaults() {
  const json b = bench::to_json(bench::BenchConfig{});
  json d = subset(b, {kTruthKeys, kGridKeys});
  d["seed"] = b.at("seed");
  d["n"] = 40;
  d["max_data_level"] = b.at("max_data_level");
  return d;
}

int cmd_gen_data(const json& cfg, const fs::path& out) {
  const int n = cfg.at("n").get<int>();
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const auto c = shared_config(cfg);
  Rng rng = make_rng(c.seed, "dataset");
  const auto data = pouring::gen_dataset(c.ground_truth, static_cast<std::size_t>(n), rng, c.grid, c.max_data_level);
  gp::write_csv((out / "dataset.csv").string(), data);
  echo_config(out, cfg);

  double lo = 100, hi = 0, inc = 0;
  for (const auto& s : data.points()) {
    lo = std::min(lo, s.feature.level);
    hi = std::max(hi, s.feature.level);
    inc += s.next_level - s.feature.level;
  }
  std::cout << "wrote " << n << " transitions to " << (out / "dataset.csv").string() << "\n"
            << "  level range [" << format_fixed(lo, 2) << ", " << format_fixed(hi, 2) << "]\n"
            << "  mean poured amount " << format_fixed(inc / n, 2) << " %\n";
  return kOk;
}

// fit

json fit_defaults() {
  const json b = bench::to_json(bench::BenchConfig{});
  json d = subset(b, {kKernelKeys});
  d["data"] = nullptr;
  d["test"] = nullptr;
  d["fit_hyper"] = false;
  return d;
}

int cmd_fit(const json& cfg, const fs::path& out) {
  if (cfg.at("data").is_null()) throw std::invalid_argument("--data is required");
  const auto data = gp::read_csv(cfg.at("data").get<std::string>());
  gp::KernelParams params = shared_config(cfg).kernel;
  double lml = 0.0;
  if (cfg.at("fit_hyper").get<bool>()) {
    const auto fit = gp::fit_hyperparams(data);
    params = fit.params;
    if (fit.used_fallback) std::cerr << "warning: hyperparameter search failed; using defaults\n";
  }
  const auto model = gp::GpModel::fit(data, params);
  lml = model.log_marginal_likelihood();
  gp::save_model((out / "model.json").string(), model);
  echo_config(out, cfg);

  std::cout << "fitted " << data.size() << " points -> " << (out / "model.json").string() << "\n"
            << "  dot_sigma0_sq " << format_double(params.dot_sigma0_sq) << "\n"
            << "  rq_scale      " << format_double(params.rq_scale) << "\n"
            << "  rq_alpha      " << format_double(params.rq_alpha) << "\n"
            << "  noise_var     " << format_double(params.noise_var) << "\n"
            << "  log marginal likelihood " << format_fixed(lml, 4) << "\n"
            << "  train MSE " << format_fixed(gp::mean_squared_error(model, data), 4) << "\n";
  if (!cfg.at("test").is_null()) {
    const auto test = gp::read_csv(cfg.at("test").get<std::string>());
    std::cout << "  test MSE  " << format_fixed(gp::mean_squared_error(model, test), 4) << " (" << test.size()
              << " points)\n";
  }
  return kOk;
}

// plan

json plan_defaults() {
  const json b = bench::to_json(bench::BenchConfig{});
  json d = subset(b, {kTruthKeys, kGridKeys, kSearchKeys});
  for (const char* k : {"seed", "tol", "initial_level", "n_max", "mde_kind", "perfect_model"}) d[k] = b.at(k);
  d["model"] = nullptr;
  d["x_ref"] = nullptr;
  d["method"] = "UA-MCTS-1";
  return d;
}

int cmd_plan(const json& cfg, const fs::path& out) {
  const auto c = shared_config(cfg);
  const auto& method = bench::find_method(cfg.at("method").get<std::string>());
  if (cfg.at("x_ref").is_null()) throw std::invalid_argument("--x-ref is required");
  const pouring::GoalSpec goal{cfg.at("x_ref").get<double>(), c.tol};
  goal.validate();

  std::unique_ptr<pouring::TransitionModel> model;
  if (c.perfect_model) {
    model = std::make_unique<pouring::GroundTruthModel>(c.ground_truth);
  } else {
    if (cfg.at("model").is_null()) throw std::invalid_argument("--model is required unless --perfect-model is set");
    model = std::make_unique<pouring::GpTransitionModel>(gp::load_model(cfg.at("model").get<std::string>()),
                                                         c.mde_kind);
  }

  pouring::EpisodeConfig ec;
  ec.initial_level = c.initial_level;
  ec.n_max = c.n_max;
  ec.grid = c.grid;
  ec.search = method.apply(c.search);
  Rng rng = make_rng(c.seed, "plan");
  const auto trace = pouring::run_episode(c.ground_truth, *model, goal, ec, rng);
  pouring::write_trace_jsonl((out / "trace.jsonl").string(), trace);
  echo_config(out, cfg);

  std::printf("%-3s %9s %6s %5s %10s %10s %9s\n", "k", "observed", "alpha", "d", "predicted", "mde", "true");
  for (const auto& s : trace.steps)
    std::printf("%-3d %9.2f %6.2f %5.1f %10.2f %10.4f %9.2f\n", s.k, s.observed, s.action.alpha, s.action.duration,
                s.predicted, s.mde, s.true_level);
  std::printf("%s: final true level %.2f, goal [%.2f, %.2f], %zu actions\n", trace.outcome.c_str(),
              trace.final_true, goal.lower(), goal.upper(), trace.n_actions());
  return trace.success ? kOk : kFailure;
}

// bench

void print_progress(int done, int total) {
  const int step = std::max(1, total / 10);
  if (done % step == 0 || done == total) std::cerr << "  " << done << "/" << total << " episodes\n";
}

void write_bench_outputs(const fs::path& out, const bench::BenchConfig& c, const std::vector<bench::BenchModel>& models,
                         const bench::BenchReport& report) {
  write_text(out / "report.json", bench::to_json(report).dump(1) + "\n");
  write_file(out / "summary.csv", [&](std::ostream& os) { bench::write_summary_csv(os, report); });
  write_file(out / "summary.txt", [&](std::ostream& os) { bench::write_summary_text(os, report); });
  for (const auto& r : report.results) {
    for (const auto& m : models) {
      if (m.dataset_size != r.dataset_size || !m.gp) continue;
      const auto rows = bench::scatter_for(c, m, r);
      write_file(out / ("scatter_" + std::to_string(r.dataset_size) + "_" + r.method + ".csv"),
                 [&](std::ostream& os) { bench::write_scatter_csv(os, rows); });
    }
  }
}

int cmd_bench(const json& cfg, const fs::path& out) {
  const auto c = bench::bench_config_from_json(cfg);
  const auto models = bench::build_models(c);
  for (const auto& m : models) {
    std::cout << m.dataset_size << "-point model: ";
    if (!m.gp) {
      std::cout << "exact dynamics\n";
      continue;
    }
    std::cout << "train MSE " << format_fixed(m.summary.train_mse, 2);
    if (c.test_points > 0) std::cout << ", test MSE " << format_fixed(m.summary.test_mse, 2);
    std::cout << ", mean grid std " << format_fixed(m.summary.mean_grid_std, 2) << "\n";
  }
  const auto report = bench::run_bench(c, models, print_progress);
  write_bench_outputs(out, c, models, report);
  echo_config(out, cfg);
  bench::write_summary_text(std::cout, report);
  if (report.total_errors() > 0) {
    std::cerr << report.total_errors() << " episodes failed with errors; see report.json\n";
    return kFailure;
  }
  return kOk;
}

// sweep

json sweep_defaults() {
  json d = bench::to_json(bench::BenchConfig{});
  d["param"] = "tau";
  d["values"] = json::array();
  return d;
}

int cmd_sweep(const json& cfg, const fs::path& out) {
  json bench_part = cfg;
  bench_part.erase("param");
  bench_part.erase("values");
  const auto c = bench::bench_config_from_json(bench_part);
  const auto param = cfg.at("param").get<std::string>();
  const auto values = cfg.at("values").get<std::vector<double>>();
  if (values.empty()) throw std::invalid_argument("--values needs at least one value");

  std::cout << "sweep " << param << " values:";
  for (double v : values) std::cout << ' ' << format_double(v);
  std::cout << "\n";
  const auto sweep = bench::run_sweep(c, param, values, print_progress);
  write_file(out / "sweep.csv", [&](std::ostream& os) { bench::write_sweep_csv(os, sweep); });
  echo_config(out, cfg);

  for (const auto& row : sweep.rows)
    std::printf("%s=%-8s %4d-point  %-14s %6.1f %%  %s\n", param.c_str(), format_double(row.value).c_str(),
                row.result.dataset_size, row.result.method.c_str(), row.result.success_rate,
                bench::format_mean_sd(row.result.n_actions_mean, row.result.n_actions_sd).c_str());
  if (sweep.errors > 0) {
    std::cerr << sweep.errors << " episodes failed with errors\n";
    return kFailure;
  }
  return kOk;
}

struct Subcommand {
  CLI::App* app;
  std::unique_ptr<cli::ConfigLayer> layer;
  int (*run)(const json&, const fs::path&);
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uncertainty-aware MCTS for GP-modelled pouring"};
  app.require_subcommand(1);
  // "-h" would clash with the sigmoid steepness flag "--h".
  app.set_help_flag("--help", "print this help and exit");

  std::vector<Subcommand> subs;
  auto add = [&](const char* name, const char* desc, json defaults, int (*run)(const json&, const fs::path&)) {
    CLI::App* sub = app.add_subcommand(name, desc);
    auto keys = infer_keys(defaults);
    subs.push_back({sub, std::make_unique<cli::ConfigLayer>(sub, std::move(defaults), std::move(keys)), run});
  };
  add("gen-data", "generate a random transition dataset", gen_data_defaults(), cmd_gen_data);
  add("fit", "fit a GP model to a dataset", fit_defaults(), cmd_fit);
  add("plan", "run one receding-horizon episode", plan_defaults(), cmd_plan);
  add("bench", "run every method on every dataset size", bench::to_json(bench::BenchConfig{}), cmd_bench);
  add("sweep", "rerun the benchmark for several values of h, tau or w", sweep_defaults(), cmd_sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  for (auto& s : subs) {
    if (!s.app->parsed()) continue;
    json cfg;
    try {
      cfg = s.layer->resolve();
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kUsage;
    }
    try {
      const fs::path out = prepare_out(s.layer->out_dir());
      return s.run(cfg, out);
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kUsage;
    } catch (const ParseError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kUsage;
    } catch (const json::exception& e) {
      std::cerr << "error: bad config value: " << e.what() << "\n";
      return kUsage;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kFailure;
    }
  }
  return kUsage;
}
