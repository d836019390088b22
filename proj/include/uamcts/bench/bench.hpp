#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "uamcts/bench/config.hpp"
#include "uamcts/bench/methods.hpp"
#include "uamcts/bench/report.hpp"
#include "uamcts/bench/scatter.hpp"
#include "uamcts/common/random.hpp"
#include "uamcts/gp/hyperparams.hpp"
#include "uamcts/pouring/dynamics.hpp"
#include "uamcts/pouring/episode.hpp"
#include "uamcts/pouring/model.hpp"

namespace uamcts::bench {

struct BenchModel {
  int dataset_size = 0;
  gp::Dataset data;
  std::optional<gp::GpModel> gp;  // absent for the perfect model
  std::shared_ptr<const pouring::TransitionModel> model;
  ModelSummary summary;
  double scatter_level = 0.0;
};

inline double mean_level(const gp::Dataset& d) {
  double s = 0.0;
  for (const auto& p : d.points()) s += p.feature.level;
  return d.empty() ? 0.0 : s / static_cast<double>(d.size());
}

/// The largest dataset is drawn once; every smaller one is a random
/// subset of it.
inline std::vector<BenchModel> build_models(const BenchConfig& c) {
  c.validate();
  std::vector<BenchModel> out;
  const double nan = std::nan("");
  if (c.perfect_model) {
    for (int n : c.dataset_sizes) {
      BenchModel m;
      m.dataset_size = n;
      m.model = std::make_shared<pouring::GroundTruthModel>(c.ground_truth);
      m.summary = {n, c.kernel, nan, false, 0.0, c.test_points > 0 ? 0.0 : nan, 0.0};
      out.push_back(std::move(m));
    }
    return out;
  }
  if (c.fit_hyper)
    for (int n : c.dataset_sizes)
      if (n < 2) throw std::invalid_argument("fit_hyper needs dataset sizes >= 2");

  const int largest = *std::max_element(c.dataset_sizes.begin(), c.dataset_sizes.end());
  Rng data_rng = make_rng(c.seed, "dataset");
  const gp::Dataset base = pouring::gen_dataset(c.ground_truth, static_cast<std::size_t>(largest), data_rng, c.grid,
                                                c.max_data_level);
  std::optional<gp::Dataset> test;
  if (c.test_points > 0) {
    Rng test_rng = make_rng(c.seed, "testset");
    test = pouring::gen_dataset(c.ground_truth, static_cast<std::size_t>(c.test_points), test_rng, c.grid,
                                c.max_data_level);
  }

  for (int n : c.dataset_sizes) {
    BenchModel m;
    m.dataset_size = n;
    if (n == largest) {
      m.data = base;
    } else {
      Rng sub = make_rng(c.seed, "subsample", {static_cast<std::uint64_t>(n)});
      m.data = pouring::subsample(base, static_cast<std::size_t>(n), sub);
    }
    gp::HyperparamFit fit;
    if (c.fit_hyper) {
      fit = gp::fit_hyperparams(m.data);
    } else {
      fit.params = c.kernel;
    }
    m.gp = gp::GpModel::fit(m.data, fit.params);
    if (!c.fit_hyper) fit.log_likelihood = m.gp->log_marginal_likelihood();
    m.model = std::make_shared<pouring::GpTransitionModel>(*m.gp, c.mde_kind);
    m.scatter_level = c.scatter_level ? *c.scatter_level : mean_level(m.data);
    const auto grid_rows = variance_scatter(*m.gp, {}, c.grid, c.scatter_resolution, m.scatter_level);
    m.summary = {n,
                 fit.params,
                 fit.log_likelihood,
                 fit.used_fallback,
                 gp::mean_squared_error(*m.gp, m.data),
                 test ? gp::mean_squared_error(*m.gp, *test) : nan,
                 mean_std(grid_rows, "grid")};
    out.push_back(std::move(m));
  }
  return out;
}

/// x_ref for each trial, from a stream that depends on nothing but the
/// master seed and the trial index.
inline std::vector<double> draw_x_refs(const BenchConfig& c) {
  std::vector<double> out;
  for (int t = 0; t < c.trials; ++t) {
    Rng rng = make_rng(c.seed, "x_ref", {static_cast<std::uint64_t>(t)});
    out.push_back(c.x_ref_min + (c.x_ref_max - c.x_ref_min) * uniform01(rng));
  }
  return out;
}

/// Episode stream keyed by method name rather than position, so adding
/// or reordering methods leaves the others' outcomes unchanged.
inline Rng episode_rng(const BenchConfig& c, const std::string& method, int dataset_size, int trial) {
  return make_rng(c.seed, "episode/" + method,
                  {static_cast<std::uint64_t>(dataset_size), static_cast<std::uint64_t>(trial)});
}

inline TrialRecord run_trial(const BenchConfig& c, const pouring::TransitionModel& model, const MethodSpec& method,
                             int dataset_size, int trial, double x_ref) {
  TrialRecord rec;
  rec.trial = trial;
  rec.x_ref = x_ref;
  pouring::EpisodeConfig ec;
  ec.initial_level = c.initial_level;
  ec.n_max = c.n_max;
  ec.grid = c.grid;
  ec.search = method.apply(c.search);
  Rng rng = episode_rng(c, std::string(method.name), dataset_size, trial);
  const pouring::GoalSpec goal{x_ref, c.tol};
  try {
    rec.trace = pouring::run_episode(c.ground_truth, model, goal, ec, rng);
  } catch (const pouring::EpisodeError& e) {
    rec.trace = e.trace();
    rec.error = e.what();
  } catch (const std::exception& e) {
    rec.trace.goal = goal;
    rec.trace.outcome = "error";
    rec.trace.error = e.what();
    rec.error = e.what();
  }
  return rec;
}

using ProgressFn = std::function<void(int done, int total)>;

/// Runs every (model, method, trial). Each trial owns its RNG stream and
/// its output slot, so the report is the same for any thread count.
inline BenchReport run_bench(const BenchConfig& c, const std::vector<BenchModel>& models,
                             const ProgressFn& progress = {}) {
  c.validate();
  BenchReport report;
  report.config = c;
  report.x_refs = draw_x_refs(c);
  for (const auto& m : models) report.models.push_back(m.summary);

  std::vector<const MethodSpec*> methods;
  for (const auto& name : c.methods) methods.push_back(&find_method(name));

  const int nm = static_cast<int>(methods.size());
  for (const auto& m : models)
    for (const auto* spec : methods) {
      MethodResult r;
      r.dataset_size = m.dataset_size;
      r.method = std::string(spec->name);
      r.records.resize(static_cast<std::size_t>(c.trials));
      report.results.push_back(std::move(r));
    }

  const int total = static_cast<int>(report.results.size()) * c.trials;
  std::atomic<int> next{0};
  std::atomic<int> done{0};
  std::mutex progress_mu;
  auto worker = [&] {
    for (int job = next++; job < total; job = next++) {
      const int slot = job / c.trials;
      const int trial = job % c.trials;
      const auto& model = models[static_cast<std::size_t>(slot / nm)];
      const auto& spec = *methods[static_cast<std::size_t>(slot % nm)];
      report.results[static_cast<std::size_t>(slot)].records[static_cast<std::size_t>(trial)] =
          run_trial(c, *model.model, spec, model.dataset_size, trial, report.x_refs[static_cast<std::size_t>(trial)]);
      const int d = ++done;
      if (progress) {
        std::lock_guard lock(progress_mu);
        progress(d, total);
      }
    }
  };
  const int nthreads = std::min(c.threads, std::max(total, 1));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& r : report.results) aggregate(r);
  return report;
}

inline BenchReport run_bench(const BenchConfig& c, const ProgressFn& progress = {}) {
  return run_bench(c, build_models(c), progress);
}

inline std::vector<pouring::EpisodeTrace> traces_of(const MethodResult& r) {
  std::vector<pouring::EpisodeTrace> out;
  for (const auto& rec : r.records) out.push_back(rec.trace);
  return out;
}

/// Scatter rows for one (model, method) pair of a finished run.
inline std::vector<ScatterRow> scatter_for(const BenchConfig& c, const BenchModel& model, const MethodResult& r) {
  if (!model.gp) throw std::invalid_argument("scatter needs a GP model");
  return variance_scatter(*model.gp, traces_of(r), c.grid, c.scatter_resolution, model.scatter_level);
}

// Parameter sweeps.

inline void set_sweep_param(BenchConfig& c, const std::string& param, double value) {
  if (param == "h")
    c.search.steepness = value;
  else if (param == "tau")
    c.search.tau = value;
  else if (param == "w")
    c.search.inflation_w = value;
  else
    throw std::invalid_argument("unknown sweep parameter '" + param + "' (expected h|tau|w)");
}

struct SweepRow {
  double value = 0.0;
  MethodResult result;  // records dropped
};

struct SweepReport {
  std::string param;
  std::vector<double> values;
  std::vector<SweepRow> rows;
  int errors = 0;
};

inline SweepReport run_sweep(const BenchConfig& base, const std::string& param, const std::vector<double>& values,
                             const ProgressFn& progress = {}) {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  BenchConfig probe = base;
  for (double v : values) {
    set_sweep_param(probe, param, v);
    probe.validate();
  }
  SweepReport out;
  out.param = param;
  out.values = values;
  // The swept parameters only affect the search, so the models are shared.
  const auto models = build_models(base);
  for (double v : values) {
    BenchConfig c = base;
    set_sweep_param(c, param, v);
    auto report = run_bench(c, models, progress);
    out.errors += report.total_errors();
    for (auto& r : report.results) {
      r.records.clear();
      out.rows.push_back({v, std::move(r)});
    }
  }
  return out;
}

inline void write_sweep_csv(std::ostream& os, const SweepReport& s) {
  os << s.param << ",dataset_size,method,trials,successes,errors,success_rate,n_actions_mean,n_actions_sd\n";
  for (const auto& row : s.rows) {
    const auto& m = row.result;
    os << format_double(row.value) << ',' << m.dataset_size << ',' << m.method << ',' << m.trials << ','
       << m.successes << ',' << m.errors << ',' << format_double(m.success_rate) << ','
       << format_double(m.n_actions_mean) << ',' << format_double(m.n_actions_sd) << '\n';
  }
}

}  // namespace uamcts::bench
