#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "uamcts/bench/bench.hpp"
#include "uamcts/bench/config.hpp"
#include "uamcts/bench/methods.hpp"
#include "uamcts/bench/report.hpp"
#include "uamcts/bench/scatter.hpp"

using namespace uamcts;
using namespace uamcts::bench;

namespace {

BenchConfig small_config() {
  BenchConfig c;
  c.seed = 11;
  c.trials = 4;
  c.dataset_sizes = {10, 5};
  c.search.iteration_budget = 150;
  c.scatter_resolution = 5;
  return c;
}

std::string summary_of(const BenchReport& r) {
  std::ostringstream os;
  write_summary_csv(os, r);
  return os.str();
}

}  // namespace

// Methods

TEST(Methods, KnownNamesMapToVariants) {
  EXPECT_EQ(find_method("MCTS").variant, mcts::Variant::kStandard);
  EXPECT_EQ(find_method("MCTS-inflated").variant, mcts::Variant::kInflated);
  EXPECT_EQ(find_method("UA-MCTS-1").variant, mcts::Variant::kUncertaintyAware);
  EXPECT_EQ(method_names(), "MCTS, MCTS-inflated, UA-MCTS-1");
}

TEST(Methods, ExternalReferenceMethodIsNotImplemented) {
  try {
    find_method("UA-MCTS-0");
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("not implemented"), std::string::npos);
  }
  EXPECT_THROW(find_method("greedy"), std::invalid_argument);
}

// Config

TEST(BenchConfig, JsonRoundTrip) {
  BenchConfig c = small_config();
  c.scatter_level = 33.0;
  c.search.wall_clock_budget = 0.5;
  c.mde_kind = gp::MdeKind::kStd;
  const auto j = to_json(c);
  EXPECT_EQ(to_json(bench_config_from_json(j)), j);
}

TEST(BenchConfig, DefaultsRoundTrip) {
  const auto j = to_json(BenchConfig{});
  EXPECT_EQ(to_json(bench_config_from_json(j)), j);
  EXPECT_EQ(to_json(bench_config_from_json(nlohmann::json::object())), j);
}

TEST(BenchConfig, UnknownKeyRejected) {
  EXPECT_THROW(bench_config_from_json({{"trails", 3}}), std::invalid_argument);
}

TEST(BenchConfig, WrongTypeRejected) {
  EXPECT_THROW(bench_config_from_json({{"trials", "many"}}), std::invalid_argument);
}

TEST(BenchConfig, InvalidValuesRejected) {
  EXPECT_THROW(bench_config_from_json({{"trials", 0}}), std::invalid_argument);
  EXPECT_THROW(bench_config_from_json({{"x_ref_min", 1.0}}), std::invalid_argument);
  EXPECT_THROW(bench_config_from_json({{"methods", {"UA-MCTS-0"}}}), std::invalid_argument);
  EXPECT_THROW(bench_config_from_json({{"tau", 0.0}}), std::invalid_argument);
}

// Aggregation and report files

TEST(Aggregate, RatesAndPopulationSd) {
  MethodResult r;
  r.trials = 4;
  for (int i = 0; i < 4; ++i) {
    TrialRecord rec;
    rec.trial = i;
    rec.x_ref = 50;
    rec.trace.goal = {50.0, 2.5};
    rec.trace.steps.resize(static_cast<std::size_t>(i + 1));
    rec.trace.final_true = i < 3 ? 50.0 : 10.0;
    rec.trace.success = i < 3;
    r.records.push_back(rec);
  }
  r.records[1].error = "boom";
  r.records[1].trace.success = false;
  aggregate(r);
  EXPECT_EQ(r.successes, 2);
  EXPECT_EQ(r.errors, 1);
  EXPECT_DOUBLE_EQ(r.success_rate, 50.0);
  EXPECT_DOUBLE_EQ(r.n_actions_mean, 2.5);
  EXPECT_DOUBLE_EQ(r.n_actions_sd, std::sqrt(1.25));
}

TEST(Report, FormatMeanSd) {
  EXPECT_EQ(format_mean_sd(1.454, 0.586), "1.45(0.59)");
}

TEST(Bench, SummaryHasOneRowPerModelAndMethod) {
  const auto r = run_bench(small_config());
  ASSERT_EQ(r.results.size(), 6u);
  std::istringstream is(summary_of(r));
  std::string header;
  std::getline(is, header);
  EXPECT_EQ(header, kSummaryHeader);
  int lines = 0;
  for (std::string line; std::getline(is, line);) ++lines;
  EXPECT_EQ(lines, 6);
}

TEST(Bench, DefaultRunHasTwelveRows) {
  BenchConfig c;
  c.trials = 1;
  c.search.iteration_budget = 20;
  c.scatter_resolution = 2;
  EXPECT_EQ(run_bench(c).results.size(), 12u);
}

TEST(Bench, SummaryCsvRoundTripsExactly) {
  const auto r = run_bench(small_config());
  std::istringstream is(summary_of(r));
  const auto back = read_summary_csv(is);
  ASSERT_EQ(back.size(), r.results.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    const auto& a = r.results[i];
    const auto& b = back[i];
    EXPECT_EQ(a.dataset_size, b.dataset_size);
    EXPECT_EQ(a.method, b.method);
    EXPECT_EQ(a.trials, b.trials);
    EXPECT_EQ(a.successes, b.successes);
    EXPECT_EQ(a.errors, b.errors);
    EXPECT_EQ(a.success_rate, b.success_rate);
    EXPECT_EQ(a.n_actions_mean, b.n_actions_mean);
    EXPECT_EQ(a.n_actions_sd, b.n_actions_sd);
  }
}

TEST(Bench, SuccessRateMatchesTraces) {
  const auto r = run_bench(small_config());
  for (const auto& m : r.results) {
    int ok = 0;
    for (const auto& rec : m.records) {
      const bool in_band = std::abs(rec.trace.final_true - rec.x_ref) <= 2.5;
      EXPECT_EQ(rec.success(), rec.error.empty() && in_band);
      ok += rec.success() ? 1 : 0;
    }
    EXPECT_EQ(m.successes, ok);
    EXPECT_DOUBLE_EQ(m.success_rate, 100.0 * ok / m.trials);
  }
}

TEST(Bench, TargetsSharedAcrossMethodsAndModels) {
  const auto c = small_config();
  const auto r = run_bench(c);
  ASSERT_EQ(r.x_refs.size(), static_cast<std::size_t>(c.trials));
  for (double x : r.x_refs) {
    EXPECT_GE(x, c.x_ref_min);
    EXPECT_LE(x, c.x_ref_max);
  }
  for (const auto& m : r.results)
    for (const auto& rec : m.records) EXPECT_EQ(rec.x_ref, r.x_refs[static_cast<std::size_t>(rec.trial)]);
}

TEST(Bench, ThreadCountDoesNotChangeResults) {
  auto c = small_config();
  const auto one = run_bench(c);
  c.threads = 3;
  const auto three = run_bench(c);
  ASSERT_EQ(one.results.size(), three.results.size());
  for (std::size_t i = 0; i < one.results.size(); ++i)
    for (std::size_t t = 0; t < one.results[i].records.size(); ++t)
      EXPECT_EQ(to_json(one.results[i].records[t]), to_json(three.results[i].records[t]));
  EXPECT_EQ(summary_of(one), summary_of(three));
}

TEST(Bench, AddingAMethodLeavesOthersUnchanged) {
  auto c = small_config();
  c.methods = {"MCTS"};
  const auto alone = run_bench(c);
  c.methods = {"UA-MCTS-1", "MCTS"};
  const auto both = run_bench(c);
  for (const auto& a : alone.results)
    for (const auto& b : both.results)
      if (a.method == b.method && a.dataset_size == b.dataset_size)
        for (std::size_t t = 0; t < a.records.size(); ++t) EXPECT_EQ(to_json(a.records[t]), to_json(b.records[t]));
}

TEST(Bench, SmallerDatasetsAreSubsetsOfTheLargest) {
  auto c = small_config();
  c.dataset_sizes = {12, 6, 3};
  const auto models = build_models(c);
  ASSERT_EQ(models.size(), 3u);
  for (std::size_t m = 1; m < models.size(); ++m)
    for (const auto& s : models[m].data.points())
      EXPECT_NE(std::find(models[0].data.points().begin(), models[0].data.points().end(), s),
                models[0].data.points().end());
}

TEST(Bench, PerfectModelSucceeds) {
  auto c = small_config();
  c.perfect_model = true;
  c.ground_truth.obs_noise_sd = 0.0;
  c.search.iteration_budget = 2000;
  c.methods = {"MCTS"};
  c.dataset_sizes = {1};
  const auto r = run_bench(c);
  EXPECT_EQ(r.results.at(0).successes, c.trials);
}

TEST(Bench, ReportJsonHasEveryTrial) {
  const auto c = small_config();
  const auto j = to_json(run_bench(c));
  EXPECT_EQ(j.at("config"), to_json(c));
  EXPECT_EQ(j.at("results").size(), 6u);
  for (const auto& m : j.at("results")) EXPECT_EQ(m.at("records").size(), 4u);
}

// Scatter

TEST(Scatter, GridOnlyWithoutTraces) {
  const auto models = build_models(small_config());
  const auto rows = variance_scatter(*models[0].gp, {}, pouring::ActionGrid{}, 4, 30.0);
  ASSERT_EQ(rows.size(), 16u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.kind, "grid");
    EXPECT_GE(r.gp_std, 0.0);
  }
  EXPECT_DOUBLE_EQ(rows.front().alpha, 0.25);
  EXPECT_DOUBLE_EQ(rows.back().duration, 1.0);
  EXPECT_TRUE(std::isnan(mean_std(rows, "action")));
}

TEST(Scatter, OneRowPerExecutedAction) {
  const auto c = small_config();
  const auto models = build_models(c);
  const auto r = run_bench(c, models);
  const auto rows = scatter_for(c, models[0], r.results[0]);
  std::size_t actions = 0;
  for (const auto& rec : r.results[0].records) actions += rec.trace.n_actions();
  std::size_t n_action_rows = 0;
  for (const auto& row : rows) n_action_rows += row.kind == "action" ? 1 : 0;
  EXPECT_EQ(n_action_rows, actions);
  EXPECT_EQ(rows.size() - n_action_rows, 25u);
}

TEST(Scatter, CsvRoundTrip) {
  const auto models = build_models(small_config());
  const auto rows = variance_scatter(*models[1].gp, {}, pouring::ActionGrid{}, 3, 10.0);
  std::stringstream ss;
  write_scatter_csv(ss, rows);
  const auto back = read_scatter_csv(ss);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].alpha, rows[i].alpha);
    EXPECT_EQ(back[i].duration, rows[i].duration);
    EXPECT_EQ(back[i].gp_std, rows[i].gp_std);
    EXPECT_EQ(back[i].kind, rows[i].kind);
  }
}

// Sweeps

TEST(Sweep, SingleValueEqualsBench) {
  auto c = small_config();
  c.methods = {"UA-MCTS-1"};
  const auto s = run_sweep(c, "tau", {c.search.tau});
  const auto r = run_bench(c);
  ASSERT_EQ(s.rows.size(), r.results.size());
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    EXPECT_EQ(s.rows[i].result.successes, r.results[i].successes);
    EXPECT_EQ(s.rows[i].result.n_actions_mean, r.results[i].n_actions_mean);
  }
}

TEST(Sweep, ZeroSteepnessRuns) {
  auto c = small_config();
  c.methods = {"UA-MCTS-1"};
  c.dataset_sizes = {5};
  const auto s = run_sweep(c, "h", {0.0, 10.0});
  EXPECT_EQ(s.rows.size(), 2u);
  EXPECT_EQ(s.errors, 0);
  std::ostringstream os;
  write_sweep_csv(os, s);
  EXPECT_EQ(os.str().rfind("h,dataset_size,method", 0), 0u);
}

TEST(Sweep, BadParameterRejected) {
  auto c = small_config();
  EXPECT_THROW(run_sweep(c, "c_uct", {1.0}), std::invalid_argument);
  EXPECT_THROW(run_sweep(c, "tau", {}), std::invalid_argument);
  EXPECT_THROW(run_sweep(c, "tau", {-1.0}), std::invalid_argument);
}
