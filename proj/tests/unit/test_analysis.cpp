#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "core/analysis.hpp"
#include "core/rng.hpp"
#include "doctest.h"

using namespace dsgd;

namespace {

RunResult bowl_run(std::uint64_t N, const StepSchedule& sched, std::uint64_t seed,
                   double sigma, bool iterates = true) {
  RunConfig cfg;
  cfg.objective = make_test_objective("quadratic", 1);
  cfg.noise = sigma > 0.0 ? NoiseModel::gaussian(sigma) : NoiseModel::none();
  cfg.set = FeasibleSet::all(1);
  cfg.schedule = sched;
  cfg.trace = gen_trace(DelayModel::none(), Arch::master_worker, 1, N, seed);
  cfg.y0 = Vec{1.0};
  cfg.record_iterates = iterates;
  return sigma > 0.0 ? run_dasgd_unconstrained(cfg) : run_dagd(cfg);
}

}  // namespace

TEST_CASE("ergodic average reproduces the hand-computed weighted mean") {
  // Constant step 0.25 on the 1-D bowl halves the iterate: X_k = 2^-k.
  const RunResult run = bowl_run(10, StepSchedule::constant(0.25), 0, 0.0);
  const auto xbar = ergodic_average(run, StepSchedule::constant(0.25));
  REQUIRE(xbar.size() == run.rows.size());
  CHECK(xbar[0][0] == 1.0);  // the n = 0 entry echoes X_0
  // Equal weights: xbar_n = mean(X_1..X_n) = (1 - 2^-n)/n.
  CHECK(xbar[3][0] == doctest::Approx((1.0 - 0.125) / 3.0).epsilon(1e-15));
  CHECK(xbar[9][0] == doctest::Approx((1.0 - std::ldexp(1.0, -9)) / 9.0).epsilon(1e-15));

  // Weighted case: inv_n weights alpha_k = 0.5/(k+1).
  const StepSchedule w = StepSchedule::inv_n(0.5, 1);
  const RunResult run2 = bowl_run(4, w, 0, 0.0);
  const auto xbar2 = ergodic_average(run2, w);
  double num = 0.0, den = 0.0;
  Vec xs{1.0};
  for (int k = 1; k <= 3; ++k) {
    xs.push_back(xs.back() * (1.0 - 2.0 * w.step(k)));  // x_k = x_{k-1}(1 - 2 a_k)
    num += w.step(k) * xs[k];
    den += w.step(k);
  }
  CHECK(xbar2[3][0] == doctest::Approx(num / den).epsilon(1e-14));
}

TEST_CASE("ergodic average requires recorded iterates") {
  const RunResult run = bowl_run(10, StepSchedule::constant(0.25), 0, 0.0, false);
  CHECK_THROWS_WITH_AS((void)ergodic_average(run, StepSchedule::constant(0.25)),
                       "ergodic_average: run was not recorded with iterates",
                       std::invalid_argument);
}

TEST_CASE("ergodic average of a projected run stays feasible") {
  RunConfig cfg;
  cfg.objective = make_test_objective("quadratic", 2);
  cfg.noise = NoiseModel::gaussian(1.0);
  cfg.set = FeasibleSet::make_ball(Vec{0.0, 0.0}, 0.8);
  cfg.schedule = StepSchedule::inv_nlogn(1.0);
  cfg.trace = gen_trace(DelayModel::random_linear(0.1), Arch::shared_memory, 4, 500, 21);
  cfg.y0 = Vec{2.0, 2.0};
  cfg.record_iterates = true;
  const RunResult run = run_dasgd_projected(cfg);
  const auto xbar = ergodic_average(run, cfg.schedule);
  for (const Vec& x : xbar) CHECK(dist2(cfg.set.project(x), x) <= 1e-12);
}

TEST_CASE("weighted tail sums of a stalling run grow linearly") {
  // Constant gradient: every term alpha * |g|^2 is identical, so the partial
  // sums are linear in n and the log-log tail slope is 1.
  Objective ramp;
  ramp.name = "ramp";
  ramp.dim = 1;
  ramp.eval = [](const Vec& x) { return 3.0 * x[0]; };
  ramp.mean_grad = [](const Vec&) { return Vec{3.0}; };
  RunConfig cfg;
  cfg.objective = ramp;
  cfg.set = FeasibleSet::all(1);
  cfg.schedule = StepSchedule::constant(0.01);
  cfg.trace = gen_trace(DelayModel::none(), Arch::master_worker, 1, 2000, 0);
  cfg.y0 = Vec{0.0};
  const RunResult run = run_dagd(cfg);
  const TailSum ts = weighted_tail_sum(run);
  REQUIRE(ts.partial.size() == run.rows.size());
  CHECK(ts.n.front() == 1.0);
  CHECK(ts.partial[0] == doctest::Approx(0.01 * 9.0));
  CHECK(ts.partial[9] == doctest::Approx(10.0 * 0.01 * 9.0).epsilon(1e-12));
  CHECK(ts.slope == doctest::Approx(1.0).epsilon(1e-6));

  // A converging run's weighted squared gradients sum to something finite:
  // the tail slope collapses toward zero.
  const RunResult good = bowl_run(5000, StepSchedule::inv_n(1.0), 0, 0.0);
  CHECK(weighted_tail_sum(good).slope < 0.05);
}

TEST_CASE("successive difference ratios are bounded by the smoothness constant") {
  // Deterministic bowl: |m_{n+1} - m_n| / alpha_{n+1} <= 2 L B with L = 2 and
  // B = sup |grad|^2 = 4 x0^2.
  const RunResult run = bowl_run(500, StepSchedule::inv_n(1.0), 0, 0.0);
  const DiffRatio dr = successive_diff_ratio({run});
  REQUIRE(!dr.ratio.empty());
  CHECK(dr.c_hat <= 16.0 + 1e-9);
  CHECK(dr.c_hat > 0.0);
  // c_hat is the max beyond burn-in.
  double worst = 0.0;
  for (std::size_t j = 0; j < dr.ratio.size(); ++j)
    if (dr.n[j] >= static_cast<double>(kBurnIn)) worst = std::max(worst, dr.ratio[j]);
  CHECK(dr.c_hat == doctest::Approx(worst));
}

TEST_CASE("successive difference ratios demand a dense grid") {
  RunConfig cfg;
  cfg.objective = make_test_objective("quadratic", 1);
  cfg.set = FeasibleSet::all(1);
  cfg.schedule = StepSchedule::inv_n(1.0);
  cfg.trace = gen_trace(DelayModel::none(), Arch::master_worker, 1, 400, 0);
  cfg.y0 = Vec{1.0};
  cfg.record_every = 5;
  const RunResult run = run_dagd(cfg);
  CHECK_THROWS_WITH_AS(
      (void)successive_diff_ratio({run}),
      "successive_diff_ratio: needs every iteration recorded (record_every = 1)",
      std::invalid_argument);
  CHECK_THROWS_AS((void)successive_diff_ratio({}), std::invalid_argument);
}

TEST_CASE("ensemble aggregation computes pointwise statistics") {
  std::vector<RunResult> runs;
  for (std::uint64_t seed : {1u, 2u, 3u})
    runs.push_back(bowl_run(50, StepSchedule::inv_n(1.0), seed, 1.0));
  const EnsembleSummary agg = aggregate(runs, Metric::f_value);
  REQUIRE(agg.n.size() == runs[0].rows.size());
  for (std::size_t j = 0; j < agg.n.size(); ++j) {
    double a = runs[0].rows[j].f, b = runs[1].rows[j].f, c = runs[2].rows[j].f;
    const double lo = std::min({a, b, c}), hi = std::max({a, b, c});
    const double mid = std::max(std::min(a, b), std::min(std::max(a, b), c));
    CHECK(agg.min[j] == lo);
    CHECK(agg.max[j] == hi);
    CHECK(agg.median[j] == mid);
    CHECK(agg.mean[j] == doctest::Approx((a + b + c) / 3.0).epsilon(1e-15));
    CHECK(agg.n[j] == static_cast<double>(runs[0].rows[j].n));
  }

  // Grids must agree.
  std::vector<RunResult> bad = {runs[0], bowl_run(40, StepSchedule::inv_n(1.0), 4, 1.0)};
  CHECK_THROWS_AS((void)aggregate(bad, Metric::f_value), std::invalid_argument);
}

TEST_CASE("metrics expose the documented column names") {
  CHECK(std::string(metric_name(Metric::f_value)) == "f_value");
  CHECK(std::string(metric_name(Metric::grad_norm_sq)) == "grad_norm_sq");
  CHECK(std::string(metric_name(Metric::energy)) == "energy");
  CHECK(std::string(metric_name(Metric::dist_to_opt)) == "dist_to_opt");
  CHECK(std::string(metric_name(Metric::b_norm)) == "b_n_norm");

  RunRow row{};
  row.f = 1.0;
  row.grad_norm_sq = 2.0;
  row.energy = 3.0;
  row.dist_to_opt = 4.0;
  row.b_norm = 5.0;
  CHECK(metric_of(row, Metric::f_value) == 1.0);
  CHECK(metric_of(row, Metric::grad_norm_sq) == 2.0);
  CHECK(metric_of(row, Metric::energy) == 3.0);
  CHECK(metric_of(row, Metric::dist_to_opt) == 4.0);
  CHECK(metric_of(row, Metric::b_norm) == 5.0);
}
