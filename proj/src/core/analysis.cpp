#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dsgd {

std::vector<Vec> ergodic_average(const RunResult& run, const StepSchedule& schedule) {
  if (run.iterates.size() != run.rows.size())
    throw std::invalid_argument("ergodic_average: run was not recorded with iterates");
  std::vector<Vec> out;
  out.reserve(run.iterates.size());
  Vec num;
  double den = 0.0;
  for (std::size_t j = 0; j < run.rows.size(); ++j) {
    const std::uint64_t n = run.rows[j].n;
    if (num.empty()) num.assign(run.iterates[j].size(), 0.0);
    if (n == 0) {
      out.push_back(run.iterates[j]);  // average over k >= 1 is empty; echo X_0
      continue;
    }
    const double a = schedule.step(n);
    axpy(num, a, run.iterates[j]);
    den += a;
    Vec xbar(num.size());
    for (std::size_t i = 0; i < num.size(); ++i) xbar[i] = num[i] / den;
    out.push_back(std::move(xbar));
  }
  return out;
}

TailSum weighted_tail_sum(const RunResult& run) {
  TailSum ts;
  ts.n.reserve(run.rows.size());
  ts.partial.reserve(run.rows.size());
  double acc = 0.0;
  for (const RunRow& row : run.rows) {
    acc += row.alpha * row.grad_norm_sq;
    ts.n.push_back(static_cast<double>(row.n + 1));
    ts.partial.push_back(acc);
  }
  ts.slope = loglog_tail_slope(ts.n, ts.partial);
  return ts;
}

namespace {

void require_same_grid(const std::vector<RunResult>& runs) {
  if (runs.empty()) throw std::invalid_argument("ensemble: need at least one run");
  const auto& rows0 = runs.front().rows;
  for (const RunResult& r : runs) {
    if (r.rows.size() != rows0.size())
      throw std::invalid_argument("ensemble: recorded grids differ in length");
    for (std::size_t j = 0; j < rows0.size(); ++j)
      if (r.rows[j].n != rows0[j].n)
        throw std::invalid_argument("ensemble: recorded grids differ");
  }
}

}  // namespace

DiffRatio successive_diff_ratio(const std::vector<RunResult>& runs) {
  require_same_grid(runs);
  const auto& rows0 = runs.front().rows;
  for (std::size_t j = 1; j < rows0.size(); ++j)
    if (rows0[j].n != rows0[j - 1].n + 1)
      throw std::invalid_argument(
          "successive_diff_ratio: needs every iteration recorded (record_every = 1)");

  DiffRatio dr;
  if (rows0.size() < 2) return dr;
  std::vector<double> mean(rows0.size(), 0.0);
  for (const RunResult& r : runs)
    for (std::size_t j = 0; j < rows0.size(); ++j) mean[j] += r.rows[j].grad_norm_sq;
  for (double& v : mean) v /= static_cast<double>(runs.size());

  dr.n.reserve(rows0.size() - 1);
  dr.ratio.reserve(rows0.size() - 1);
  for (std::size_t j = 0; j + 1 < rows0.size(); ++j) {
    const double a = rows0[j].alpha;  // step applied between states n and n+1
    dr.n.push_back(static_cast<double>(rows0[j].n));
    dr.ratio.push_back(std::fabs(mean[j + 1] - mean[j]) / a);
    if (rows0[j].n >= kBurnIn) dr.c_hat = std::max(dr.c_hat, dr.ratio.back());
  }
  return dr;
}

double metric_of(const RunRow& row, Metric metric) {
  switch (metric) {
    case Metric::f_value: return row.f;
    case Metric::grad_norm_sq: return row.grad_norm_sq;
    case Metric::energy: return row.energy;
    case Metric::dist_to_opt: return row.dist_to_opt;
    case Metric::b_norm: return row.b_norm;
  }
  throw std::logic_error("metric_of: unreachable");
}

const char* metric_name(Metric metric) {
  switch (metric) {
    case Metric::f_value: return "f_value";
    case Metric::grad_norm_sq: return "grad_norm_sq";
    case Metric::energy: return "energy";
    case Metric::dist_to_opt: return "dist_to_opt";
    case Metric::b_norm: return "b_n_norm";
  }
  return "?";
}

EnsembleSummary aggregate(const std::vector<RunResult>& runs, Metric metric) {
  require_same_grid(runs);
  const std::size_t n_rows = runs.front().rows.size();
  const std::size_t n_runs = runs.size();

  EnsembleSummary out;
  out.n.resize(n_rows);
  out.mean.resize(n_rows);
  out.median.resize(n_rows);
  out.min.resize(n_rows);
  out.max.resize(n_rows);

  std::vector<double> vals(n_runs);
  for (std::size_t j = 0; j < n_rows; ++j) {
    out.n[j] = static_cast<double>(runs.front().rows[j].n);
    for (std::size_t r = 0; r < n_runs; ++r) vals[r] = metric_of(runs[r].rows[j], metric);
    double s = 0.0, lo = vals[0], hi = vals[0];
    for (double v : vals) {
      s += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    out.mean[j] = s / static_cast<double>(n_runs);
    out.min[j] = lo;
    out.max[j] = hi;
    std::nth_element(vals.begin(), vals.begin() + n_runs / 2, vals.end());
    double med = vals[n_runs / 2];
    if (n_runs % 2 == 0) {
      const double lower = *std::max_element(vals.begin(), vals.begin() + n_runs / 2);
      med = 0.5 * (med + lower);
    }
    out.median[j] = med;
  }
  return out;
}

}  // namespace dsgd
