#pragma once

#include <cstdint>
#include <vector>

#include "asynchrony.hpp"
#include "engine.hpp"

namespace dsgd {

// Rows before this iteration are transient and excluded from fitted or
// extremal statistics.
inline constexpr std::uint64_t kBurnIn = 100;

// Step-weighted running average of the iterates,
//   xbar_n = (sum_{k<=n} alpha_k X_k) / (sum_{k<=n} alpha_k),  k >= 1,
// evaluated on the recorded grid (with record_every > 1 the weights are the
// recorded subsample's).  Requires the run to have kept its iterates; the
// entry for a recorded n = 0 row is X_0 itself.
std::vector<Vec> ergodic_average(const RunResult& run, const StepSchedule& schedule);

struct TailSum {
  std::vector<double> n;        // iteration of each partial sum (n+1, so > 0)
  std::vector<double> partial;  // cumulative alpha_{n+1} * |grad f(X_n)|^2
  double slope = 0.0;           // last-decade log-log slope of the partial sums
};

// Partial sums of the step-weighted squared gradients along one run; the sum
// staying bounded (slope near 0) is the footprint of a vanishing gradient.
TailSum weighted_tail_sum(const RunResult& run);

struct DiffRatio {
  std::vector<double> n;      // state index of the left endpoint
  std::vector<double> ratio;  // |m_{n+1} - m_n| / alpha_{n+1} on ensemble means
  double c_hat = 0.0;         // max ratio beyond burn-in
};

// Successive-difference quotient of the ensemble-mean squared gradient; its
// sup estimates the constant tying mean-square increments to the step size.
// Requires >= 1 run, identical grids recorded at every iteration.
DiffRatio successive_diff_ratio(const std::vector<RunResult>& runs);

enum class Metric { f_value, grad_norm_sq, energy, dist_to_opt, b_norm };

struct EnsembleSummary {
  std::vector<double> n;
  std::vector<double> mean, median, min, max;
};

// Pointwise statistics of one metric across replications (grids must agree).
EnsembleSummary aggregate(const std::vector<RunResult>& runs, Metric metric);

double metric_of(const RunRow& row, Metric metric);
const char* metric_name(Metric metric);

}  // namespace dsgd
