#pragma once

#include <cstdint>
#include <vector>

#include "asynchrony.hpp"
#include "geometry.hpp"
#include "objectives.hpp"

namespace dsgd {

// One simulated run.  The trace fixes the asynchrony: the update applied at
// iteration n uses a gradient evaluated at iterate s(n) with the stored noise
// seed, so a (config, trace) pair reproduces the run bit for bit.
struct RunConfig {
  Objective objective;
  NoiseModel noise;
  FeasibleSet set;
  StepSchedule schedule;
  Trace trace;
  Vec y0;
  std::uint64_t record_every = 0;  // 0 = auto: 10 when N >= 1e5, else every step
  bool record_iterates = false;    // keep X_n at the recorded rows
};

struct RunRow {
  std::uint64_t n;
  double alpha;        // step applied leaving state n (schedule index n+1)
  std::uint64_t s;     // source iteration of the gradient applied at n
  double f;            // f(X_n)
  double grad_norm_sq; // |grad f(X_n)|^2
  double energy;       // dual-state merit; NaN when no feasible minimizer known
  double dist_to_opt;  // min distance of X_n to the known minimizers; NaN if none
  double b_norm;       // |grad f(X_{s(n)}) - grad f(X_n)|, the staleness drift
};

struct RunResult {
  std::vector<RunRow> rows;
  Vec final_x;
  Vec final_y;
  bool diverged = false;
  std::uint64_t diverged_at = 0;  // iteration at which the run was cut short
  double wall_seconds = 0.0;
  Trace trace;                    // the trace actually used
  std::vector<Vec> iterates;      // X_n at the recorded rows (record_iterates)
};

// Exact-gradient descent (no noise allowed); set may be bounded or all of
// space.  X_{n+1} = proj(Y_{n+1}), Y_{n+1} = Y_n - alpha_{n+1} grad f(X_{s(n)}).
RunResult run_dagd(const RunConfig& cfg);

// Stochastic run on all of space (set must be all_space).
RunResult run_dasgd_unconstrained(const RunConfig& cfg);

// Stochastic run with lazy projection (set must be bounded).  A run whose
// dual state leaves |Y|_inf <= 1e12 is flagged diverged and cut short.
RunResult run_dasgd_projected(const RunConfig& cfg);

struct ThreadedConfig {
  Objective objective;
  NoiseModel noise;
  FeasibleSet set;
  StepSchedule schedule;
  Vec y0;
  std::uint64_t workers = 2;
  std::uint64_t iterations = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t record_every = 0;
};

// Run with real threads: each of `workers` threads repeatedly snapshots the
// shared state, computes a gradient outside the lock, and applies it under
// the lock, appending the (source, seed) it used to the trace.  Feeding the
// returned trace back through run_dasgd_projected (or the unconstrained
// variant) reproduces the final iterate.
RunResult run_threaded(const ThreadedConfig& cfg);

}  // namespace dsgd
