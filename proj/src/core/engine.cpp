#include "engine.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "rng.hpp"

namespace dsgd {

namespace {

constexpr double kDivergenceBound = 1e12;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t resolve_record_every(std::uint64_t requested, std::uint64_t n_iters) {
  if (requested > 0) return requested;
  return n_iters >= 100000 ? 10 : 1;
}

// Shared by the sequential engine and the threaded executor so replays walk
// the exact same floating-point sequence.
inline void apply_update(Vec& y, double alpha, const Vec& g) { axpy(y, -alpha, g); }

// Minimizers that are actually feasible; the dual-state merit is only defined
// against those.
std::vector<Vec> feasible_optima(const FeasibleSet& set, const std::vector<Vec>& optima) {
  std::vector<Vec> out;
  for (const Vec& p : optima)
    if (p.size() == set.dim && dist2(set.project(p), p) <= 1e-12) out.push_back(p);
  return out;
}

double min_dist_to(const std::vector<Vec>& pts, const Vec& x) {
  if (pts.empty()) return kNaN;
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& p : pts) best = std::min(best, dist2(x, p));
  return best;
}

void check_common(const RunConfig& cfg) {
  if (cfg.objective.dim == 0 || !cfg.objective.eval || !cfg.objective.mean_grad)
    throw std::invalid_argument("run: objective is incomplete");
  if (cfg.set.dim != cfg.objective.dim)
    throw std::invalid_argument("run: set and objective dimensions differ");
  require_dim(cfg.y0, cfg.objective.dim, "run.y0");
  const TraceCheck check = validate_trace(cfg.trace);
  if (!check.ok())
    throw std::invalid_argument("run: trace fails validation (" +
                                check.violations.front().rule + " at entry " +
                                std::to_string(check.violations.front().index) + ")");
}

RunResult run_core(const RunConfig& cfg) {
  check_common(cfg);
  const auto t0 = std::chrono::steady_clock::now();

  const Objective& obj = cfg.objective;
  const std::uint64_t n_iters = cfg.trace.size();
  const std::uint64_t every = resolve_record_every(cfg.record_every, n_iters);
  const std::vector<Vec> opt_feasible = feasible_optima(cfg.set, obj.optima);
  const bool have_energy = !opt_feasible.empty();

  RunResult res;
  res.trace = cfg.trace;
  res.rows.reserve(n_iters / every + 1);

  Vec y = cfg.y0;
  std::vector<Vec> x_hist;
  x_hist.reserve(n_iters + 1);

  for (std::uint64_t n = 0; n < n_iters; ++n) {
    x_hist.push_back(cfg.set.project(y));
    const Vec& x_n = x_hist.back();
    const Trace::Entry& e = cfg.trace.entries[n];
    const Vec g_mean = obj.mean_grad(x_hist[e.s]);
    const double alpha = cfg.schedule.step(n + 1);

    if (n % every == 0) {
      RunRow row;
      row.n = n;
      row.alpha = alpha;
      row.s = e.s;
      row.f = obj.eval(x_n);
      const Vec g_here = e.s == n ? g_mean : obj.mean_grad(x_n);
      row.grad_norm_sq = norm2_sq(g_here);
      row.energy = kNaN;
      if (have_energy) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec& p : opt_feasible) best = std::min(best, energy_at(cfg.set, p, y));
        row.energy = best;
      }
      row.dist_to_opt = min_dist_to(obj.optima, x_n);
      row.b_norm = e.s == n ? 0.0 : dist2(g_mean, g_here);
      res.rows.push_back(row);
      if (cfg.record_iterates) res.iterates.push_back(x_n);
    }

    Vec g = g_mean;
    if (cfg.noise.kind == NoiseModel::Kind::gaussian_additive && cfg.noise.sigma > 0.0) {
      GaussStream gs(e.seed);
      for (double& v : g) v += cfg.noise.sigma * gs.next();
    }
    apply_update(y, alpha, g);

    if (norm_inf(y) > kDivergenceBound || !all_finite(y)) {
      res.diverged = true;
      res.diverged_at = n;
      break;
    }
  }

  res.final_y = y;
  res.final_x = cfg.set.project(y);
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace

RunResult run_dagd(const RunConfig& cfg) {
  if (cfg.noise.kind != NoiseModel::Kind::none)
    throw std::invalid_argument("run_dagd: exact-gradient run cannot carry a noise model");
  return run_core(cfg);
}

RunResult run_dasgd_unconstrained(const RunConfig& cfg) {
  if (cfg.set.kind != FeasibleSet::Kind::all_space)
    throw std::invalid_argument("run_dasgd_unconstrained: set must be all_space");
  return run_core(cfg);
}

RunResult run_dasgd_projected(const RunConfig& cfg) {
  if (cfg.set.kind == FeasibleSet::Kind::all_space)
    throw std::invalid_argument("run_dasgd_projected: set must be bounded (box or ball)");
  return run_core(cfg);
}

RunResult run_threaded(const ThreadedConfig& cfg) {
  if (cfg.workers == 0) throw std::invalid_argument("run_threaded: workers must be >= 1");
  if (cfg.objective.dim == 0 || !cfg.objective.eval || !cfg.objective.mean_grad)
    throw std::invalid_argument("run_threaded: objective is incomplete");
  if (cfg.set.dim != cfg.objective.dim)
    throw std::invalid_argument("run_threaded: set and objective dimensions differ");
  require_dim(cfg.y0, cfg.objective.dim, "run_threaded.y0");

  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t n_iters = cfg.iterations;
  const std::uint64_t every = resolve_record_every(cfg.record_every, n_iters);
  const std::vector<Vec> opt_feasible = feasible_optima(cfg.set, cfg.objective.optima);

  RunResult res;
  res.trace.arch = Arch::shared_memory;
  res.trace.K = cfg.workers;
  res.trace.entries.reserve(n_iters);

  std::mutex mu;
  Vec y = cfg.y0;
  std::uint64_t n = 0;
  std::uint64_t tickets = 0;
  bool stop = false;
  std::string worker_error;

  auto worker = [&]() {
    try {
      for (;;) {
        Vec y_read;
        std::uint64_t m, seed;
        {
          std::lock_guard<std::mutex> lk(mu);
          if (n >= n_iters || stop) return;
          m = n;
          y_read = y;
          seed = derive_seed(cfg.master_seed, kStreamNoise, tickets++);
        }
        const Vec x_read = cfg.set.project(y_read);
        Vec g = cfg.objective.mean_grad(x_read);
        const Vec g_mean = g;
        if (cfg.noise.kind == NoiseModel::Kind::gaussian_additive && cfg.noise.sigma > 0.0) {
          GaussStream gs(seed);
          for (double& v : g) v += cfg.noise.sigma * gs.next();
        }
        {
          std::lock_guard<std::mutex> lk(mu);
          if (n >= n_iters || stop) return;  // beaten to the horizon: discard
          if (n % every == 0) {
            const Vec x_cur = cfg.set.project(y);
            RunRow row;
            row.n = n;
            row.alpha = cfg.schedule.step(n + 1);
            row.s = m;
            row.f = cfg.objective.eval(x_cur);
            const Vec g_here = cfg.objective.mean_grad(x_cur);
            row.grad_norm_sq = norm2_sq(g_here);
            row.energy = kNaN;
            if (!opt_feasible.empty()) {
              double best = std::numeric_limits<double>::infinity();
              for (const Vec& p : opt_feasible)
                best = std::min(best, energy_at(cfg.set, p, y));
              row.energy = best;
            }
            row.dist_to_opt = min_dist_to(cfg.objective.optima, x_cur);
            row.b_norm = dist2(g_mean, g_here);
            res.rows.push_back(row);
          }
          apply_update(y, cfg.schedule.step(n + 1), g);
          res.trace.entries.push_back({m, seed});
          ++n;
          if (norm_inf(y) > kDivergenceBound || !all_finite(y)) {
            res.diverged = true;
            res.diverged_at = n - 1;
            stop = true;
            return;
          }
        }
      }
    } catch (const std::exception& ex) {
      std::lock_guard<std::mutex> lk(mu);
      stop = true;
      if (worker_error.empty()) worker_error = ex.what();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(cfg.workers);
  for (std::uint64_t w = 0; w < cfg.workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  if (!worker_error.empty())
    throw std::runtime_error("run_threaded: worker failed after " +
                             std::to_string(res.trace.size()) + " updates: " + worker_error);

  res.final_y = y;
  res.final_x = cfg.set.project(y);
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace dsgd
