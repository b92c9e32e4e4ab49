#include "asynchrony.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rng.hpp"
#include "vec.hpp"

namespace dsgd {

// ---------------------------------------------------------------- schedules

StepSchedule StepSchedule::constant(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("schedule.c: must be > 0");
  return {Kind::constant, c, 0};
}

static StepSchedule make_sched(StepSchedule::Kind k, double c, std::int64_t offset) {
  if (!(c > 0.0)) throw std::invalid_argument("schedule.c: must be > 0");
  if (offset < 0) throw std::invalid_argument("schedule.offset: must be >= 0");
  return {k, c, offset};
}

StepSchedule StepSchedule::inv_n(double c, std::int64_t offset) {
  return make_sched(Kind::inv_n, c, offset);
}
StepSchedule StepSchedule::inv_nlogn(double c, std::int64_t offset) {
  return make_sched(Kind::inv_nlogn, c, offset);
}
StepSchedule StepSchedule::inv_nlogn_loglogn(double c, std::int64_t offset) {
  return make_sched(Kind::inv_nlogn_loglogn, c, offset);
}

double StepSchedule::step(std::uint64_t n) const {
  if (n == 0) throw std::invalid_argument("schedule.step: index starts at 1");
  double m = static_cast<double>(n) + static_cast<double>(offset);
  switch (kind) {
    case Kind::constant:
      return c;
    case Kind::inv_n:
      return c / m;
    case Kind::inv_nlogn:
      // clamp keeps log(m) > 0 for degenerate offsets (m = 1)
      m = std::max(m, 2.0);
      return c / (m * std::log(m));
    case Kind::inv_nlogn_loglogn:
      m = std::max(m, 3.0);
      return c / (m * std::log(m) * std::log(std::log(m)));
  }
  throw std::logic_error("schedule.step: unreachable");
}

const char* StepSchedule::kind_name() const {
  switch (kind) {
    case Kind::constant: return "constant";
    case Kind::inv_n: return "inv_n";
    case Kind::inv_nlogn: return "inv_nlogn";
    case Kind::inv_nlogn_loglogn: return "inv_nlogn_loglogn";
  }
  return "?";
}

// -------------------------------------------------------------- delay models

DelayModel DelayModel::none() { return {}; }

DelayModel DelayModel::constant(std::uint64_t D) {
  DelayModel m;
  m.kind = Kind::constant;
  m.D = D;
  return m;
}

DelayModel DelayModel::round_robin(std::uint64_t workers) {
  if (workers == 0) throw std::invalid_argument("delay.workers: must be >= 1");
  DelayModel m;
  m.kind = Kind::round_robin;
  m.ring = workers;
  return m;
}

DelayModel DelayModel::sublinear(double p, double coef) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("delay.p: must lie in (0,1)");
  if (!(coef > 0.0)) throw std::invalid_argument("delay.coef: must be > 0");
  DelayModel m;
  m.kind = Kind::sublinear;
  m.p = p;
  m.coef = coef;
  return m;
}

DelayModel DelayModel::linear(double coef) {
  if (!(coef > 0.0)) throw std::invalid_argument("delay.coef: must be > 0");
  DelayModel m;
  m.kind = Kind::linear;
  m.coef = coef;
  return m;
}

DelayModel DelayModel::polynomial(double q, double coef) {
  if (!(q >= 1.0)) throw std::invalid_argument("delay.q: must be >= 1");
  if (!(coef > 0.0)) throw std::invalid_argument("delay.coef: must be > 0");
  DelayModel m;
  m.kind = Kind::polynomial;
  m.q = q;
  m.coef = coef;
  return m;
}

DelayModel DelayModel::random_linear(double rate, std::uint64_t jitter_seed) {
  if (!(rate > 0.0)) throw std::invalid_argument("delay.rate: must be > 0");
  DelayModel m;
  m.kind = Kind::random_linear;
  m.rate = rate;
  m.jitter_seed = jitter_seed;
  return m;
}

const char* DelayModel::kind_name() const {
  switch (kind) {
    case Kind::none: return "none";
    case Kind::constant: return "constant";
    case Kind::round_robin: return "round_robin";
    case Kind::sublinear: return "sublinear";
    case Kind::linear: return "linear";
    case Kind::polynomial: return "polynomial";
    case Kind::random_linear: return "random_linear";
  }
  return "?";
}

const char* arch_name(Arch a) {
  return a == Arch::master_worker ? "master_worker" : "shared_memory";
}

std::optional<Arch> arch_from_name(const std::string& name) {
  if (name == "master_worker") return Arch::master_worker;
  if (name == "shared_memory") return Arch::shared_memory;
  return std::nullopt;
}

// ---------------------------------------------------------------- gen_trace

namespace {

// Largest staleness d in [0, n] with d <= coef * (n - d)^e, i.e. the delay of
// the gradient requested at iteration n - d stays within its class bound.
std::uint64_t max_consistent_staleness(std::uint64_t n, double coef, double e) {
  auto ok = [&](std::uint64_t d) {
    return static_cast<double>(d) <=
           coef * std::pow(static_cast<double>(n - d), e);
  };
  if (ok(n)) return n;
  std::uint64_t lo = 0, hi = n;  // ok(lo), !ok(hi)
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

// Tracks per-source consumption; find(s) is the smallest source >= s that
// still has spare capacity (path-compressed jumps).  Source n is never
// consumed before step n, so find never runs past the current iteration.
class SourceSlots {
 public:
  SourceSlots(std::uint64_t n, std::uint64_t cap_zero, std::uint64_t cap_rest)
      : jump_(n + 1), used_(n + 1, 0), cap_zero_(cap_zero), cap_rest_(cap_rest) {
    for (std::uint64_t i = 0; i <= n; ++i) jump_[i] = i;
  }

  std::uint64_t take(std::uint64_t want) {
    std::uint64_t s = find(want);
    if (++used_[s] >= cap(s)) jump_[s] = s + 1;
    return s;
  }

 private:
  std::uint64_t cap(std::uint64_t s) const { return s == 0 ? cap_zero_ : cap_rest_; }

  std::uint64_t find(std::uint64_t s) {
    std::uint64_t root = s;
    while (jump_[root] != root) root = jump_[root];
    while (jump_[s] != root) {
      const std::uint64_t nx = jump_[s];
      jump_[s] = root;
      s = nx;
    }
    return root;
  }

  std::vector<std::uint64_t> jump_;
  std::vector<std::uint32_t> used_;
  std::uint64_t cap_zero_, cap_rest_;
};

}  // namespace

Trace gen_trace(const DelayModel& model, Arch arch, std::uint64_t K, std::uint64_t N,
                std::uint64_t master_seed) {
  if (K == 0) throw std::invalid_argument("trace.k: must be >= 1");

  Trace tr;
  tr.arch = arch;
  tr.K = K;
  tr.entries.resize(N);
  for (std::uint64_t n = 0; n < N; ++n)
    tr.entries[n].seed = derive_seed(master_seed, kStreamNoise, n);
  if (N == 0) return tr;

  using Kind = DelayModel::Kind;

  // Deterministic kinds: the formula is the contract, so an arch that cannot
  // absorb the warm-up multiplicity is a configuration error, not something
  // to silently patch.
  if (model.kind == Kind::none || model.kind == Kind::constant ||
      model.kind == Kind::round_robin) {
    const std::uint64_t stale =
        model.kind == Kind::none ? 0 : (model.kind == Kind::constant ? model.D : model.ring - 1);
    const std::uint64_t warmup = std::min<std::uint64_t>(N, stale + 1);
    if (warmup > K)
      throw std::invalid_argument(
          std::string("trace.k: ") + model.kind_name() +
          " staleness " + std::to_string(stale) + " needs k >= " +
          std::to_string(warmup) + " (every warm-up update reads the initial point)");
    for (std::uint64_t n = 0; n < N; ++n)
      tr.entries[n].s = n >= stale ? n - stale : 0;
    return tr;
  }

  // Stochastic kinds: draw a target staleness per iteration, then resolve
  // per-source capacity (1 per source for master_worker -- K for the shared
  // initial point -- K per source for shared_memory).  Collisions move to the
  // nearest fresher source, which keeps both s(n) <= n and the class bound.
  SplitMix rng(derive_seed(master_seed ^ mix64(model.jitter_seed), kStreamDelay, 0));
  const std::uint64_t cap_zero = K;
  const std::uint64_t cap_rest = arch == Arch::master_worker ? 1 : K;
  SourceSlots slots(N, cap_zero, cap_rest);

  for (std::uint64_t n = 0; n < N; ++n) {
    std::uint64_t stale = 0;
    switch (model.kind) {
      case Kind::sublinear:
        stale = rng.next_below(max_consistent_staleness(n, model.coef, model.p));
        break;
      case Kind::linear: {
        // closed form: d <= coef*(n-d)  <=>  d <= n*coef/(1+coef)
        const auto dmax = static_cast<std::uint64_t>(
            std::floor(static_cast<double>(n) * model.coef / (1.0 + model.coef)));
        stale = rng.next_below(dmax);
        break;
      }
      case Kind::polynomial:
        stale = rng.next_below(max_consistent_staleness(n, model.coef, model.q));
        break;
      case Kind::random_linear: {
        const auto base = static_cast<std::uint64_t>(
            std::ceil(model.rate * static_cast<double>(n)));
        stale = base + rng.next_below(n / 10);
        break;
      }
      default:
        throw std::logic_error("gen_trace: unreachable");
    }
    const std::uint64_t target = stale >= n ? 0 : n - stale;
    tr.entries[n].s = slots.take(target);
  }
  return tr;
}

// ------------------------------------------------------------ validate_trace

TraceCheck validate_trace(const Trace& trace) {
  TraceCheck check;
  if (trace.K == 0) check.violations.push_back({0, "k_not_positive"});

  const std::uint64_t n_entries = trace.size();
  std::vector<std::uint32_t> count(n_entries, 0);    // total multiplicity per source
  std::vector<std::uint8_t> past_warmup(n_entries, 0);  // consumed at some n >= K
  for (std::uint64_t n = 0; n < n_entries; ++n) {
    const std::uint64_t s = trace.entries[n].s;
    if (s > n) {
      check.violations.push_back({n, "s_exceeds_n"});
      continue;  // out-of-range source; multiplicity bookkeeping not meaningful
    }
    const std::uint32_t c = ++count[s];
    if (trace.K == 0) continue;
    if (trace.arch == Arch::master_worker) {
      // one-to-one past warm-up: no source consumed twice at indices n >= K
      if (n >= trace.K) {
        if (past_warmup[s])
          check.violations.push_back({n, "master_worker_source_reused"});
        past_warmup[s] = 1;
      }
      // the initial point feeds at most the K processors that start on it
      if (s == 0 && c == trace.K + 1)
        check.violations.push_back({n, "master_worker_warmup_exceeds_k"});
    } else {
      if (c == trace.K + 1)
        check.violations.push_back({n, "shared_memory_multiplicity_exceeds_k"});
    }
  }
  return check;
}

// -------------------------------------------------------------- CSV round-trip

void save_trace_csv(const Trace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "# arch=" << arch_name(trace.arch) << " k=" << trace.K << "\n";
  out << "n,s_n,noise_seed\n";
  for (std::uint64_t n = 0; n < trace.size(); ++n)
    out << n << ',' << trace.entries[n].s << ',' << trace.entries[n].seed << '\n';
  if (!out) throw IoError("write failed: " + path);
}

Trace load_trace_csv(const std::string& path, std::optional<Arch> arch,
                     std::optional<std::uint64_t> K) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);

  Trace tr;
  bool have_arch = false, have_k = false;
  if (arch) {
    tr.arch = *arch;
    have_arch = true;
  }
  if (K) {
    tr.K = *K;
    have_k = true;
  }

  std::string line;
  std::uint64_t lineno = 0, expect_n = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      // metadata: "# arch=<name> k=<K>"
      std::istringstream meta(line.substr(1));
      std::string tok;
      while (meta >> tok) {
        if (tok.rfind("arch=", 0) == 0 && !arch) {
          const auto a = arch_from_name(tok.substr(5));
          if (!a)
            throw ParseError(path + ":" + std::to_string(lineno) +
                                     ": unknown arch '" + tok.substr(5) + "'");
          tr.arch = *a;
          have_arch = true;
        } else if (tok.rfind("k=", 0) == 0 && !K) {
          tr.K = std::stoull(tok.substr(2));
          have_k = true;
        }
      }
      continue;
    }
    if (line == "n,s_n,noise_seed") continue;  // header

    std::uint64_t n = 0, s = 0, seed = 0;
    char c1 = 0, c2 = 0;
    std::istringstream row(line);
    if (!(row >> n >> c1 >> s >> c2 >> seed) || c1 != ',' || c2 != ',')
      throw ParseError(path + ":" + std::to_string(lineno) +
                               ": expected 'n,s_n,noise_seed' row, got '" + line + "'");
    if (n != expect_n)
      throw ParseError(path + ":" + std::to_string(lineno) +
                               ": iteration index not dense (expected " +
                               std::to_string(expect_n) + ", got " + std::to_string(n) + ")");
    ++expect_n;
    tr.entries.push_back({s, seed});
  }

  if (!have_arch || !have_k)
    throw ParseError(path + ": no arch/k metadata line; pass arch and k explicitly");
  return tr;
}

// --------------------------------------------------------- compatibility_check

double loglog_tail_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.empty()) return 0.0;
  const double x_max = *std::max_element(xs.begin(), xs.end());
  const double x_lo = x_max / 10.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < x_lo || !(ys[i] > 0.0) || !(xs[i] > 0.0)) continue;
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) return 0.0;
  const double denom = static_cast<double>(m) * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  return (static_cast<double>(m) * sxy - sx * sy) / denom;
}

namespace {

enum class DelayClass { bounded, sublinear, linear, polynomial };

DelayClass classify(const DelayModel& m) {
  using Kind = DelayModel::Kind;
  switch (m.kind) {
    case Kind::none:
    case Kind::constant:
    case Kind::round_robin:
      return DelayClass::bounded;
    case Kind::sublinear:
      return DelayClass::sublinear;
    case Kind::linear:
    case Kind::random_linear:
      return DelayClass::linear;
    case Kind::polynomial:
      return m.q == 1.0 ? DelayClass::linear : DelayClass::polynomial;
  }
  throw std::logic_error("classify: unreachable");
}

bool square_summable(StepSchedule::Kind k) {
  return k == StepSchedule::Kind::inv_n || k == StepSchedule::Kind::inv_nlogn ||
         k == StepSchedule::Kind::inv_nlogn_loglogn;
}

}  // namespace

CompatReport compatibility_check(const StepSchedule& schedule, const DelayModel& model,
                                 std::uint64_t N, std::uint64_t master_seed) {
  if (N < 1000)
    throw std::invalid_argument("compatibility_check: horizon must be >= 1000");

  CompatReport rep;
  rep.horizon = N;

  switch (classify(model)) {
    case DelayClass::bounded:
      rep.sanctioned = square_summable(schedule.kind);
      rep.rule = rep.sanctioned ? "bounded_delays_with_square_summable_steps"
                                : "no_matching_pairing";
      break;
    case DelayClass::sublinear:
      rep.sanctioned = schedule.kind == StepSchedule::Kind::inv_n;
      rep.rule = rep.sanctioned ? "sublinear_delays_with_inv_n" : "no_matching_pairing";
      break;
    case DelayClass::linear:
      rep.sanctioned = schedule.kind == StepSchedule::Kind::inv_nlogn;
      rep.rule = rep.sanctioned ? "linear_delays_with_inv_nlogn" : "no_matching_pairing";
      break;
    case DelayClass::polynomial:
      rep.sanctioned = schedule.kind == StepSchedule::Kind::inv_nlogn_loglogn;
      rep.rule =
          rep.sanctioned ? "polynomial_delays_with_inv_nlogn_loglogn" : "no_matching_pairing";
      break;
  }

  // Internal worker count large enough that every kind generates cleanly.
  std::uint64_t k_internal = 64;
  if (model.kind == DelayModel::Kind::constant)
    k_internal = std::max(k_internal, model.D + 1);
  if (model.kind == DelayModel::Kind::round_robin)
    k_internal = std::max(k_internal, model.ring);
  const Trace tr = gen_trace(model, Arch::shared_memory, k_internal, N, master_seed);

  // prefix[k] = alpha_1 + ... + alpha_k
  std::vector<double> prefix(N + 1, 0.0);
  for (std::uint64_t k = 1; k <= N; ++k) prefix[k] = prefix[k - 1] + schedule.step(k);

  // Sample both partial-sum curves densely enough for a stable tail fit.
  std::vector<double> ns, s1_curve, s2_curve;
  const std::uint64_t stride = std::max<std::uint64_t>(1, N / 4096);
  double s1 = 0.0, s2 = 0.0;
  for (std::uint64_t n = 0; n < N; ++n) {
    const double a_next = schedule.step(n + 1);
    s1 += a_next * a_next;
    s2 += a_next * (prefix[n] - prefix[tr.entries[n].s]);
    if (n % stride == 0 || n + 1 == N) {
      ns.push_back(static_cast<double>(n + 1));
      s1_curve.push_back(s1);
      s2_curve.push_back(s2);
    }
  }
  rep.s1 = s1;
  rep.s2 = s2;
  rep.s1_slope = loglog_tail_slope(ns, s1_curve);
  rep.s2_slope = loglog_tail_slope(ns, s2_curve);
  return rep;
}

}  // namespace dsgd
