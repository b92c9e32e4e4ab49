#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dsgd {

// Step-size schedules alpha_n, n >= 1.  `offset` shifts the index so the
// logarithmic kinds are well defined from n = 1 (default 2); degenerate
// offsets are additionally clamped so the logs stay positive.
struct StepSchedule {
  enum class Kind { constant, inv_n, inv_nlogn, inv_nlogn_loglogn };
  Kind kind = Kind::inv_n;
  double c = 1.0;
  std::int64_t offset = 2;

  static StepSchedule constant(double c);
  static StepSchedule inv_n(double c, std::int64_t offset = 2);
  static StepSchedule inv_nlogn(double c, std::int64_t offset = 2);
  static StepSchedule inv_nlogn_loglogn(double c, std::int64_t offset = 2);

  // alpha_n; requires n >= 1.
  double step(std::uint64_t n) const;

  const char* kind_name() const;
};

// Staleness growth classes.  Deterministic kinds fix the source outright;
// stochastic kinds draw a staleness bounded so that the realized delay of the
// gradient requested at s, namely n - s, stays within coef * s^exponent.
struct DelayModel {
  enum class Kind { none, constant, round_robin, sublinear, linear, polynomial, random_linear };
  Kind kind = Kind::none;
  std::uint64_t D = 0;            // constant: fixed staleness
  std::uint64_t ring = 1;         // round_robin: worker count (staleness ring-1)
  double p = 0.5;                 // sublinear exponent, in (0,1)
  double q = 1.0;                 // polynomial exponent, >= 1
  double coef = 1.0;              // growth coefficient for the three classes
  double rate = 0.1;              // random_linear: mean staleness fraction
  std::uint64_t jitter_seed = 0;  // random_linear: extra stream decoupled from master seed

  static DelayModel none();
  static DelayModel constant(std::uint64_t D);
  static DelayModel round_robin(std::uint64_t workers);
  static DelayModel sublinear(double p, double coef = 1.0);
  static DelayModel linear(double coef = 1.0);
  static DelayModel polynomial(double q, double coef = 1.0);
  static DelayModel random_linear(double rate = 0.1, std::uint64_t jitter_seed = 0);

  const char* kind_name() const;
};

enum class Arch { master_worker, shared_memory };

const char* arch_name(Arch a);
std::optional<Arch> arch_from_name(const std::string& name);

// One realized asynchronous execution: entry i says that the update applied
// at iteration i used the gradient requested at iteration s (s <= i), drawn
// with noise seed `seed`.
struct Trace {
  Arch arch = Arch::master_worker;
  std::uint64_t K = 1;  // worker / processor count
  struct Entry {
    std::uint64_t s;
    std::uint64_t seed;
  };
  std::vector<Entry> entries;

  std::uint64_t size() const { return entries.size(); }
};

struct TraceCheck {
  struct Violation {
    std::uint64_t index;
    std::string rule;
  };
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Generate a trace of length N.  Postcondition: validate_trace passes.
// Deterministic kinds whose warm-up multiplicity cannot fit K workers are
// rejected; stochastic kinds repair collisions upward (to a fresher source),
// which never increases the realized staleness.
Trace gen_trace(const DelayModel& model, Arch arch, std::uint64_t K, std::uint64_t N,
                std::uint64_t master_seed);

// Structural audit; never throws.  Rules reported:
//   k_not_positive                        K == 0
//   s_exceeds_n                           entry reads a source after itself
//   master_worker_source_reused           source consumed twice past warm-up (n >= K)
//   master_worker_warmup_exceeds_k        source 0 consumed more than K times
//   shared_memory_multiplicity_exceeds_k  some source consumed more than K times
TraceCheck validate_trace(const Trace& trace);

// CSV round-trip.  Files carry a "# arch=<name> k=<K>" metadata line followed
// by the header "n,s_n,noise_seed" and one row per entry.  Loading a file
// without the metadata line requires explicit arch/K.
void save_trace_csv(const Trace& trace, const std::string& path);
Trace load_trace_csv(const std::string& path, std::optional<Arch> arch = std::nullopt,
                     std::optional<std::uint64_t> K = std::nullopt);

// Step/delay pairing audit: table verdict plus the partial sums
//   S1(N) = sum alpha_n^2           (square-summability of the schedule)
//   S2(N) = sum alpha_{n+1} * (alpha_{s(n)+1} + ... + alpha_n)
// on a freshly generated trace, with last-decade log-log slopes of both
// partial-sum curves (a convergent sum shows slope near 0).
struct CompatReport {
  bool sanctioned = false;
  std::string rule;  // matched pairing, or "no_matching_pairing"
  double s1 = 0.0;
  double s2 = 0.0;
  double s1_slope = 0.0;
  double s2_slope = 0.0;
  std::uint64_t horizon = 0;
};

CompatReport compatibility_check(const StepSchedule& schedule, const DelayModel& model,
                                 std::uint64_t N, std::uint64_t master_seed = 0x5eed);

// Least-squares slope of log(y) against log(x) for the points with
// x >= max(x)/10 and y > 0; 0 when fewer than two such points exist.
double loglog_tail_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace dsgd
