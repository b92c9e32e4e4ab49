#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/asynchrony.hpp"
#include "core/vec.hpp"
#include "doctest.h"

using namespace dsgd;

TEST_CASE("schedules match independently computed values") {
  // alpha_n = c / ((n + offset) log(n + offset) ...): frozen reference values.
  CHECK(StepSchedule::inv_nlogn(1.0, 1).step(1) ==
        doctest::Approx(0.7213475204444817).epsilon(1e-15));  // 1/(2 ln 2)
  CHECK(StepSchedule::inv_nlogn_loglogn(1.0, 2).step(10) ==
        doctest::Approx(0.0368430096901285).epsilon(1e-14));  // 1/(12 ln12 lnln12)
  CHECK(StepSchedule::constant(0.25).step(1) == 0.25);
  CHECK(StepSchedule::constant(0.25).step(1000000) == 0.25);
  CHECK(StepSchedule::inv_n(2.0, 0).step(4) == 0.5);

  // Default offset keeps the log kinds finite and positive from n = 1.
  for (std::uint64_t n = 1; n <= 100; ++n) {
    CHECK(StepSchedule::inv_nlogn(1.0).step(n) > 0.0);
    CHECK(StepSchedule::inv_nlogn_loglogn(1.0).step(n) > 0.0);
  }
  // Degenerate offset 0: internal clamp still yields finite positive steps.
  CHECK(StepSchedule::inv_nlogn(1.0, 0).step(1) > 0.0);
  CHECK(StepSchedule::inv_nlogn_loglogn(1.0, 0).step(1) > 0.0);

  CHECK_THROWS_AS((void)StepSchedule::inv_n(0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)StepSchedule::constant(-1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)StepSchedule::inv_n(1.0, -3), std::invalid_argument);
  CHECK_THROWS_AS((void)StepSchedule::inv_n(1.0).step(0), std::invalid_argument);
}

TEST_CASE("inv_n steps diverge in sum while their squares converge") {
  const StepSchedule sched = StepSchedule::inv_n(1.0, 1);
  double sum = 0.0;
  for (std::uint64_t n = 1; n <= 1000000; ++n) sum += sched.step(n);
  CHECK(sum > 13.0);
  CHECK(sum == doctest::Approx(13.392727).epsilon(1e-6));
  const double last_sq = sched.step(1000000) * sched.step(1000000);
  CHECK(last_sq < 1e-12);
}

TEST_CASE("delay model factories validate parameters") {
  CHECK_THROWS_WITH_AS((void)DelayModel::sublinear(1.0), "delay.p: must lie in (0,1)",
                       std::invalid_argument);
  CHECK_THROWS_AS((void)DelayModel::sublinear(0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)DelayModel::sublinear(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)DelayModel::linear(0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)DelayModel::polynomial(0.5), std::invalid_argument);
  CHECK_THROWS_AS((void)DelayModel::random_linear(0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)DelayModel::round_robin(0), std::invalid_argument);
}

TEST_CASE("deterministic delay kinds produce the documented sources") {
  const Trace none = gen_trace(DelayModel::none(), Arch::master_worker, 1, 5, 7);
  REQUIRE(none.size() == 5);
  for (std::uint64_t n = 0; n < 5; ++n) CHECK(none.entries[n].s == n);

  const Trace rr = gen_trace(DelayModel::round_robin(4), Arch::master_worker, 4, 8, 7);
  const std::uint64_t want[] = {0, 0, 0, 0, 1, 2, 3, 4};
  REQUIRE(rr.size() == 8);
  for (std::uint64_t n = 0; n < 8; ++n) CHECK(rr.entries[n].s == want[n]);

  const Trace cd = gen_trace(DelayModel::constant(3), Arch::master_worker, 4, 6, 7);
  for (std::uint64_t n = 0; n < 6; ++n) CHECK(cd.entries[n].s == (n >= 3 ? n - 3 : 0));
}

TEST_CASE("warm-up multiplicity beyond the worker count is rejected") {
  CHECK_THROWS_WITH_AS(
      (void)gen_trace(DelayModel::round_robin(5), Arch::master_worker, 4, 10, 7),
      "trace.k: round_robin staleness 4 needs k >= 5 (every warm-up update reads the "
      "initial point)",
      std::invalid_argument);
  CHECK_THROWS_AS((void)gen_trace(DelayModel::constant(7), Arch::master_worker, 4, 10, 7),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)gen_trace(DelayModel::none(), Arch::master_worker, 0, 10, 7),
                  std::invalid_argument);
}

TEST_CASE("generated traces validate for every kind, arch, and seed") {
  const DelayModel models[] = {
      DelayModel::none(),           DelayModel::constant(3),
      DelayModel::round_robin(4),   DelayModel::sublinear(0.5),
      DelayModel::linear(1.0),      DelayModel::polynomial(2.0),
      DelayModel::random_linear(0.1)};
  for (const DelayModel& m : models) {
    for (Arch arch : {Arch::master_worker, Arch::shared_memory}) {
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Trace tr = gen_trace(m, arch, 8, 300, seed);
        const TraceCheck check = validate_trace(tr);
        INFO(m.kind_name(), " / ", arch_name(arch), " / seed ", seed);
        CHECK(check.ok());
        for (std::uint64_t n = 0; n < tr.size(); ++n) CHECK(tr.entries[n].s <= n);
      }
    }
  }
}

TEST_CASE("linear delays respect the class bound on realized staleness") {
  // d = n - s <= coef * s, i.e. s >= n/2 - 1 for coef = 1 (integer slack).
  const Trace tr = gen_trace(DelayModel::linear(1.0), Arch::shared_memory, 8, 2000, 99);
  for (std::uint64_t n = 0; n < tr.size(); ++n)
    CHECK(static_cast<double>(tr.entries[n].s) >= static_cast<double>(n) / 2.0 - 1.0);
}

TEST_CASE("master_worker sources are consumed at most once past warm-up") {
  const Trace tr =
      gen_trace(DelayModel::random_linear(0.1), Arch::master_worker, 8, 1000, 3);
  std::vector<int> used(tr.size(), 0);
  for (std::uint64_t n = 8; n < tr.size(); ++n) ++used[tr.entries[n].s];
  for (std::uint64_t s = 0; s < tr.size(); ++s) CHECK(used[s] <= 1);
}

TEST_CASE("validate_trace reports each rule on crafted counterexamples") {
  Trace tr;
  tr.arch = Arch::master_worker;
  tr.K = 2;
  tr.entries = {{0, 1}, {0, 2}, {0, 3}, {5, 4}, {2, 5}, {2, 6}};
  //             ok      ok     warmup>k  s>n     ok     reuse of 2 at n=5
  const TraceCheck check = validate_trace(tr);
  REQUIRE(check.violations.size() == 3);
  CHECK(check.violations[0].index == 2);
  CHECK(check.violations[0].rule == "master_worker_warmup_exceeds_k");
  CHECK(check.violations[1].index == 3);
  CHECK(check.violations[1].rule == "s_exceeds_n");
  CHECK(check.violations[2].index == 5);
  CHECK(check.violations[2].rule == "master_worker_source_reused");

  Trace sm;
  sm.arch = Arch::shared_memory;
  sm.K = 2;
  sm.entries = {{0, 1}, {0, 2}, {0, 3}, {1, 4}};
  const TraceCheck c2 = validate_trace(sm);
  REQUIRE(c2.violations.size() == 1);
  CHECK(c2.violations[0].index == 2);
  CHECK(c2.violations[0].rule == "shared_memory_multiplicity_exceeds_k");

  Trace k0;
  k0.arch = Arch::shared_memory;
  k0.K = 0;
  k0.entries = {{0, 1}};
  CHECK(!validate_trace(k0).ok());
  CHECK(validate_trace(k0).violations[0].rule == "k_not_positive");
}

TEST_CASE("trace CSV round-trips bitwise and rejects malformed files") {
  const std::string path = "/tmp/dsgd_unit_trace.csv";
  const Trace tr = gen_trace(DelayModel::random_linear(0.2), Arch::shared_memory, 4, 64, 11);
  save_trace_csv(tr, path);
  const Trace back = load_trace_csv(path);
  CHECK(back.arch == tr.arch);
  CHECK(back.K == tr.K);
  REQUIRE(back.size() == tr.size());
  for (std::uint64_t n = 0; n < tr.size(); ++n) {
    CHECK(back.entries[n].s == tr.entries[n].s);
    CHECK(back.entries[n].seed == tr.entries[n].seed);
  }

  // Explicit arch/K overrides win over the metadata line.
  const Trace forced = load_trace_csv(path, Arch::master_worker, 9);
  CHECK(forced.arch == Arch::master_worker);
  CHECK(forced.K == 9);

  CHECK_THROWS_AS((void)load_trace_csv("/tmp/definitely_missing_dsgd.csv"), IoError);
  CHECK_THROWS_AS(save_trace_csv(tr, "/no_such_dir/t.csv"), IoError);

  // No metadata and no explicit arch/K.
  {
    std::ofstream out("/tmp/dsgd_unit_nometa.csv");
    out << "n,s_n,noise_seed\n0,0,1\n1,0,2\n";
  }
  CHECK_THROWS_AS((void)load_trace_csv("/tmp/dsgd_unit_nometa.csv"), ParseError);
  const Trace t2 = load_trace_csv("/tmp/dsgd_unit_nometa.csv", Arch::shared_memory, 2);
  CHECK(t2.size() == 2);

  {
    std::ofstream out("/tmp/dsgd_unit_bad.csv");
    out << "# arch=shared_memory k=2\nn,s_n,noise_seed\n0,zero,1\n";
  }
  CHECK_THROWS_AS((void)load_trace_csv("/tmp/dsgd_unit_bad.csv"), ParseError);

  {
    std::ofstream out("/tmp/dsgd_unit_sparse.csv");
    out << "# arch=shared_memory k=2\nn,s_n,noise_seed\n0,0,1\n2,0,2\n";
  }
  CHECK_THROWS_AS((void)load_trace_csv("/tmp/dsgd_unit_sparse.csv"), ParseError);

  std::remove(path.c_str());
  std::remove("/tmp/dsgd_unit_nometa.csv");
  std::remove("/tmp/dsgd_unit_bad.csv");
  std::remove("/tmp/dsgd_unit_sparse.csv");
}

TEST_CASE("pairing table sanctions exactly the documented combinations") {
  const StepSchedule inv_n = StepSchedule::inv_n(1.0);
  const StepSchedule nlogn = StepSchedule::inv_nlogn(1.0);
  const StepSchedule triple = StepSchedule::inv_nlogn_loglogn(1.0);
  const StepSchedule flat = StepSchedule::constant(0.1);

  auto rule = [](const StepSchedule& s, const DelayModel& m) {
    return compatibility_check(s, m, 1000).rule;
  };
  auto ok = [](const StepSchedule& s, const DelayModel& m) {
    return compatibility_check(s, m, 1000).sanctioned;
  };

  CHECK(rule(inv_n, DelayModel::constant(5)) ==
        "bounded_delays_with_square_summable_steps");
  CHECK(rule(nlogn, DelayModel::none()) == "bounded_delays_with_square_summable_steps");
  CHECK(rule(triple, DelayModel::round_robin(4)) ==
        "bounded_delays_with_square_summable_steps");
  CHECK(!ok(flat, DelayModel::constant(5)));

  CHECK(rule(inv_n, DelayModel::sublinear(0.5)) == "sublinear_delays_with_inv_n");
  CHECK(!ok(nlogn, DelayModel::sublinear(0.5)));

  CHECK(rule(nlogn, DelayModel::linear(1.0)) == "linear_delays_with_inv_nlogn");
  CHECK(rule(nlogn, DelayModel::random_linear(0.1)) == "linear_delays_with_inv_nlogn");
  CHECK(!ok(inv_n, DelayModel::linear(1.0)));

  CHECK(rule(triple, DelayModel::polynomial(2.0)) ==
        "polynomial_delays_with_inv_nlogn_loglogn");
  CHECK(rule(inv_n, DelayModel::polynomial(2.0)) == "no_matching_pairing");

  CHECK_THROWS_AS((void)compatibility_check(inv_n, DelayModel::none(), 999),
                  std::invalid_argument);
}

TEST_CASE("square-step partial sum matches the Basel tail bracket") {
  const CompatReport rep =
      compatibility_check(StepSchedule::inv_n(1.0, 0), DelayModel::constant(5), 1000);
  const double basel = 1.6449340668482264;  // pi^2/6
  CHECK(rep.s1 > basel - 1e-3);
  CHECK(rep.s1 < basel - 1.0 / 1001.0);
  CHECK(rep.s1 == doctest::Approx(1.6439345666815615).epsilon(1e-12));
}

TEST_CASE("bounded delays keep the staleness sum within the square bound") {
  // With staleness <= D and inv_n steps, S2 <= (D+1)^2 * S1 at any horizon.
  const CompatReport rep =
      compatibility_check(StepSchedule::inv_n(1.0), DelayModel::constant(5), 1000000);
  CHECK(rep.sanctioned);
  CHECK(rep.s2 <= 36.0 * rep.s1);
  CHECK(rep.s2 > 0.0);
}

TEST_CASE("loglog_tail_slope recovers polynomial growth exponents") {
  std::vector<double> xs, lin, sqr, flat;
  for (int i = 1; i <= 1000; ++i) {
    xs.push_back(i);
    lin.push_back(2.0 * i);
    sqr.push_back(0.5 * i * i);
    flat.push_back(7.0);
  }
  CHECK(loglog_tail_slope(xs, lin) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(loglog_tail_slope(xs, sqr) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(loglog_tail_slope(xs, flat) == doctest::Approx(0.0));
  CHECK(loglog_tail_slope({1.0}, {1.0}) == 0.0);
}
