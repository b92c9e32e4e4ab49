// delaysgd-cli — drive the simulator through its C API.
//
// Exit codes: 0 success / audit passed; 1-4 library error (invalid argument,
// runtime, io, parse); 5 the run diverged; 6 an audit or validation failed.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "delaysgd/delaysgd.h"

namespace {

constexpr int kExitAuditFailed = 6;

int die(dsgd_status st, const char* doing) {
  std::fprintf(stderr, "error (%s): %s\n", doing, dsgd_last_error());
  return static_cast<int>(st);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

struct SpecHandle {
  dsgd_spec* p = nullptr;
  ~SpecHandle() { dsgd_spec_destroy(p); }
};
struct TraceHandle {
  dsgd_trace* p = nullptr;
  ~TraceHandle() { dsgd_trace_destroy(p); }
};
struct ExperimentHandle {
  dsgd_experiment* p = nullptr;
  ~ExperimentHandle() { dsgd_experiment_destroy(p); }
};
struct StringHandle {
  char* p = nullptr;
  ~StringHandle() { dsgd_string_free(p); }
};

int load_spec(const std::string& path, SpecHandle& spec) {
  if (dsgd_status st = dsgd_spec_parse_file(path.c_str(), &spec.p)) {
    std::fprintf(stderr, "error parsing %s:\n%s", path.c_str(), dsgd_last_error());
    return static_cast<int>(st);
  }
  return 0;
}

void print_experiment_summary(const dsgd_experiment* exp) {
  const uint64_t reps = dsgd_experiment_replications(exp);
  const uint64_t points = dsgd_experiment_points(exp);
  const double* grid = nullptr;
  uint64_t len = 0;
  double last_n = 0.0;
  if (dsgd_experiment_series(exp, "f_value", "n", &grid, &len) == DSGD_OK && len > 0)
    last_n = grid[len - 1];
  std::printf("replications: %" PRIu64 ", recorded points per run: %" PRIu64 "\n", reps,
              points);
  if (points == 0) return;
  std::printf("ensemble means at the final recorded iterate (n = %.0f):\n", last_n);
  const char* metrics[] = {"f_value",     "grad_norm_sq", "energy",
                           "dist_to_opt", "b_n_norm",     "f_ergodic"};
  for (const char* m : metrics) {
    const double* mean = nullptr;
    if (dsgd_experiment_series(exp, m, "mean", &mean, &len) == DSGD_OK && len > 0)
      std::printf("  %-13s = %s\n", m, fmt(mean[len - 1]).c_str());
  }
}

int cmd_run(const std::string& spec_path, const std::string& out_dir, bool have_seed,
            uint64_t seed, uint64_t replications) {
  SpecHandle spec;
  if (int rc = load_spec(spec_path, spec)) return rc;
  if (have_seed)
    if (dsgd_status st = dsgd_spec_set_seed(spec.p, seed)) return die(st, "set seed");
  if (replications > 0)
    if (dsgd_status st = dsgd_spec_set_replications(spec.p, replications))
      return die(st, "set replications");

  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
      std::fprintf(stderr, "error: cannot create %s: %s\n", out_dir.c_str(),
                   ec.message().c_str());
      return static_cast<int>(DSGD_ERR_IO);
    }
  }

  ExperimentHandle exp;
  if (dsgd_status st = dsgd_spec_run(spec.p, out_dir.c_str(), &exp.p))
    return die(st, "run");

  print_experiment_summary(exp.p);
  if (!out_dir.empty()) std::printf("outputs written to %s\n", out_dir.c_str());
  if (dsgd_experiment_any_diverged(exp.p)) {
    std::printf("DIVERGED: at least one replication left the tracked region\n");
    return static_cast<int>(DSGD_DIVERGED);
  }
  std::printf("ok\n");
  return 0;
}

int cmd_check_vc(const std::string& spec_path, uint64_t grid, double tol) {
  SpecHandle spec;
  if (int rc = load_spec(spec_path, spec)) return rc;
  dsgd_vc_summary summary{};
  StringHandle argmin;
  if (dsgd_status st = dsgd_spec_check_vc(spec.p, grid, tol, &summary, &argmin.p))
    return die(st, "check-vc");
  std::printf("coherence grid: %" PRIu64 " points, tolerance %s\n", summary.checked_points,
              fmt(tol).c_str());
  std::printf("min <grad f(x), x - x*> = %s at %s\n", fmt(summary.min_inner_product).c_str(),
              argmin.p ? argmin.p : "[]");
  std::printf("violations: %" PRIu64 "\n", summary.violations);
  std::printf("equality points away from the minimizers: %" PRIu64 "\n",
              summary.equality_points);
  std::printf("verdict: %s\n", summary.passes ? "PASS" : "FAIL");
  return summary.passes ? 0 : kExitAuditFailed;
}

int cmd_check_compat(const std::string& spec_path, uint64_t horizon) {
  SpecHandle spec;
  if (int rc = load_spec(spec_path, spec)) return rc;
  dsgd_compat_summary summary{};
  StringHandle rule;
  if (dsgd_status st = dsgd_spec_check_compat(spec.p, horizon, &summary, &rule.p))
    return die(st, "check-compat");
  std::printf("pairing rule: %s (%s)\n", rule.p ? rule.p : "?",
              summary.sanctioned ? "sanctioned" : "NOT sanctioned");
  std::printf("horizon %" PRIu64 ":\n", summary.horizon);
  std::printf("  squared-step sum        S1 = %-14s tail slope %s\n",
              fmt(summary.s1).c_str(), fmt(summary.s1_slope).c_str());
  std::printf("  step-weighted delay sum S2 = %-14s tail slope %s\n",
              fmt(summary.s2).c_str(), fmt(summary.s2_slope).c_str());
  return summary.sanctioned ? 0 : kExitAuditFailed;
}

int cmd_validate_trace(const std::string& path, const std::string& arch, uint64_t k) {
  TraceHandle trace;
  if (dsgd_status st = dsgd_trace_load(path.c_str(), arch.c_str(), k, &trace.p))
    return die(st, "load trace");
  std::printf("trace: %" PRIu64 " entries, arch %s, k = %" PRIu64 "\n",
              dsgd_trace_len(trace.p), dsgd_trace_arch(trace.p),
              dsgd_trace_workers(trace.p));
  uint64_t violations = 0;
  StringHandle report;
  if (dsgd_status st = dsgd_trace_validate(trace.p, &violations, &report.p))
    return die(st, "validate");
  if (violations == 0) {
    std::printf("clean (0 violations)\n");
    return 0;
  }
  std::printf("INVALID: %" PRIu64 " violation(s)\n%s", violations,
              report.p ? report.p : "");
  return kExitAuditFailed;
}

int cmd_replay(const std::string& spec_path, const std::string& trace_path,
               const std::string& out_dir) {
  SpecHandle spec;
  if (int rc = load_spec(spec_path, spec)) return rc;
  TraceHandle trace;
  if (dsgd_status st = dsgd_trace_load(trace_path.c_str(), "", 0, &trace.p))
    return die(st, "load trace");

  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
      std::fprintf(stderr, "error: cannot create %s: %s\n", out_dir.c_str(),
                   ec.message().c_str());
      return static_cast<int>(DSGD_ERR_IO);
    }
  }

  ExperimentHandle exp;
  if (dsgd_status st = dsgd_spec_replay(spec.p, trace.p, out_dir.c_str(), &exp.p))
    return die(st, "replay");
  std::printf("replayed %" PRIu64 " entries (arch %s, k = %" PRIu64 ")\n",
              dsgd_trace_len(trace.p), dsgd_trace_arch(trace.p),
              dsgd_trace_workers(trace.p));
  print_experiment_summary(exp.p);
  if (!out_dir.empty()) std::printf("outputs written to %s\n", out_dir.c_str());
  if (dsgd_experiment_any_diverged(exp.p)) {
    std::printf("DIVERGED: the replayed run left the tracked region\n");
    return static_cast<int>(DSGD_DIVERGED);
  }
  std::printf("ok\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delaysgd-cli — delayed-gradient descent simulator"};
  app.set_version_flag("--version", std::string(dsgd_version()));
  app.require_subcommand(1);

  std::string spec_path, out_dir, trace_path, arch;
  uint64_t seed = 0, replications = 0, grid = 101, horizon = 0, k = 0;
  double tol = 1e-9;

  auto* run = app.add_subcommand("run", "run an experiment spec");
  run->add_option("spec", spec_path, "experiment spec (.cfg)")->required();
  run->add_option("--out", out_dir, "output directory (created if absent)")->required();
  auto* seed_opt = run->add_option("--seed", seed, "override run.master_seed");
  run->add_option("--replications", replications, "override run.replications");

  auto* vc = app.add_subcommand("check-vc", "grid-audit gradient/minimizer coherence");
  vc->add_option("spec", spec_path, "experiment spec (.cfg)")->required();
  vc->add_option("--grid", grid, "grid nodes per axis (default 101)");
  vc->add_option("--tol", tol, "equality tolerance (default 1e-9)");

  auto* compat = app.add_subcommand("check-compat", "audit the step-size/delay pairing");
  compat->add_option("spec", spec_path, "experiment spec (.cfg)")->required();
  compat->add_option("--horizon", horizon,
                     "audit horizon (default max(run.iterations, 1000))");

  auto* validate = app.add_subcommand("validate-trace", "structural audit of a trace CSV");
  validate->add_option("file", trace_path, "trace CSV")->required();
  validate->add_option("--arch", arch, "override architecture (master_worker|shared_memory)");
  validate->add_option("--k", k, "override worker count");

  auto* replay = app.add_subcommand("replay", "re-run a spec against a recorded trace");
  replay->add_option("spec", spec_path, "experiment spec (.cfg)")->required();
  replay->add_option("--trace", trace_path, "trace CSV to replay")->required();
  replay->add_option("--out", out_dir, "output directory (created if absent)");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(spec_path, out_dir, !seed_opt->empty(), seed, replications);
  if (vc->parsed()) return cmd_check_vc(spec_path, grid, tol);
  if (compat->parsed()) return cmd_check_compat(spec_path, horizon);
  if (validate->parsed()) return cmd_validate_trace(trace_path, arch, k);
  if (replay->parsed()) return cmd_replay(spec_path, trace_path, out_dir);
  return 0;
}
