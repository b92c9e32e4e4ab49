#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "asynchrony.hpp"
#include "engine.hpp"
#include "vc.hpp"

namespace dsgd {

// Everything a reproducible experiment needs, as read from a .cfg file.
struct ExperimentSpec {
  std::string objective_name;
  std::size_t dim = 0;
  NoiseModel noise;  // default: none
  FeasibleSet set;   // default: all_space(dim)
  StepSchedule schedule;
  DelayModel delay;  // default: none
  Arch arch = Arch::master_worker;
  std::uint64_t workers = 0;  // 0 = auto (smallest count the delay model allows)
  std::uint64_t iterations = 0;
  std::uint64_t replications = 1;
  std::uint64_t master_seed = 0;
  std::uint64_t record_every = 0;  // 0 = auto
  Vec x0;                          // start point; defaults to the set's center

  std::uint64_t resolved_workers() const;
};

struct ParsedSpec {
  ExperimentSpec spec;  // meaningful only when errors is empty
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

// Parse the flat key-value format ([section] headers, key = value lines,
// '#' comments; values are numbers, "strings", or [lists of numbers]).
// Collects one error per offending key instead of stopping at the first.
ParsedSpec parse_spec_text(const std::string& text);
ParsedSpec parse_spec_file(const std::string& path);

// Canonical text form; parse_spec_text(serialize_spec(s)) reproduces s.
std::string serialize_spec(const ExperimentSpec& spec);

struct RepSummary {
  std::uint64_t run_id = 0;
  bool diverged = false;
  double final_f = 0.0;
  double final_grad_norm_sq = 0.0;
  double final_energy = 0.0;
  double final_dist = 0.0;
  double final_f_ergodic = 0.0;  // f at the step-weighted average iterate
  double wall_seconds = 0.0;
};

struct ExperimentResult {
  std::vector<RepSummary> reps;
  std::vector<double> grid;  // recorded iteration indices
  // Ensemble summaries in output order: f_value, grad_norm_sq, energy,
  // dist_to_opt, b_n_norm, f_ergodic.
  std::vector<std::pair<std::string, EnsembleSummary>> ensembles;
  bool any_diverged = false;
};

// Run `replications` independent simulations (seeds split off master_seed),
// dispatched over a worker pool capped by the DELAYSGD_THREADS environment
// variable.  With a non-empty out_dir writes, per replication, run_<id>.csv
// and trace_<id>.csv, plus ensemble.csv and summary.json.  All CSV bytes are
// a pure function of (spec, master_seed); only summary.json's timing block
// is not.
ExperimentResult run_experiment(const ExperimentSpec& spec, const std::string& out_dir);

// Re-run a single simulation against an externally supplied trace (the
// spec's delay/arch/worker/iteration settings are superseded by the trace).
ExperimentResult replay_experiment(const ExperimentSpec& spec, const Trace& trace,
                                   const std::string& out_dir);

// Coherence grid check over the spec's objective and (bounded) set.
VcReport check_vc_for_spec(const ExperimentSpec& spec, std::size_t grid_per_axis,
                           double tolerance);

// Pairing audit of the spec's schedule and delay model.
CompatReport check_compat_for_spec(const ExperimentSpec& spec, std::uint64_t horizon);

// Worker pool width: min(replications, hardware, DELAYSGD_THREADS).
unsigned experiment_pool_width(std::uint64_t replications);

}  // namespace dsgd
