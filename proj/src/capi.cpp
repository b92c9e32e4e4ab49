#include "delaysgd/delaysgd.h"

#include <cstring>
#include <string>
#include <vector>

#include "core/analysis.hpp"
#include "core/asynchrony.hpp"
#include "core/engine.hpp"
#include "core/experiment.hpp"
#include "core/geometry.hpp"
#include "core/objectives.hpp"

// ------------------------------------------------------------------ handles

struct dsgd_objective {
  dsgd::Objective obj;
};
struct dsgd_set {
  dsgd::FeasibleSet set;
};
struct dsgd_schedule {
  dsgd::StepSchedule schedule;
};
struct dsgd_delay {
  dsgd::DelayModel model;
};
struct dsgd_trace {
  dsgd::Trace trace;
};
struct dsgd_result {
  dsgd::RunResult run;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
};
struct dsgd_spec {
  dsgd::ExperimentSpec spec;
};
struct dsgd_experiment {
  dsgd::ExperimentResult result;
};

// -------------------------------------------------------------------- errors

namespace {

thread_local std::string g_last_error;

dsgd_status fail(dsgd_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Run `fn` and translate exceptions into status codes.
template <typename Fn>
dsgd_status guarded(Fn&& fn) {
  try {
    fn();
    return DSGD_OK;
  } catch (const std::invalid_argument& ex) {
    return fail(DSGD_ERR_INVALID_ARGUMENT, ex.what());
  } catch (const dsgd::IoError& ex) {
    return fail(DSGD_ERR_IO, ex.what());
  } catch (const dsgd::ParseError& ex) {
    return fail(DSGD_ERR_PARSE, ex.what());
  } catch (const std::exception& ex) {
    return fail(DSGD_ERR_RUNTIME, ex.what());
  } catch (...) {
    return fail(DSGD_ERR_RUNTIME, "unknown error");
  }
}

dsgd_status require(bool ok, const char* message) {
  return ok ? DSGD_OK : fail(DSGD_ERR_INVALID_ARGUMENT, message);
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

dsgd::Vec to_vec(const double* x, uint64_t dim) {
  return dsgd::Vec(x, x + dim);
}

dsgd::NoiseModel noise_from_sigma(double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("noise_sigma: must be >= 0");
  return sigma > 0.0 ? dsgd::NoiseModel::gaussian(sigma) : dsgd::NoiseModel::none();
}

uint64_t integral_param(double v, const char* what) {
  if (!(v >= 0.0) || v != static_cast<double>(static_cast<uint64_t>(v)))
    throw std::invalid_argument(std::string(what) + ": must be a nonnegative integer");
  return static_cast<uint64_t>(v);
}

dsgd_result* wrap_result(dsgd::RunResult run) {
  auto* h = new dsgd_result;
  h->run = std::move(run);
  h->names = {"n",      "alpha_n", "s_n",         "f_value",
              "grad_norm_sq", "energy",  "dist_to_opt", "b_n_norm"};
  h->columns.resize(h->names.size());
  for (auto& c : h->columns) c.reserve(h->run.rows.size());
  for (const dsgd::RunRow& r : h->run.rows) {
    h->columns[0].push_back(static_cast<double>(r.n));
    h->columns[1].push_back(r.alpha);
    h->columns[2].push_back(static_cast<double>(r.s));
    h->columns[3].push_back(r.f);
    h->columns[4].push_back(r.grad_norm_sq);
    h->columns[5].push_back(r.energy);
    h->columns[6].push_back(r.dist_to_opt);
    h->columns[7].push_back(r.b_norm);
  }
  return h;
}

}  // namespace

// --------------------------------------------------------------------- misc

extern "C" {

const char* dsgd_version(void) { return "0.1.0"; }

const char* dsgd_last_error(void) { return g_last_error.c_str(); }

void dsgd_string_free(char* s) { delete[] s; }

// --------------------------------------------------------------- objectives

dsgd_status dsgd_objective_create(const char* name, uint64_t dim, dsgd_objective** out) {
  if (auto st = require(name && out, "objective_create: name and out must be non-NULL"))
    return st;
  return guarded([&] { *out = new dsgd_objective{dsgd::make_test_objective(name, dim)}; });
}

uint64_t dsgd_objective_dim(const dsgd_objective* obj) { return obj ? obj->obj.dim : 0; }

dsgd_status dsgd_objective_eval(const dsgd_objective* obj, const double* x, uint64_t dim,
                                double* out) {
  if (auto st = require(obj && x && out, "objective_eval: NULL argument")) return st;
  return guarded([&] {
    const dsgd::Vec xv = to_vec(x, dim);
    dsgd::require_dim(xv, obj->obj.dim, "objective_eval: x");
    *out = obj->obj.eval(xv);
  });
}

dsgd_status dsgd_objective_grad(const dsgd_objective* obj, const double* x, uint64_t dim,
                                double* out) {
  if (auto st = require(obj && x && out, "objective_grad: NULL argument")) return st;
  return guarded([&] {
    const dsgd::Vec xv = to_vec(x, dim);
    dsgd::require_dim(xv, obj->obj.dim, "objective_grad: x");
    const dsgd::Vec g = obj->obj.mean_grad(xv);
    std::memcpy(out, g.data(), g.size() * sizeof(double));
  });
}

dsgd_status dsgd_objective_sample_grad(const dsgd_objective* obj, const double* x,
                                       uint64_t dim, double sigma, uint64_t seed,
                                       double* out) {
  if (auto st = require(obj && x && out, "objective_sample_grad: NULL argument")) return st;
  return guarded([&] {
    const dsgd::Vec xv = to_vec(x, dim);
    dsgd::require_dim(xv, obj->obj.dim, "objective_sample_grad: x");
    const dsgd::Vec g = dsgd::sample_gradient(obj->obj, noise_from_sigma(sigma), xv, seed);
    std::memcpy(out, g.data(), g.size() * sizeof(double));
  });
}

void dsgd_objective_destroy(dsgd_objective* obj) { delete obj; }

// ------------------------------------------------------------ feasible sets

dsgd_status dsgd_set_create_all(uint64_t dim, dsgd_set** out) {
  if (auto st = require(out != nullptr, "set_create_all: out must be non-NULL")) return st;
  return guarded([&] { *out = new dsgd_set{dsgd::FeasibleSet::all(dim)}; });
}

dsgd_status dsgd_set_create_box(const double* lo, const double* hi, uint64_t dim,
                                dsgd_set** out) {
  if (auto st = require(lo && hi && out, "set_create_box: NULL argument")) return st;
  return guarded([&] {
    *out = new dsgd_set{dsgd::FeasibleSet::make_box(to_vec(lo, dim), to_vec(hi, dim))};
  });
}

dsgd_status dsgd_set_create_ball(const double* center, uint64_t dim, double radius,
                                 dsgd_set** out) {
  if (auto st = require(center && out, "set_create_ball: NULL argument")) return st;
  return guarded(
      [&] { *out = new dsgd_set{dsgd::FeasibleSet::make_ball(to_vec(center, dim), radius)}; });
}

dsgd_status dsgd_set_project(const dsgd_set* set, const double* y, uint64_t dim,
                             double* out) {
  if (auto st = require(set && y && out, "set_project: NULL argument")) return st;
  return guarded([&] {
    const dsgd::Vec yv = to_vec(y, dim);
    dsgd::require_dim(yv, set->set.dim, "set_project: y");
    const dsgd::Vec x = set->set.project(yv);
    std::memcpy(out, x.data(), x.size() * sizeof(double));
  });
}

dsgd_status dsgd_set_energy(const dsgd_set* set, const double* ref, const double* y,
                            uint64_t dim, double* out) {
  if (auto st = require(set && ref && y && out, "set_energy: NULL argument")) return st;
  return guarded([&] {
    const dsgd::Vec rv = to_vec(ref, dim), yv = to_vec(y, dim);
    dsgd::require_dim(rv, set->set.dim, "set_energy: ref");
    dsgd::require_dim(yv, set->set.dim, "set_energy: y");
    if (!set->set.contains(rv))
      throw std::invalid_argument("set_energy: reference point is not feasible");
    *out = dsgd::energy_at(set->set, rv, yv);
  });
}

void dsgd_set_destroy(dsgd_set* set) { delete set; }

// ---------------------------------------------------------------- schedules

dsgd_status dsgd_schedule_create(const char* kind, double c, uint64_t offset,
                                 dsgd_schedule** out) {
  if (auto st = require(kind && out, "schedule_create: NULL argument")) return st;
  return guarded([&] {
    const std::string k = kind;
    const auto off = static_cast<std::int64_t>(offset);
    dsgd::StepSchedule s;
    if (k == "constant")
      s = dsgd::StepSchedule::constant(c);
    else if (k == "inv_n")
      s = dsgd::StepSchedule::inv_n(c, off);
    else if (k == "inv_nlogn")
      s = dsgd::StepSchedule::inv_nlogn(c, off);
    else if (k == "inv_nlogn_loglogn")
      s = dsgd::StepSchedule::inv_nlogn_loglogn(c, off);
    else
      throw std::invalid_argument("schedule_create: unknown kind '" + k + "'");
    *out = new dsgd_schedule{s};
  });
}

dsgd_status dsgd_schedule_step(const dsgd_schedule* schedule, uint64_t n, double* out) {
  if (auto st = require(schedule && out, "schedule_step: NULL argument")) return st;
  return guarded([&] { *out = schedule->schedule.step(n); });
}

void dsgd_schedule_destroy(dsgd_schedule* schedule) { delete schedule; }

// ------------------------------------------------------------- delay models

dsgd_status dsgd_delay_create(const char* kind, double a, double b, dsgd_delay** out) {
  if (auto st = require(kind && out, "delay_create: NULL argument")) return st;
  return guarded([&] {
    const std::string k = kind;
    dsgd::DelayModel m;
    if (k == "none")
      m = dsgd::DelayModel::none();
    else if (k == "constant")
      m = dsgd::DelayModel::constant(integral_param(a, "delay_create: staleness"));
    else if (k == "round_robin")
      m = dsgd::DelayModel::round_robin(integral_param(a, "delay_create: workers"));
    else if (k == "sublinear")
      m = dsgd::DelayModel::sublinear(a, b);
    else if (k == "linear")
      m = dsgd::DelayModel::linear(a);
    else if (k == "polynomial")
      m = dsgd::DelayModel::polynomial(a, b);
    else if (k == "random_linear")
      m = dsgd::DelayModel::random_linear(a, integral_param(b, "delay_create: jitter seed"));
    else
      throw std::invalid_argument("delay_create: unknown kind '" + k + "'");
    *out = new dsgd_delay{m};
  });
}

void dsgd_delay_destroy(dsgd_delay* delay) { delete delay; }

// ------------------------------------------------------------------- traces

dsgd_status dsgd_trace_generate(const dsgd_delay* delay, const char* arch,
                                uint64_t workers, uint64_t iterations, uint64_t seed,
                                dsgd_trace** out) {
  if (auto st = require(delay && arch && out, "trace_generate: NULL argument")) return st;
  return guarded([&] {
    const auto a = dsgd::arch_from_name(arch);
    if (!a)
      throw std::invalid_argument("trace_generate: unknown arch '" + std::string(arch) + "'");
    *out = new dsgd_trace{dsgd::gen_trace(delay->model, *a, workers, iterations, seed)};
  });
}

dsgd_status dsgd_trace_load(const char* path, const char* arch, uint64_t workers,
                            dsgd_trace** out) {
  if (auto st = require(path && out, "trace_load: NULL argument")) return st;
  return guarded([&] {
    std::optional<dsgd::Arch> a;
    if (arch && arch[0]) {
      a = dsgd::arch_from_name(arch);
      if (!a) throw std::invalid_argument("trace_load: unknown arch '" + std::string(arch) + "'");
    }
    std::optional<uint64_t> k;
    if (workers > 0) k = workers;
    *out = new dsgd_trace{dsgd::load_trace_csv(path, a, k)};
  });
}

dsgd_status dsgd_trace_save(const dsgd_trace* trace, const char* path) {
  if (auto st = require(trace && path, "trace_save: NULL argument")) return st;
  return guarded([&] { dsgd::save_trace_csv(trace->trace, path); });
}

uint64_t dsgd_trace_len(const dsgd_trace* trace) { return trace ? trace->trace.size() : 0; }

const char* dsgd_trace_arch(const dsgd_trace* trace) {
  return trace ? dsgd::arch_name(trace->trace.arch) : "";
}

uint64_t dsgd_trace_workers(const dsgd_trace* trace) { return trace ? trace->trace.K : 0; }

dsgd_status dsgd_trace_entry(const dsgd_trace* trace, uint64_t n, uint64_t* source,
                             uint64_t* seed) {
  if (auto st = require(trace != nullptr, "trace_entry: trace must be non-NULL")) return st;
  if (n >= trace->trace.size())
    return fail(DSGD_ERR_INVALID_ARGUMENT, "trace_entry: index out of range");
  if (source) *source = trace->trace.entries[n].s;
  if (seed) *seed = trace->trace.entries[n].seed;
  return DSGD_OK;
}

dsgd_status dsgd_trace_validate(const dsgd_trace* trace, uint64_t* violations,
                                char** report) {
  if (auto st = require(trace && violations, "trace_validate: NULL argument")) return st;
  return guarded([&] {
    const dsgd::TraceCheck check = dsgd::validate_trace(trace->trace);
    *violations = check.violations.size();
    if (report) {
      std::string text;
      for (const auto& v : check.violations) {
        text += "entry " + std::to_string(v.index) + ": " + v.rule + "\n";
      }
      *report = copy_string(text);
    }
  });
}

void dsgd_trace_destroy(dsgd_trace* trace) { delete trace; }

// -------------------------------------------------------------- single runs

dsgd_status dsgd_run(const char* algorithm, const dsgd_objective* obj,
                     const dsgd_set* set, const dsgd_schedule* schedule,
                     const dsgd_trace* trace, const double* y0, uint64_t dim,
                     double noise_sigma, uint64_t record_every, dsgd_result** out) {
  if (auto st = require(algorithm && obj && set && schedule && trace && y0 && out,
                        "run: NULL argument"))
    return st;
  return guarded([&] {
    dsgd::RunConfig cfg;
    cfg.objective = obj->obj;
    cfg.noise = noise_from_sigma(noise_sigma);
    cfg.set = set->set;
    cfg.schedule = schedule->schedule;
    cfg.trace = trace->trace;
    cfg.y0 = to_vec(y0, dim);
    cfg.record_every = record_every;

    const std::string alg = algorithm;
    dsgd::RunResult run;
    if (alg == "dagd")
      run = dsgd::run_dagd(cfg);
    else if (alg == "dasgd")
      run = set->set.kind == dsgd::FeasibleSet::Kind::all_space
                ? dsgd::run_dasgd_unconstrained(cfg)
                : dsgd::run_dasgd_projected(cfg);
    else
      throw std::invalid_argument("run: unknown algorithm '" + alg + "'");
    *out = wrap_result(std::move(run));
  });
}

dsgd_status dsgd_run_threaded(const dsgd_objective* obj, const dsgd_set* set,
                              const dsgd_schedule* schedule, const double* y0,
                              uint64_t dim, double noise_sigma, uint64_t workers,
                              uint64_t iterations, uint64_t master_seed,
                              uint64_t record_every, dsgd_result** out) {
  if (auto st = require(obj && set && schedule && y0 && out, "run_threaded: NULL argument"))
    return st;
  return guarded([&] {
    dsgd::ThreadedConfig cfg;
    cfg.objective = obj->obj;
    cfg.noise = noise_from_sigma(noise_sigma);
    cfg.set = set->set;
    cfg.schedule = schedule->schedule;
    cfg.y0 = to_vec(y0, dim);
    cfg.workers = workers;
    cfg.iterations = iterations;
    cfg.master_seed = master_seed;
    cfg.record_every = record_every;
    *out = wrap_result(dsgd::run_threaded(cfg));
  });
}

uint64_t dsgd_result_rows(const dsgd_result* result) {
  return result ? result->run.rows.size() : 0;
}

dsgd_status dsgd_result_series(const dsgd_result* result, const char* column,
                               const double** data, uint64_t* len) {
  if (auto st = require(result && column && data && len, "result_series: NULL argument"))
    return st;
  for (std::size_t i = 0; i < result->names.size(); ++i) {
    if (result->names[i] == column) {
      *data = result->columns[i].data();
      *len = result->columns[i].size();
      return DSGD_OK;
    }
  }
  return fail(DSGD_ERR_INVALID_ARGUMENT,
              "result_series: unknown column '" + std::string(column) + "'");
}

dsgd_status dsgd_result_final(const dsgd_result* result, double* x, uint64_t dim) {
  if (auto st = require(result && x, "result_final: NULL argument")) return st;
  if (dim != result->run.final_x.size())
    return fail(DSGD_ERR_INVALID_ARGUMENT, "result_final: dimension mismatch");
  std::memcpy(x, result->run.final_x.data(), dim * sizeof(double));
  return DSGD_OK;
}

dsgd_status dsgd_result_final_dual(const dsgd_result* result, double* y, uint64_t dim) {
  if (auto st = require(result && y, "result_final_dual: NULL argument")) return st;
  if (dim != result->run.final_y.size())
    return fail(DSGD_ERR_INVALID_ARGUMENT, "result_final_dual: dimension mismatch");
  std::memcpy(y, result->run.final_y.data(), dim * sizeof(double));
  return DSGD_OK;
}

int dsgd_result_diverged(const dsgd_result* result) {
  return result && result->run.diverged ? 1 : 0;
}

dsgd_status dsgd_result_trace(const dsgd_result* result, dsgd_trace** out) {
  if (auto st = require(result && out, "result_trace: NULL argument")) return st;
  return guarded([&] { *out = new dsgd_trace{result->run.trace}; });
}

void dsgd_result_destroy(dsgd_result* result) { delete result; }

// -------------------------------------------------------------- experiments

dsgd_status dsgd_spec_parse_file(const char* path, dsgd_spec** out) {
  if (auto st = require(path && out, "spec_parse_file: NULL argument")) return st;
  return guarded([&] {
    dsgd::ParsedSpec parsed = dsgd::parse_spec_file(path);
    if (!parsed.ok()) {
      std::string text;
      for (const std::string& e : parsed.errors) text += e + "\n";
      throw dsgd::ParseError(text);
    }
    *out = new dsgd_spec{std::move(parsed.spec)};
  });
}

dsgd_status dsgd_spec_parse_text(const char* text, dsgd_spec** out) {
  if (auto st = require(text && out, "spec_parse_text: NULL argument")) return st;
  return guarded([&] {
    dsgd::ParsedSpec parsed = dsgd::parse_spec_text(text);
    if (!parsed.ok()) {
      std::string msg;
      for (const std::string& e : parsed.errors) msg += e + "\n";
      throw dsgd::ParseError(msg);
    }
    *out = new dsgd_spec{std::move(parsed.spec)};
  });
}

dsgd_status dsgd_spec_to_text(const dsgd_spec* spec, char** out) {
  if (auto st = require(spec && out, "spec_to_text: NULL argument")) return st;
  return guarded([&] { *out = copy_string(dsgd::serialize_spec(spec->spec)); });
}

dsgd_status dsgd_spec_set_seed(dsgd_spec* spec, uint64_t seed) {
  if (auto st = require(spec != nullptr, "spec_set_seed: spec must be non-NULL")) return st;
  spec->spec.master_seed = seed;
  return DSGD_OK;
}

dsgd_status dsgd_spec_set_replications(dsgd_spec* spec, uint64_t replications) {
  if (auto st = require(spec != nullptr, "spec_set_replications: spec must be non-NULL"))
    return st;
  if (replications == 0)
    return fail(DSGD_ERR_INVALID_ARGUMENT, "spec_set_replications: must be >= 1");
  spec->spec.replications = replications;
  return DSGD_OK;
}

void dsgd_spec_destroy(dsgd_spec* spec) { delete spec; }

dsgd_status dsgd_spec_run(const dsgd_spec* spec, const char* out_dir,
                          dsgd_experiment** out) {
  if (auto st = require(spec && out, "spec_run: NULL argument")) return st;
  return guarded([&] {
    *out = new dsgd_experiment{
        dsgd::run_experiment(spec->spec, out_dir ? out_dir : "")};
  });
}

dsgd_status dsgd_spec_replay(const dsgd_spec* spec, const dsgd_trace* trace,
                             const char* out_dir, dsgd_experiment** out) {
  if (auto st = require(spec && trace && out, "spec_replay: NULL argument")) return st;
  return guarded([&] {
    *out = new dsgd_experiment{
        dsgd::replay_experiment(spec->spec, trace->trace, out_dir ? out_dir : "")};
  });
}

uint64_t dsgd_experiment_replications(const dsgd_experiment* exp) {
  return exp ? exp->result.reps.size() : 0;
}

uint64_t dsgd_experiment_points(const dsgd_experiment* exp) {
  return exp ? exp->result.grid.size() : 0;
}

int dsgd_experiment_any_diverged(const dsgd_experiment* exp) {
  return exp && exp->result.any_diverged ? 1 : 0;
}

dsgd_status dsgd_experiment_series(const dsgd_experiment* exp, const char* metric,
                                   const char* stat, const double** data,
                                   uint64_t* len) {
  if (auto st = require(exp && metric && stat && data && len,
                        "experiment_series: NULL argument"))
    return st;
  for (const auto& [name, es] : exp->result.ensembles) {
    if (name != metric) continue;
    const std::string s = stat;
    const std::vector<double>* col = nullptr;
    if (s == "n")
      col = &es.n;
    else if (s == "mean")
      col = &es.mean;
    else if (s == "median")
      col = &es.median;
    else if (s == "min")
      col = &es.min;
    else if (s == "max")
      col = &es.max;
    else
      return fail(DSGD_ERR_INVALID_ARGUMENT,
                  "experiment_series: unknown stat '" + s + "'");
    *data = col->data();
    *len = col->size();
    return DSGD_OK;
  }
  return fail(DSGD_ERR_INVALID_ARGUMENT,
              "experiment_series: unknown metric '" + std::string(metric) + "'");
}

dsgd_status dsgd_experiment_rep(const dsgd_experiment* exp, uint64_t rep,
                                double* final_f, double* final_grad_norm_sq,
                                double* final_energy, double* final_dist_to_opt,
                                double* final_f_ergodic, int* diverged) {
  if (auto st = require(exp != nullptr, "experiment_rep: exp must be non-NULL")) return st;
  if (rep >= exp->result.reps.size())
    return fail(DSGD_ERR_INVALID_ARGUMENT, "experiment_rep: index out of range");
  const dsgd::RepSummary& s = exp->result.reps[rep];
  if (final_f) *final_f = s.final_f;
  if (final_grad_norm_sq) *final_grad_norm_sq = s.final_grad_norm_sq;
  if (final_energy) *final_energy = s.final_energy;
  if (final_dist_to_opt) *final_dist_to_opt = s.final_dist;
  if (final_f_ergodic) *final_f_ergodic = s.final_f_ergodic;
  if (diverged) *diverged = s.diverged ? 1 : 0;
  return DSGD_OK;
}

void dsgd_experiment_destroy(dsgd_experiment* exp) { delete exp; }

// ----------------------------------------------------------------- auditing

dsgd_status dsgd_spec_check_vc(const dsgd_spec* spec, uint64_t grid_per_axis,
                               double tolerance, dsgd_vc_summary* out, char** argmin) {
  if (auto st = require(spec && out, "spec_check_vc: NULL argument")) return st;
  return guarded([&] {
    const dsgd::VcReport report =
        dsgd::check_vc_for_spec(spec->spec, grid_per_axis, tolerance);
    out->checked_points = report.checked_points;
    out->min_inner_product = report.min_inner_product;
    out->violations = report.violations.size();
    out->equality_points = report.equality_points_outside_optima.size();
    out->passes = report.passes() ? 1 : 0;
    if (argmin) {
      std::string text = "[";
      for (std::size_t i = 0; i < report.argmin.size(); ++i) {
        if (i) text += ", ";
        text += dsgd::format_double(report.argmin[i]);
      }
      text += "]";
      *argmin = copy_string(text);
    }
  });
}

dsgd_status dsgd_spec_check_compat(const dsgd_spec* spec, uint64_t horizon,
                                   dsgd_compat_summary* out, char** rule) {
  if (auto st = require(spec && out, "spec_check_compat: NULL argument")) return st;
  return guarded([&] {
    const dsgd::CompatReport report = dsgd::check_compat_for_spec(spec->spec, horizon);
    out->sanctioned = report.sanctioned ? 1 : 0;
    out->s1 = report.s1;
    out->s2 = report.s2;
    out->s1_slope = report.s1_slope;
    out->s2_slope = report.s2_slope;
    out->horizon = report.horizon;
    if (rule) *rule = copy_string(report.rule);
  });
}

}  // extern "C"
