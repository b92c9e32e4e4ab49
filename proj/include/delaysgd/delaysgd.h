/* delaysgd — C API for the delayed-gradient simulation library.
 *
 * Conventions:
 *   - Every fallible call returns a dsgd_status; DSGD_OK is 0.
 *   - On failure, dsgd_last_error() returns a message describing what went
 *     wrong (thread-local; valid until the next failing call on the thread).
 *   - Objects are opaque handles created by *_create / parse / run functions
 *     and released with the matching *_destroy.  Destroy functions accept
 *     NULL and do nothing.
 *   - Strings returned through char** out-parameters are heap copies owned
 *     by the caller; release them with dsgd_string_free.
 *   - const double* series returned through out-parameters are borrowed
 *     views into the handle and stay valid until the handle is destroyed.
 */
#ifndef DELAYSGD_H
#define DELAYSGD_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dsgd_status {
  DSGD_OK = 0,
  DSGD_ERR_INVALID_ARGUMENT = 1, /* bad parameter or inconsistent configuration */
  DSGD_ERR_RUNTIME = 2,          /* computation failed (see dsgd_last_error)     */
  DSGD_ERR_IO = 3,               /* file could not be opened / written           */
  DSGD_ERR_PARSE = 4,            /* malformed spec or trace file                 */
  DSGD_DIVERGED = 5              /* never returned by the library; reserved as a
                                    process exit status for tools that want to
                                    signal a diverged run */
} dsgd_status;

/* Library version, e.g. "0.1.0". */
const char* dsgd_version(void);

/* Message for the most recent failure on this thread ("" if none). */
const char* dsgd_last_error(void);

/* Release a string returned through a char** out-parameter. */
void dsgd_string_free(char* s);

/* ------------------------------------------------------------- objectives */

typedef struct dsgd_objective dsgd_objective;

/* Known names: quadratic (any dim), rosenbrock (dim >= 2), beale (dim == 2),
 * polar (dim == 2), double_well (any dim). */
dsgd_status dsgd_objective_create(const char* name, uint64_t dim, dsgd_objective** out);
uint64_t dsgd_objective_dim(const dsgd_objective* obj);
dsgd_status dsgd_objective_eval(const dsgd_objective* obj, const double* x, uint64_t dim,
                                double* out);
dsgd_status dsgd_objective_grad(const dsgd_objective* obj, const double* x, uint64_t dim,
                                double* out);
/* Gradient plus additive Gaussian noise of scale sigma, driven entirely by
 * `seed` (same seed, same sample, on every platform). sigma = 0 is exact. */
dsgd_status dsgd_objective_sample_grad(const dsgd_objective* obj, const double* x,
                                       uint64_t dim, double sigma, uint64_t seed,
                                       double* out);
void dsgd_objective_destroy(dsgd_objective* obj);

/* ---------------------------------------------------------- feasible sets */

typedef struct dsgd_set dsgd_set;

dsgd_status dsgd_set_create_all(uint64_t dim, dsgd_set** out);
dsgd_status dsgd_set_create_box(const double* lo, const double* hi, uint64_t dim,
                                dsgd_set** out);
dsgd_status dsgd_set_create_ball(const double* center, uint64_t dim, double radius,
                                 dsgd_set** out);
dsgd_status dsgd_set_project(const dsgd_set* set, const double* y, uint64_t dim,
                             double* out);
/* Merit of the (possibly infeasible) point y against the feasible reference
 * point ref; equals |y - ref|^2 when y is feasible, and is always >= 0. */
dsgd_status dsgd_set_energy(const dsgd_set* set, const double* ref, const double* y,
                            uint64_t dim, double* out);
void dsgd_set_destroy(dsgd_set* set);

/* -------------------------------------------------------------- schedules */

typedef struct dsgd_schedule dsgd_schedule;

/* Kinds: constant, inv_n, inv_nlogn, inv_nlogn_loglogn.  `offset` shifts the
 * index (ignored for constant; pass 2 for the default). */
dsgd_status dsgd_schedule_create(const char* kind, double c, uint64_t offset,
                                 dsgd_schedule** out);
/* alpha_n; n >= 1. */
dsgd_status dsgd_schedule_step(const dsgd_schedule* schedule, uint64_t n, double* out);
void dsgd_schedule_destroy(dsgd_schedule* schedule);

/* ------------------------------------------------------------ delay models */

typedef struct dsgd_delay dsgd_delay;

/* Kind-dependent parameters a, b (unused ones are ignored):
 *   none          -
 *   constant      a = staleness D (integer >= 0)
 *   round_robin   a = worker count (integer >= 1)
 *   sublinear     a = exponent p in (0,1),  b = coefficient > 0
 *   linear        a = coefficient > 0
 *   polynomial    a = exponent q >= 1,      b = coefficient > 0
 *   random_linear a = rate > 0,             b = jitter seed (integer >= 0)
 */
dsgd_status dsgd_delay_create(const char* kind, double a, double b, dsgd_delay** out);
void dsgd_delay_destroy(dsgd_delay* delay);

/* ----------------------------------------------------------------- traces */

typedef struct dsgd_trace dsgd_trace;

/* Realize `iterations` update events for the given delay model under an
 * architecture ("master_worker" or "shared_memory") with `workers`
 * processors; `seed` fixes every random choice. */
dsgd_status dsgd_trace_generate(const dsgd_delay* delay, const char* arch,
                                uint64_t workers, uint64_t iterations, uint64_t seed,
                                dsgd_trace** out);
/* Load a trace CSV.  arch ("" or NULL) and workers (0) fall back to the
 * file's "# arch=... k=..." metadata line. */
dsgd_status dsgd_trace_load(const char* path, const char* arch, uint64_t workers,
                            dsgd_trace** out);
dsgd_status dsgd_trace_save(const dsgd_trace* trace, const char* path);
uint64_t dsgd_trace_len(const dsgd_trace* trace);
const char* dsgd_trace_arch(const dsgd_trace* trace); /* static string */
uint64_t dsgd_trace_workers(const dsgd_trace* trace);
dsgd_status dsgd_trace_entry(const dsgd_trace* trace, uint64_t n, uint64_t* source,
                             uint64_t* seed);
/* Structural audit.  *violations receives the violation count; if report is
 * non-NULL it receives one "entry <i>: <rule>" line per violation (empty
 * string when the trace is clean). */
dsgd_status dsgd_trace_validate(const dsgd_trace* trace, uint64_t* violations,
                                char** report);
void dsgd_trace_destroy(dsgd_trace* trace);

/* ------------------------------------------------------------ single runs */

typedef struct dsgd_result dsgd_result;

/* One simulated run of `algorithm`:
 *   "dagd"   exact gradients (noise_sigma must be 0); any set
 *   "dasgd"  stochastic run; unconstrained on an all-space set, lazily
 *            projected otherwise
 * The trace fixes which past iterate each update reads and the per-update
 * noise seeds, so a (configuration, trace) pair reproduces the run bit for
 * bit.  noise_sigma > 0 adds Gaussian noise of that scale; 0 runs exact.
 * record_every = 0 records every step below 1e5 iterations, every 10th
 * above. */
dsgd_status dsgd_run(const char* algorithm, const dsgd_objective* obj,
                     const dsgd_set* set, const dsgd_schedule* schedule,
                     const dsgd_trace* trace, const double* y0, uint64_t dim,
                     double noise_sigma, uint64_t record_every, dsgd_result** out);

/* Run with real threads: `workers` threads race on the shared state, and the
 * realized interleaving is recorded as a trace (retrievable from the result)
 * that replays the run exactly through dsgd_run. */
dsgd_status dsgd_run_threaded(const dsgd_objective* obj, const dsgd_set* set,
                              const dsgd_schedule* schedule, const double* y0,
                              uint64_t dim, double noise_sigma, uint64_t workers,
                              uint64_t iterations, uint64_t master_seed,
                              uint64_t record_every, dsgd_result** out);

uint64_t dsgd_result_rows(const dsgd_result* result);
/* Borrowed column view; columns: n, alpha_n, s_n, f_value, grad_norm_sq,
 * energy, dist_to_opt, b_n_norm. */
dsgd_status dsgd_result_series(const dsgd_result* result, const char* column,
                               const double** data, uint64_t* len);
dsgd_status dsgd_result_final(const dsgd_result* result, double* x, uint64_t dim);
dsgd_status dsgd_result_final_dual(const dsgd_result* result, double* y, uint64_t dim);
int dsgd_result_diverged(const dsgd_result* result);
/* Copy of the trace the run consumed (or, for threaded runs, produced). */
dsgd_status dsgd_result_trace(const dsgd_result* result, dsgd_trace** out);
void dsgd_result_destroy(dsgd_result* result);

/* ------------------------------------------------------------ experiments */

typedef struct dsgd_spec dsgd_spec;
typedef struct dsgd_experiment dsgd_experiment;

/* Parse an experiment spec (.cfg).  On DSGD_ERR_PARSE, dsgd_last_error()
 * lists every offending key, one per line. */
dsgd_status dsgd_spec_parse_file(const char* path, dsgd_spec** out);
dsgd_status dsgd_spec_parse_text(const char* text, dsgd_spec** out);
/* Canonical text form; parsing it reproduces the spec. */
dsgd_status dsgd_spec_to_text(const dsgd_spec* spec, char** out);
dsgd_status dsgd_spec_set_seed(dsgd_spec* spec, uint64_t seed);
dsgd_status dsgd_spec_set_replications(dsgd_spec* spec, uint64_t replications);
void dsgd_spec_destroy(dsgd_spec* spec);

/* Run the spec's replications (seeds split deterministically off the master
 * seed).  out_dir ("" or NULL = write nothing) receives run_<id>.csv and
 * trace_<id>.csv per replication plus ensemble.csv and summary.json; every
 * CSV byte is a pure function of the spec. */
dsgd_status dsgd_spec_run(const dsgd_spec* spec, const char* out_dir,
                          dsgd_experiment** out);
/* Re-run a single replication against an externally supplied trace. */
dsgd_status dsgd_spec_replay(const dsgd_spec* spec, const dsgd_trace* trace,
                             const char* out_dir, dsgd_experiment** out);

uint64_t dsgd_experiment_replications(const dsgd_experiment* exp);
uint64_t dsgd_experiment_points(const dsgd_experiment* exp);
int dsgd_experiment_any_diverged(const dsgd_experiment* exp);
/* Borrowed ensemble series; metric: f_value, grad_norm_sq, energy,
 * dist_to_opt, b_n_norm, f_ergodic; stat: n, mean, median, min, max. */
dsgd_status dsgd_experiment_series(const dsgd_experiment* exp, const char* metric,
                                   const char* stat, const double** data,
                                   uint64_t* len);
/* Final-state summary of one replication; any output pointer may be NULL. */
dsgd_status dsgd_experiment_rep(const dsgd_experiment* exp, uint64_t rep,
                                double* final_f, double* final_grad_norm_sq,
                                double* final_energy, double* final_dist_to_opt,
                                double* final_f_ergodic, int* diverged);
void dsgd_experiment_destroy(dsgd_experiment* exp);

/* --------------------------------------------------------------- auditing */

typedef struct dsgd_vc_summary {
  uint64_t checked_points;
  double min_inner_product; /* min over the grid of <grad f(x), x - x*>      */
  uint64_t violations;      /* points with inner product < -tolerance        */
  uint64_t equality_points; /* |inner| <= tolerance away from every minimizer */
  int passes;               /* no violations (equality points are reported,
                               not failed, since a vanishing gradient may be
                               legitimate at an unlisted stationary point)   */
} dsgd_vc_summary;

/* Grid audit of the spec's objective over its (bounded) feasible set: checks
 * that every gradient points away from the minimizers.  If argmin is
 * non-NULL it receives the worst grid point as a bracketed vector string. */
dsgd_status dsgd_spec_check_vc(const dsgd_spec* spec, uint64_t grid_per_axis,
                               double tolerance, dsgd_vc_summary* out, char** argmin);

typedef struct dsgd_compat_summary {
  int sanctioned;   /* schedule/delay pairing is covered by a guarantee */
  double s1;        /* sum of squared steps up to the horizon           */
  double s2;        /* step-weighted staleness sum up to the horizon    */
  double s1_slope;  /* last-decade log-log slope of the S1 curve        */
  double s2_slope;  /* last-decade log-log slope of the S2 curve        */
  uint64_t horizon;
} dsgd_compat_summary;

/* Audit the spec's step-size/delay pairing over `horizon` iterations
 * (0 = max(spec iterations, 1000); must resolve to >= 1000).  If rule is
 * non-NULL it receives the name of the matched pairing. */
dsgd_status dsgd_spec_check_compat(const dsgd_spec* spec, uint64_t horizon,
                                   dsgd_compat_summary* out, char** rule);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DELAYSGD_H */
