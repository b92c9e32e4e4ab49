#include "experiment.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "rng.hpp"

namespace dsgd {

// ------------------------------------------------------------------ parsing

namespace {

struct CfgValue {
  enum class Type { number, string, list };
  Type type = Type::number;
  double num = 0.0;
  std::string str;
  std::vector<double> list;
  std::size_t line = 0;
};

struct RawCfg {
  std::map<std::string, CfgValue> values;  // "section.key" -> value
  std::vector<std::string> errors;
};

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// strip a trailing comment, respecting double quotes
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

bool parse_number(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

RawCfg tokenize(const std::string& text) {
  RawCfg raw;
  std::istringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        raw.errors.push_back("line " + std::to_string(lineno) + ": unterminated section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        raw.errors.push_back("line " + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      raw.errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) {
      raw.errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
      continue;
    }
    const std::string path = section.empty() ? key : section + "." + key;
    if (raw.values.count(path)) {
      raw.errors.push_back(path + ": duplicate key (line " + std::to_string(lineno) + ")");
      continue;
    }

    CfgValue v;
    v.line = lineno;
    if (val.front() == '"') {
      if (val.size() < 2 || val.back() != '"') {
        raw.errors.push_back(path + ": unterminated string");
        continue;
      }
      v.type = CfgValue::Type::string;
      v.str = val.substr(1, val.size() - 2);
    } else if (val.front() == '[') {
      if (val.back() != ']') {
        raw.errors.push_back(path + ": unterminated list");
        continue;
      }
      v.type = CfgValue::Type::list;
      std::string body = val.substr(1, val.size() - 2);
      std::istringstream items(body);
      std::string item;
      bool bad = false;
      while (std::getline(items, item, ',')) {
        double d;
        if (!parse_number(item, d)) {
          raw.errors.push_back(path + ": list entries must be numbers");
          bad = true;
          break;
        }
        v.list.push_back(d);
      }
      if (bad) continue;
      if (v.list.empty() && !trim(body).empty()) {
        raw.errors.push_back(path + ": malformed list");
        continue;
      }
    } else {
      if (!parse_number(val, v.num)) {
        raw.errors.push_back(path + ": expected a number, \"string\", or [list]");
        continue;
      }
      v.type = CfgValue::Type::number;
    }
    raw.values.emplace(path, std::move(v));
  }
  return raw;
}

// Typed access helpers; every failure lands in `errors` under the key path.
class CfgReader {
 public:
  CfgReader(RawCfg raw) : raw_(std::move(raw)), errors_(raw_.errors) {}

  bool has(const std::string& path) const { return raw_.values.count(path) != 0; }

  std::optional<std::string> get_string(const std::string& path) {
    const CfgValue* v = fetch(path);
    if (!v) return std::nullopt;
    if (v->type != CfgValue::Type::string) {
      errors_.push_back(path + ": expected a quoted string");
      return std::nullopt;
    }
    return v->str;
  }

  std::optional<double> get_number(const std::string& path) {
    const CfgValue* v = fetch(path);
    if (!v) return std::nullopt;
    if (v->type != CfgValue::Type::number) {
      errors_.push_back(path + ": expected a number");
      return std::nullopt;
    }
    return v->num;
  }

  std::optional<std::uint64_t> get_uint(const std::string& path) {
    const auto d = get_number(path);
    if (!d) return std::nullopt;
    if (!(*d >= 0.0) || *d != std::floor(*d) || *d > 9.007199254740992e15) {
      errors_.push_back(path + ": expected a nonnegative integer");
      return std::nullopt;
    }
    return static_cast<std::uint64_t>(*d);
  }

  // scalar broadcast or explicit list of length dim
  std::optional<Vec> get_vector(const std::string& path, std::size_t dim) {
    const CfgValue* v = fetch(path);
    if (!v) return std::nullopt;
    if (v->type == CfgValue::Type::number) return Vec(dim, v->num);
    if (v->type == CfgValue::Type::list) {
      if (v->list.size() != dim) {
        errors_.push_back(path + ": list length " + std::to_string(v->list.size()) +
                          " does not match dim " + std::to_string(dim));
        return std::nullopt;
      }
      return v->list;
    }
    errors_.push_back(path + ": expected a number or [list]");
    return std::nullopt;
  }

  void require(const std::string& path) {
    if (!has(path)) errors_.push_back(path + ": required key is missing");
  }

  void finish_unknown_keys(const std::set<std::string>& known) {
    for (const auto& [path, v] : raw_.values)
      if (!known.count(path) && !consumed_.count(path))
        errors_.push_back(path + ": unknown key");
  }

  std::vector<std::string>& errors() { return errors_; }

 private:
  const CfgValue* fetch(const std::string& path) {
    auto it = raw_.values.find(path);
    if (it == raw_.values.end()) return nullptr;
    consumed_.insert(path);
    return &it->second;
  }

  RawCfg raw_;
  std::vector<std::string>& errors_;
  std::set<std::string> consumed_;
};

const std::set<std::string> kKnownKeys = {
    "objective.name", "objective.dim",
    "noise.kind", "noise.sigma",
    "set.kind", "set.lo", "set.hi", "set.center", "set.radius",
    "schedule.kind", "schedule.c", "schedule.offset",
    "delay.kind", "delay.d", "delay.workers", "delay.p", "delay.q", "delay.coef",
    "delay.rate", "delay.jitter_seed",
    "run.arch", "run.workers", "run.iterations", "run.replications",
    "run.master_seed", "run.record_every", "run.x0",
};

}  // namespace

ParsedSpec parse_spec_text(const std::string& text) {
  ParsedSpec out;
  CfgReader cfg(tokenize(text));
  ExperimentSpec& spec = out.spec;

  cfg.require("objective.name");
  cfg.require("objective.dim");
  cfg.require("schedule.kind");
  cfg.require("schedule.c");
  cfg.require("run.iterations");

  if (auto name = cfg.get_string("objective.name")) spec.objective_name = *name;
  if (auto dim = cfg.get_uint("objective.dim")) spec.dim = *dim;

  // instantiating the objective validates name/dim compatibility
  if (!spec.objective_name.empty() && spec.dim > 0) {
    try {
      make_test_objective(spec.objective_name, spec.dim);
    } catch (const std::invalid_argument& ex) {
      cfg.errors().push_back(std::string("objective: ") + ex.what());
    }
  }

  // noise
  {
    std::string kind = "none";
    if (auto k = cfg.get_string("noise.kind")) kind = *k;
    const double sigma = cfg.get_number("noise.sigma").value_or(1.0);
    if (kind == "none") {
      spec.noise = NoiseModel::none();
      if (cfg.has("noise.sigma"))
        cfg.errors().push_back("noise.sigma: meaningless without gaussian_additive noise");
    } else if (kind == "gaussian_additive") {
      try {
        spec.noise = NoiseModel::gaussian(sigma);
      } catch (const std::invalid_argument& ex) {
        cfg.errors().push_back(ex.what());
      }
    } else {
      cfg.errors().push_back("noise.kind: unknown kind '" + kind + "'");
    }
  }

  // feasible set (needs dim)
  if (spec.dim > 0) {
    std::string kind = "all_space";
    if (auto k = cfg.get_string("set.kind")) kind = *k;
    try {
      if (kind == "all_space") {
        spec.set = FeasibleSet::all(spec.dim);
      } else if (kind == "box") {
        auto lo = cfg.get_vector("set.lo", spec.dim);
        auto hi = cfg.get_vector("set.hi", spec.dim);
        if (!cfg.has("set.lo")) cfg.errors().push_back("set.lo: required for a box set");
        if (!cfg.has("set.hi")) cfg.errors().push_back("set.hi: required for a box set");
        if (lo && hi) spec.set = FeasibleSet::make_box(*lo, *hi);
      } else if (kind == "ball") {
        auto center = cfg.get_vector("set.center", spec.dim);
        if (!cfg.has("set.center")) center = Vec(spec.dim, 0.0);
        auto radius = cfg.get_number("set.radius");
        if (!radius) cfg.errors().push_back("set.radius: required for a ball set");
        if (center && radius) spec.set = FeasibleSet::make_ball(*center, *radius);
      } else {
        cfg.errors().push_back("set.kind: unknown kind '" + kind + "'");
      }
    } catch (const std::invalid_argument& ex) {
      cfg.errors().push_back(ex.what());
    }
  }

  // schedule
  {
    std::string kind;
    if (auto k = cfg.get_string("schedule.kind")) kind = *k;
    const double c = cfg.get_number("schedule.c").value_or(1.0);
    const std::int64_t offset =
        static_cast<std::int64_t>(cfg.get_uint("schedule.offset").value_or(2));
    try {
      if (kind == "constant") {
        spec.schedule = StepSchedule::constant(c);
        if (cfg.has("schedule.offset"))
          cfg.errors().push_back("schedule.offset: meaningless for a constant schedule");
      } else if (kind == "inv_n") {
        spec.schedule = StepSchedule::inv_n(c, offset);
      } else if (kind == "inv_nlogn") {
        spec.schedule = StepSchedule::inv_nlogn(c, offset);
      } else if (kind == "inv_nlogn_loglogn") {
        spec.schedule = StepSchedule::inv_nlogn_loglogn(c, offset);
      } else if (!kind.empty()) {
        cfg.errors().push_back("schedule.kind: unknown kind '" + kind + "'");
      }
    } catch (const std::invalid_argument& ex) {
      cfg.errors().push_back(ex.what());
    }
  }

  // delay model
  {
    std::string kind = "none";
    if (auto k = cfg.get_string("delay.kind")) kind = *k;
    try {
      if (kind == "none") {
        spec.delay = DelayModel::none();
      } else if (kind == "constant") {
        if (!cfg.has("delay.d")) cfg.errors().push_back("delay.d: required for constant delays");
        spec.delay = DelayModel::constant(cfg.get_uint("delay.d").value_or(0));
      } else if (kind == "round_robin") {
        if (!cfg.has("delay.workers"))
          cfg.errors().push_back("delay.workers: required for round_robin delays");
        spec.delay = DelayModel::round_robin(cfg.get_uint("delay.workers").value_or(1));
      } else if (kind == "sublinear") {
        if (!cfg.has("delay.p")) cfg.errors().push_back("delay.p: required for sublinear delays");
        spec.delay = DelayModel::sublinear(cfg.get_number("delay.p").value_or(0.5),
                                           cfg.get_number("delay.coef").value_or(1.0));
      } else if (kind == "linear") {
        spec.delay = DelayModel::linear(cfg.get_number("delay.coef").value_or(1.0));
      } else if (kind == "polynomial") {
        if (!cfg.has("delay.q")) cfg.errors().push_back("delay.q: required for polynomial delays");
        spec.delay = DelayModel::polynomial(cfg.get_number("delay.q").value_or(1.0),
                                            cfg.get_number("delay.coef").value_or(1.0));
      } else if (kind == "random_linear") {
        spec.delay = DelayModel::random_linear(cfg.get_number("delay.rate").value_or(0.1),
                                               cfg.get_uint("delay.jitter_seed").value_or(0));
      } else {
        cfg.errors().push_back("delay.kind: unknown kind '" + kind + "'");
      }
    } catch (const std::invalid_argument& ex) {
      cfg.errors().push_back(ex.what());
    }
  }

  // run block
  {
    std::string arch = "master_worker";
    if (auto a = cfg.get_string("run.arch")) arch = *a;
    if (auto parsed = arch_from_name(arch))
      spec.arch = *parsed;
    else
      cfg.errors().push_back("run.arch: unknown arch '" + arch + "'");

    spec.workers = cfg.get_uint("run.workers").value_or(0);
    spec.iterations = cfg.get_uint("run.iterations").value_or(0);
    spec.replications = cfg.get_uint("run.replications").value_or(1);
    if (spec.replications == 0)
      cfg.errors().push_back("run.replications: must be >= 1");
    spec.master_seed = cfg.get_uint("run.master_seed").value_or(0);
    spec.record_every = cfg.get_uint("run.record_every").value_or(0);

    if (spec.dim > 0) {
      if (cfg.has("run.x0")) {
        if (auto x0 = cfg.get_vector("run.x0", spec.dim)) spec.x0 = *x0;
      } else if (spec.set.dim == spec.dim) {
        switch (spec.set.kind) {  // default start: the set's center
          case FeasibleSet::Kind::all_space:
            spec.x0 = Vec(spec.dim, 0.0);
            break;
          case FeasibleSet::Kind::box: {
            spec.x0.resize(spec.dim);
            for (std::size_t i = 0; i < spec.dim; ++i)
              spec.x0[i] = 0.5 * (spec.set.lo[i] + spec.set.hi[i]);
            break;
          }
          case FeasibleSet::Kind::ball:
            spec.x0 = spec.set.center;
            break;
        }
      }
    }
  }

  cfg.finish_unknown_keys(kKnownKeys);
  out.errors = cfg.errors();
  return out;
}

ParsedSpec parse_spec_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ParsedSpec out;
    out.errors.push_back("cannot open spec file: " + path);
    return out;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec_text(buf.str());
}

std::uint64_t ExperimentSpec::resolved_workers() const {
  if (workers > 0) return workers;
  switch (delay.kind) {
    case DelayModel::Kind::none:
      return 1;
    case DelayModel::Kind::constant:
      return delay.D + 1;
    case DelayModel::Kind::round_robin:
      return delay.ring;
    default:
      return 4;
  }
}

// --------------------------------------------------------------- serialization

namespace {

std::string fmt_vec(const Vec& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_double(v[i]);
  }
  return s + "]";
}

}  // namespace

std::string serialize_spec(const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "[objective]\n";
  out << "name = \"" << spec.objective_name << "\"\n";
  out << "dim = " << spec.dim << "\n\n";

  out << "[noise]\n";
  if (spec.noise.kind == NoiseModel::Kind::none) {
    out << "kind = \"none\"\n\n";
  } else {
    out << "kind = \"gaussian_additive\"\n";
    out << "sigma = " << format_double(spec.noise.sigma) << "\n\n";
  }

  out << "[set]\n";
  switch (spec.set.kind) {
    case FeasibleSet::Kind::all_space:
      out << "kind = \"all_space\"\n\n";
      break;
    case FeasibleSet::Kind::box:
      out << "kind = \"box\"\n";
      out << "lo = " << fmt_vec(spec.set.lo) << "\n";
      out << "hi = " << fmt_vec(spec.set.hi) << "\n\n";
      break;
    case FeasibleSet::Kind::ball:
      out << "kind = \"ball\"\n";
      out << "center = " << fmt_vec(spec.set.center) << "\n";
      out << "radius = " << format_double(spec.set.radius) << "\n\n";
      break;
  }

  out << "[schedule]\n";
  out << "kind = \"" << spec.schedule.kind_name() << "\"\n";
  out << "c = " << format_double(spec.schedule.c) << "\n";
  if (spec.schedule.kind != StepSchedule::Kind::constant)
    out << "offset = " << spec.schedule.offset << "\n";
  out << "\n[delay]\n";
  out << "kind = \"" << spec.delay.kind_name() << "\"\n";
  switch (spec.delay.kind) {
    case DelayModel::Kind::none:
      break;
    case DelayModel::Kind::constant:
      out << "d = " << spec.delay.D << "\n";
      break;
    case DelayModel::Kind::round_robin:
      out << "workers = " << spec.delay.ring << "\n";
      break;
    case DelayModel::Kind::sublinear:
      out << "p = " << format_double(spec.delay.p) << "\n";
      out << "coef = " << format_double(spec.delay.coef) << "\n";
      break;
    case DelayModel::Kind::linear:
      out << "coef = " << format_double(spec.delay.coef) << "\n";
      break;
    case DelayModel::Kind::polynomial:
      out << "q = " << format_double(spec.delay.q) << "\n";
      out << "coef = " << format_double(spec.delay.coef) << "\n";
      break;
    case DelayModel::Kind::random_linear:
      out << "rate = " << format_double(spec.delay.rate) << "\n";
      out << "jitter_seed = " << spec.delay.jitter_seed << "\n";
      break;
  }

  out << "\n[run]\n";
  out << "arch = \"" << arch_name(spec.arch) << "\"\n";
  if (spec.workers > 0) out << "workers = " << spec.workers << "\n";
  out << "iterations = " << spec.iterations << "\n";
  out << "replications = " << spec.replications << "\n";
  out << "master_seed = " << spec.master_seed << "\n";
  if (spec.record_every > 0) out << "record_every = " << spec.record_every << "\n";
  if (!spec.x0.empty()) out << "x0 = " << fmt_vec(spec.x0) << "\n";
  return out.str();
}

// ------------------------------------------------------------------- running

unsigned experiment_pool_width(std::uint64_t replications) {
  unsigned width = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DELAYSGD_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && cap >= 1) width = std::min<unsigned long>(width, cap);
  }
  return static_cast<unsigned>(
      std::min<std::uint64_t>(width, std::max<std::uint64_t>(1, replications)));
}

namespace {

void write_run_csv(const std::string& path, std::uint64_t run_id, const RunResult& run) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "run_id,n,alpha_n,s_n,f_value,grad_norm_sq,energy,dist_to_opt,b_n_norm\n";
  for (const RunRow& r : run.rows) {
    out << run_id << ',' << r.n << ',' << format_double(r.alpha) << ',' << r.s << ','
        << format_double(r.f) << ',' << format_double(r.grad_norm_sq) << ','
        << format_double(r.energy) << ',' << format_double(r.dist_to_opt) << ','
        << format_double(r.b_norm) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

std::string zero_pad(std::uint64_t v, int width = 3) {
  std::string s = std::to_string(v);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

struct RepSeries {
  std::vector<double> metric[6];  // f, grad^2, energy, dist, b, f_ergodic
};

constexpr const char* kEnsembleNames[6] = {"f_value",     "grad_norm_sq", "energy",
                                           "dist_to_opt", "b_n_norm",     "f_ergodic"};

std::string iso_utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::tm tm_utc;
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

ExperimentResult run_reps(const ExperimentSpec& spec, const std::string& out_dir,
                          const Trace* fixed_trace) {
  if (spec.dim == 0) throw std::invalid_argument("experiment: spec is incomplete");
  const Objective obj = make_test_objective(spec.objective_name, spec.dim);
  if (spec.set.dim != spec.dim)
    throw std::invalid_argument("experiment: set/objective dimension mismatch");
  Vec x0 = spec.x0;
  if (x0.empty()) x0 = Vec(spec.dim, 0.0);
  require_dim(x0, spec.dim, "run.x0");

  const std::uint64_t n_reps = fixed_trace ? 1 : spec.replications;
  const std::uint64_t k_workers = spec.resolved_workers();

  ExperimentResult result;
  result.reps.resize(n_reps);
  std::vector<RepSeries> series(n_reps);
  std::vector<std::string> failures(n_reps);

  std::atomic<std::uint64_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::uint64_t r = next.fetch_add(1);
      if (r >= n_reps) return;
      try {
        RunConfig cfg;
        cfg.objective = obj;
        cfg.noise = spec.noise;
        cfg.set = spec.set;
        cfg.schedule = spec.schedule;
        cfg.trace = fixed_trace
                        ? *fixed_trace
                        : gen_trace(spec.delay, spec.arch, k_workers, spec.iterations,
                                    derive_seed(spec.master_seed, kStreamReplication, r));
        cfg.y0 = x0;
        cfg.record_every = spec.record_every;
        cfg.record_iterates = true;

        if (!out_dir.empty())
          save_trace_csv(cfg.trace, out_dir + "/trace_" + zero_pad(r) + ".csv");

        const RunResult run = cfg.set.kind == FeasibleSet::Kind::all_space
                                  ? run_dasgd_unconstrained(cfg)
                                  : run_dasgd_projected(cfg);

        const std::vector<Vec> xbar = ergodic_average(run, spec.schedule);

        RepSeries& s = series[r];
        for (const RunRow& row : run.rows) {
          s.metric[0].push_back(row.f);
          s.metric[1].push_back(row.grad_norm_sq);
          s.metric[2].push_back(row.energy);
          s.metric[3].push_back(row.dist_to_opt);
          s.metric[4].push_back(row.b_norm);
        }
        for (const Vec& xb : xbar) s.metric[5].push_back(obj.eval(xb));

        RepSummary& sum = result.reps[r];
        sum.run_id = r;
        sum.diverged = run.diverged;
        sum.wall_seconds = run.wall_seconds;
        sum.final_f = obj.eval(run.final_x);
        sum.final_grad_norm_sq = norm2_sq(obj.mean_grad(run.final_x));
        sum.final_energy = run.rows.empty() ? 0.0 : run.rows.back().energy;
        {
          double best = std::numeric_limits<double>::infinity();
          for (const Vec& p : obj.optima) best = std::min(best, dist2(run.final_x, p));
          sum.final_dist = obj.optima.empty()
                               ? std::numeric_limits<double>::quiet_NaN()
                               : best;
        }
        sum.final_f_ergodic = xbar.empty() ? sum.final_f : obj.eval(xbar.back());

        if (r == 0) {
          result.grid.reserve(run.rows.size());
          for (const RunRow& row : run.rows) result.grid.push_back(static_cast<double>(row.n));
        }
        if (!out_dir.empty())
          write_run_csv(out_dir + "/run_" + zero_pad(r) + ".csv", r, run);
      } catch (const std::exception& ex) {
        failures[r] = ex.what();
      }
    }
  };

  const unsigned width = experiment_pool_width(n_reps);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w + 1 < width; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  for (std::uint64_t r = 0; r < n_reps; ++r)
    if (!failures[r].empty())
      throw std::runtime_error("replication " + std::to_string(r) + ": " + failures[r]);

  for (const RepSummary& s : result.reps) result.any_diverged |= s.diverged;

  // A diverged replication is cut short; aggregate over the common prefix.
  std::size_t n_rows = series.empty() ? 0 : series[0].metric[0].size();
  for (const RepSeries& s : series) n_rows = std::min(n_rows, s.metric[0].size());
  result.grid.resize(n_rows);

  for (int m = 0; m < 6; ++m) {
    EnsembleSummary es;
    es.n = result.grid;
    es.mean.resize(n_rows);
    es.median.resize(n_rows);
    es.min.resize(n_rows);
    es.max.resize(n_rows);
    std::vector<double> vals(n_reps);
    for (std::size_t j = 0; j < n_rows; ++j) {
      for (std::uint64_t r = 0; r < n_reps; ++r) vals[r] = series[r].metric[m][j];
      double acc = 0.0, lo = vals[0], hi = vals[0];
      for (double v : vals) {
        acc += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      es.mean[j] = acc / static_cast<double>(n_reps);
      es.min[j] = lo;
      es.max[j] = hi;
      std::vector<double> sorted = vals;
      std::sort(sorted.begin(), sorted.end());
      es.median[j] = n_reps % 2 ? sorted[n_reps / 2]
                                : 0.5 * (sorted[n_reps / 2 - 1] + sorted[n_reps / 2]);
    }
    result.ensembles.emplace_back(kEnsembleNames[m], std::move(es));
  }

  if (!out_dir.empty()) {
    {
      std::ofstream out(out_dir + "/ensemble.csv", std::ios::binary);
      if (!out) throw IoError("cannot open for writing: " + out_dir + "/ensemble.csv");
      out << "metric,n,mean,median,min,max\n";
      for (const auto& [name, es] : result.ensembles)
        for (std::size_t j = 0; j < es.n.size(); ++j)
          out << name << ',' << static_cast<std::uint64_t>(es.n[j]) << ','
              << format_double(es.mean[j]) << ',' << format_double(es.median[j]) << ','
              << format_double(es.min[j]) << ',' << format_double(es.max[j]) << '\n';
    }
    {
      nlohmann::ordered_json j;
      j["spec"] = serialize_spec(spec);
      j["replications"] = n_reps;
      j["iterations"] = fixed_trace ? fixed_trace->size() : spec.iterations;
      j["any_diverged"] = result.any_diverged;
      nlohmann::ordered_json reps = nlohmann::ordered_json::array();
      for (const RepSummary& s : result.reps) {
        nlohmann::ordered_json rj;
        rj["run_id"] = s.run_id;
        rj["diverged"] = s.diverged;
        rj["final_f"] = s.final_f;
        rj["final_grad_norm_sq"] = s.final_grad_norm_sq;
        rj["final_energy"] = s.final_energy;
        rj["final_dist_to_opt"] = s.final_dist;
        rj["final_f_ergodic"] = s.final_f_ergodic;
        reps.push_back(rj);
      }
      j["runs"] = reps;
      // timing block: the only part of the output not determined by the spec
      nlohmann::ordered_json timing;
      timing["written_at"] = iso_utc_now();
      double total = 0.0;
      for (const RepSummary& s : result.reps) total += s.wall_seconds;
      timing["total_run_seconds"] = total;
      j["timing"] = timing;

      std::ofstream out(out_dir + "/summary.json", std::ios::binary);
      if (!out) throw IoError("cannot open for writing: " + out_dir + "/summary.json");
      out << j.dump(2) << '\n';
    }
  }
  return result;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, const std::string& out_dir) {
  return run_reps(spec, out_dir, nullptr);
}

ExperimentResult replay_experiment(const ExperimentSpec& spec, const Trace& trace,
                                   const std::string& out_dir) {
  return run_reps(spec, out_dir, &trace);
}

VcReport check_vc_for_spec(const ExperimentSpec& spec, std::size_t grid_per_axis,
                           double tolerance) {
  const Objective obj = make_test_objective(spec.objective_name, spec.dim);
  return check_vc_on_grid(obj, spec.set, grid_per_axis, tolerance);
}

CompatReport check_compat_for_spec(const ExperimentSpec& spec, std::uint64_t horizon) {
  const std::uint64_t n = horizon > 0 ? horizon : std::max<std::uint64_t>(spec.iterations, 1000);
  return compatibility_check(spec.schedule, spec.delay, n, spec.master_seed);
}

}  // namespace dsgd
