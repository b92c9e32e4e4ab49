#include "geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dsgd {

FeasibleSet FeasibleSet::all(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("set.dim: must be >= 1");
  FeasibleSet s;
  s.kind = Kind::all_space;
  s.dim = dim;
  return s;
}

FeasibleSet FeasibleSet::make_box(Vec lo, Vec hi) {
  if (lo.empty() || lo.size() != hi.size())
    throw std::invalid_argument("set.box: lo and hi must share a nonzero dimension");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i]))
      throw std::invalid_argument("set.box: lo must be strictly below hi in every coordinate");
  FeasibleSet s;
  s.kind = Kind::box;
  s.dim = lo.size();
  s.lo = std::move(lo);
  s.hi = std::move(hi);
  return s;
}

FeasibleSet FeasibleSet::make_ball(Vec center, double radius) {
  if (center.empty())
    throw std::invalid_argument("set.ball: center must have dimension >= 1");
  if (!(radius > 0.0))
    throw std::invalid_argument("set.ball: radius must be > 0");
  FeasibleSet s;
  s.kind = Kind::ball;
  s.dim = center.size();
  s.center = std::move(center);
  s.radius = radius;
  return s;
}

Vec FeasibleSet::project(const Vec& y) const {
  require_dim(y, dim, "project");
  switch (kind) {
    case Kind::all_space:
      return y;
    case Kind::box: {
      Vec x(dim);
      for (std::size_t i = 0; i < dim; ++i)
        x[i] = std::min(std::max(y[i], lo[i]), hi[i]);
      return x;
    }
    case Kind::ball: {
      Vec d(dim);
      for (std::size_t i = 0; i < dim; ++i) d[i] = y[i] - center[i];
      const double n = norm2(d);
      if (n <= radius) return y;
      Vec x(dim);
      const double scale = radius / n;
      for (std::size_t i = 0; i < dim; ++i) x[i] = center[i] + scale * d[i];
      return x;
    }
  }
  throw std::logic_error("project: unreachable");
}

bool FeasibleSet::contains(const Vec& x, double tol) const {
  require_dim(x, dim, "contains");
  switch (kind) {
    case Kind::all_space:
      return true;
    case Kind::box:
      for (std::size_t i = 0; i < dim; ++i)
        if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
      return true;
    case Kind::ball: {
      Vec d(dim);
      for (std::size_t i = 0; i < dim; ++i) d[i] = x[i] - center[i];
      return norm2(d) <= radius + tol;
    }
  }
  return false;
}

std::optional<double> FeasibleSet::diameter() const {
  switch (kind) {
    case Kind::all_space:
      return std::nullopt;
    case Kind::box:
      return dist2(lo, hi);
    case Kind::ball:
      return 2.0 * radius;
  }
  return std::nullopt;
}

EnergyContext::EnergyContext(FeasibleSet s, std::vector<Vec> opts)
    : set(std::move(s)), optima(std::move(opts)) {
  if (optima.empty())
    throw std::invalid_argument("energy: need at least one reference point");
  for (const Vec& p : optima) {
    require_dim(p, set.dim, "energy reference point");
    if (dist2(set.project(p), p) > 1e-12)
      throw std::invalid_argument("energy: reference point is not feasible");
  }
}

double energy_at(const FeasibleSet& set, const Vec& ref, const Vec& y) {
  const Vec x = set.project(y);
  double inner = 0.0;
  for (std::size_t i = 0; i < set.dim; ++i) inner += y[i] * (x[i] - ref[i]);
  return norm2_sq(ref) - norm2_sq(x) + 2.0 * inner;
}

double energy(const EnergyContext& ctx, const Vec& y) {
  require_dim(y, ctx.set.dim, "energy");
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& p : ctx.optima) best = std::min(best, energy_at(ctx.set, p, y));
  return best;
}

double energy_perturbation_gap(const FeasibleSet& set, const Vec& ref,
                               const Vec& y, const Vec& dy) {
  require_dim(y, set.dim, "energy_perturbation_gap");
  require_dim(dy, set.dim, "energy_perturbation_gap");
  const Vec x = set.project(y);
  Vec y2(set.dim);
  for (std::size_t i = 0; i < set.dim; ++i) y2[i] = y[i] + dy[i];
  double inner = 0.0;
  for (std::size_t i = 0; i < set.dim; ++i) inner += dy[i] * (x[i] - ref[i]);
  const double bound = 2.0 * inner + norm2_sq(dy);
  const double actual = energy_at(set, ref, y2) - energy_at(set, ref, y);
  return bound - actual;
}

std::vector<FlowPoint> integrate_flow(const Objective& obj, const FeasibleSet& set,
                                      const Vec& y0, double horizon, double dt) {
  if (obj.dim != set.dim)
    throw std::invalid_argument("integrate_flow: objective and set dimensions differ");
  require_dim(y0, set.dim, "integrate_flow.y0");
  if (!(horizon > 0.0)) throw std::invalid_argument("integrate_flow: horizon must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_flow: dt must be > 0");

  auto field = [&](const Vec& y) {
    Vec g = obj.mean_grad(set.project(y));
    for (double& v : g) v = -v;
    return g;
  };

  std::vector<FlowPoint> out;
  out.reserve(static_cast<std::size_t>(horizon / dt) + 2);
  Vec y = y0;
  double t = 0.0;
  out.push_back({t, y, set.project(y)});

  const std::size_t dim = set.dim;
  while (t < horizon) {
    const double h = std::min(dt, horizon - t);
    const Vec k1 = field(y);
    Vec tmp(dim);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    const Vec k2 = field(tmp);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    const Vec k3 = field(tmp);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * k3[i];
    const Vec k4 = field(tmp);
    for (std::size_t i = 0; i < dim; ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    t += h;
    if (!all_finite(y))
      throw std::runtime_error(
          "integrate_flow: state became non-finite at t = " + format_double(t) +
          " (step size too large for this field)");
    out.push_back({t, y, set.project(y)});
  }
  return out;
}

}  // namespace dsgd
