#include "objectives.hpp"

#include <cmath>
#include <stdexcept>

#include "rng.hpp"

namespace dsgd {

NoiseModel NoiseModel::gaussian(double sigma) {
  if (!(sigma >= 0.0))
    throw std::invalid_argument("noise.sigma: must be >= 0");
  return {Kind::gaussian_additive, sigma};
}

namespace {

Objective make_quadratic(std::size_t dim) {
  Objective o;
  o.name = "quadratic";
  o.dim = dim;
  o.eval = [dim](const Vec& x) {
    require_dim(x, dim, "quadratic.eval");
    return norm2_sq(x);
  };
  o.mean_grad = [dim](const Vec& x) {
    require_dim(x, dim, "quadratic.grad");
    Vec g(dim);
    for (std::size_t i = 0; i < dim; ++i) g[i] = 2.0 * x[i];
    return g;
  };
  o.lipschitz_hint = 2.0;
  o.optima = {Vec(dim, 0.0)};
  o.min_value = 0.0;
  return o;
}

Objective make_rosenbrock(std::size_t dim) {
  if (dim < 2)
    throw std::invalid_argument("rosenbrock: dim must be >= 2");
  Objective o;
  o.name = "rosenbrock";
  o.dim = dim;
  o.eval = [dim](const Vec& x) {
    require_dim(x, dim, "rosenbrock.eval");
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < dim; ++i) {
      const double a = x[i + 1] - x[i] * x[i];
      const double b = 1.0 - x[i];
      f += 1000.0 * a * a + b * b;
    }
    return f;
  };
  o.mean_grad = [dim](const Vec& x) {
    require_dim(x, dim, "rosenbrock.grad");
    Vec g(dim, 0.0);
    for (std::size_t i = 0; i + 1 < dim; ++i) {
      const double a = x[i + 1] - x[i] * x[i];
      g[i] += -4000.0 * x[i] * a - 2.0 * (1.0 - x[i]);
      g[i + 1] += 2000.0 * a;
    }
    return g;
  };
  o.optima = {Vec(dim, 1.0)};
  o.min_value = 0.0;
  return o;
}

Objective make_beale() {
  Objective o;
  o.name = "beale";
  o.dim = 2;
  o.eval = [](const Vec& v) {
    require_dim(v, 2, "beale.eval");
    const double x = v[0], y = v[1];
    const double p1 = 1.5 - x + x * y;
    const double p2 = 2.25 - x + x * y * y;
    const double p3 = 2.625 - x + x * y * y * y;
    return p1 * p1 + p2 * p2 + p3 * p3;
  };
  o.mean_grad = [](const Vec& v) {
    require_dim(v, 2, "beale.grad");
    const double x = v[0], y = v[1];
    const double y2 = y * y, y3 = y2 * y;
    const double p1 = 1.5 - x + x * y;
    const double p2 = 2.25 - x + x * y2;
    const double p3 = 2.625 - x + x * y3;
    Vec g(2);
    g[0] = 2.0 * (p1 * (y - 1.0) + p2 * (y2 - 1.0) + p3 * (y3 - 1.0));
    g[1] = 2.0 * (p1 * x + p2 * 2.0 * x * y + p3 * 3.0 * x * y2);
    return g;
  };
  o.optima = {Vec{3.0, 0.5}};
  o.min_value = 0.0;
  return o;
}

// f(r, theta) = (3 + sin(5 theta) + cos(3 theta)) * r^2 * (5/3 - r) written in
// Cartesian coordinates.  The angular factor lies in [1, 5] and 5/3 - r > 0 on
// the unit ball, so f >= 0 with equality exactly at the origin.  Both partial
// derivatives are O(r) near 0, so the gradient extends continuously to 0 there.
Objective make_polar() {
  Objective o;
  o.name = "polar";
  o.dim = 2;
  o.eval = [](const Vec& v) {
    require_dim(v, 2, "polar.eval");
    const double r = std::sqrt(v[0] * v[0] + v[1] * v[1]);
    if (r == 0.0) return 0.0;
    const double th = std::atan2(v[1], v[0]);
    const double ang = 3.0 + std::sin(5.0 * th) + std::cos(3.0 * th);
    return ang * r * r * (5.0 / 3.0 - r);
  };
  o.mean_grad = [](const Vec& v) {
    require_dim(v, 2, "polar.grad");
    const double r2 = v[0] * v[0] + v[1] * v[1];
    const double r = std::sqrt(r2);
    Vec g(2, 0.0);
    if (r == 0.0) return g;
    const double th = std::atan2(v[1], v[0]);
    const double ang = 3.0 + std::sin(5.0 * th) + std::cos(3.0 * th);
    const double dang = 5.0 * std::cos(5.0 * th) - 3.0 * std::sin(3.0 * th);
    const double h = r2 * (5.0 / 3.0 - r);
    const double dh = 10.0 / 3.0 * r - 3.0 * r2;
    // d theta/dx = (-y, x) / r^2, d r/dx = (x, y) / r
    g[0] = ang * dh * (v[0] / r) + h * dang * (-v[1] / r2);
    g[1] = ang * dh * (v[1] / r) + h * dang * (v[0] / r2);
    return g;
  };
  o.optima = {Vec{0.0, 0.0}};
  o.min_value = 0.0;
  return o;
}

Objective make_double_well(std::size_t dim) {
  Objective o;
  o.name = "double_well";
  o.dim = dim;
  o.eval = [dim](const Vec& x) {
    require_dim(x, dim, "double_well.eval");
    const double d = norm2_sq(x) - 1.0;
    return d * d;
  };
  o.mean_grad = [dim](const Vec& x) {
    require_dim(x, dim, "double_well.grad");
    const double d = norm2_sq(x) - 1.0;
    Vec g(dim);
    for (std::size_t i = 0; i < dim; ++i) g[i] = 4.0 * d * x[i];
    return g;
  };
  // The minimizer set is the whole unit sphere; keep the axis points as a
  // finite sample of it.
  for (std::size_t i = 0; i < dim; ++i) {
    Vec plus(dim, 0.0), minus(dim, 0.0);
    plus[i] = 1.0;
    minus[i] = -1.0;
    o.optima.push_back(plus);
    o.optima.push_back(minus);
  }
  o.min_value = 0.0;
  return o;
}

}  // namespace

Objective make_test_objective(const std::string& name, std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("objective.dim: must be >= 1");
  if (name == "quadratic") return make_quadratic(dim);
  if (name == "rosenbrock") return make_rosenbrock(dim);
  if (name == "double_well") return make_double_well(dim);
  if (name == "beale") {
    if (dim != 2) throw std::invalid_argument("beale: dim must be 2");
    return make_beale();
  }
  if (name == "polar") {
    if (dim != 2) throw std::invalid_argument("polar: dim must be 2");
    return make_polar();
  }
  throw std::invalid_argument("objective.name: unknown objective '" + name + "'");
}

Vec sample_gradient(const Objective& obj, const NoiseModel& noise, const Vec& x,
                    std::uint64_t seed) {
  Vec g = obj.mean_grad(x);
  if (noise.kind == NoiseModel::Kind::gaussian_additive && noise.sigma > 0.0) {
    GaussStream gs(seed);
    for (double& v : g) v += noise.sigma * gs.next();
  }
  return g;
}

}  // namespace dsgd
