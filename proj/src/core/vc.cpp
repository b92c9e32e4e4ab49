#include "vc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dsgd {

VcReport check_vc_on_grid(const Objective& obj, const FeasibleSet& domain,
                          std::size_t grid_per_axis, double tolerance) {
  if (obj.dim != domain.dim)
    throw std::invalid_argument("check_vc_on_grid: objective and domain dimensions differ");
  if (domain.kind == FeasibleSet::Kind::all_space)
    throw std::invalid_argument("check_vc_on_grid: domain must be bounded (box or ball)");
  if (grid_per_axis < 2)
    throw std::invalid_argument("check_vc_on_grid: grid_per_axis must be >= 2");
  if (obj.optima.empty())
    throw std::invalid_argument("check_vc_on_grid: objective has no known minimizers");
  if (!(tolerance >= 0.0))
    throw std::invalid_argument("check_vc_on_grid: tolerance must be >= 0");

  const std::size_t dim = obj.dim;
  Vec lo(dim), hi(dim);
  if (domain.kind == FeasibleSet::Kind::box) {
    lo = domain.lo;
    hi = domain.hi;
  } else {  // ball: walk its bounding box, keep interior nodes
    for (std::size_t i = 0; i < dim; ++i) {
      lo[i] = domain.center[i] - domain.radius;
      hi[i] = domain.center[i] + domain.radius;
    }
  }

  Vec step(dim);
  double cell_diag_sq = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    step[i] = (hi[i] - lo[i]) / static_cast<double>(grid_per_axis - 1);
    cell_diag_sq += step[i] * step[i];
  }
  // Grid nodes within one cell of a known minimizer count as "at" it.
  const double near_radius = std::sqrt(cell_diag_sq);

  VcReport rep;
  rep.min_inner_product = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> idx(dim, 0);
  Vec x(dim);
  for (;;) {
    for (std::size_t i = 0; i < dim; ++i)
      x[i] = lo[i] + step[i] * static_cast<double>(idx[i]);

    if (domain.kind != FeasibleSet::Kind::ball || domain.contains(x, 0.0)) {
      const Vec g = obj.mean_grad(x);
      double inner = std::numeric_limits<double>::infinity();
      double dist_opt = std::numeric_limits<double>::infinity();
      for (const Vec& p : obj.optima) {
        double ip = 0.0;
        for (std::size_t i = 0; i < dim; ++i) ip += g[i] * (x[i] - p[i]);
        inner = std::min(inner, ip);
        dist_opt = std::min(dist_opt, dist2(x, p));
      }
      ++rep.checked_points;
      if (inner < rep.min_inner_product) {
        rep.min_inner_product = inner;
        rep.argmin = x;
      }
      if (inner < -tolerance) {
        rep.violations.push_back({x, inner});
      } else if (std::fabs(inner) <= tolerance && dist_opt > near_radius) {
        rep.equality_points_outside_optima.push_back({x, inner});
      }
    }

    // advance the odometer
    std::size_t d = 0;
    while (d < dim && ++idx[d] == grid_per_axis) {
      idx[d] = 0;
      ++d;
    }
    if (d == dim) break;
  }
  return rep;
}

}  // namespace dsgd
