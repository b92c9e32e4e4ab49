#pragma once

#include <cstdint>
#include <vector>

#include "geometry.hpp"
#include "objectives.hpp"

namespace dsgd {

// Grid certificate for the coherence inequality
//   min over known minimizers p of  <grad f(x), x - p>  >=  0,
// with equality expected only near the minimizers themselves.
struct VcReport {
  std::uint64_t checked_points = 0;
  double min_inner_product = 0.0;
  Vec argmin;  // grid point attaining min_inner_product

  struct Point {
    Vec x;
    double inner;  // min over minimizers of <grad f(x), x - p>
  };
  // inner < -tolerance
  std::vector<Point> violations;
  // |inner| <= tolerance but x is farther than one grid cell from every minimizer
  std::vector<Point> equality_points_outside_optima;

  bool passes() const { return violations.empty(); }
};

// Evaluate the inequality at every grid node of the (bounded) domain:
// grid_per_axis nodes per axis including the endpoints; ball domains keep the
// nodes of the bounding-box grid that fall inside the ball.
VcReport check_vc_on_grid(const Objective& obj, const FeasibleSet& domain,
                          std::size_t grid_per_axis, double tolerance = 1e-9);

}  // namespace dsgd
