#pragma once

#include <optional>
#include <vector>

#include "objectives.hpp"
#include "vec.hpp"

namespace dsgd {

// Closed convex feasible region with a closed-form Euclidean projection.
struct FeasibleSet {
  enum class Kind { all_space, box, ball };
  Kind kind = Kind::all_space;
  std::size_t dim = 0;
  Vec lo, hi;        // box bounds
  Vec center;        // ball center
  double radius = 0.0;

  static FeasibleSet all(std::size_t dim);
  static FeasibleSet make_box(Vec lo, Vec hi);
  static FeasibleSet make_ball(Vec center, double radius);

  Vec project(const Vec& y) const;
  bool contains(const Vec& x, double tol = 1e-12) const;
  // Euclidean diameter; empty for all_space.
  std::optional<double> diameter() const;
};

// Feasible region plus the minimizers used as energy reference points.  Every
// reference point must itself be feasible (checked on construction).
struct EnergyContext {
  FeasibleSet set;
  std::vector<Vec> optima;

  EnergyContext(FeasibleSet s, std::vector<Vec> opts);
};

// Distance-like merit of the (possibly infeasible) dual state y:
//   E_p(y)  = |p|^2 - |proj(y)|^2 + 2 <y, proj(y) - p>
//   energy  = min over reference points p of E_p(y).
// Equals min_p |y - p|^2 whenever proj(y) = y, and is always >= 0.
double energy(const EnergyContext& ctx, const Vec& y);

// One-point version used by the perturbation inequality below.
double energy_at(const FeasibleSet& set, const Vec& ref, const Vec& y);

// Upper bound minus actual change of the one-point energy under y -> y + dy:
//   [2 <dy, proj(y) - ref> + |dy|^2]  -  [E_ref(y + dy) - E_ref(y)]
// Nonnegative (up to roundoff) for every feasible ref.
double energy_perturbation_gap(const FeasibleSet& set, const Vec& ref,
                               const Vec& y, const Vec& dy);

struct FlowPoint {
  double t;
  Vec y;
  Vec x;  // proj(y)
};

// Fixed-step RK4 integration of  dy/dt = -grad f(proj(y))  from y0 over
// [0, horizon].  Every accepted step is returned, including t = 0 and
// t = horizon (the last step is shortened to land exactly on the horizon).
// Throws if the state stops being finite (step too large for the field).
std::vector<FlowPoint> integrate_flow(const Objective& obj, const FeasibleSet& set,
                                      const Vec& y0, double horizon,
                                      double dt = 1e-3);

}  // namespace dsgd
