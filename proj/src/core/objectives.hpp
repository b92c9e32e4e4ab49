#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vec.hpp"

namespace dsgd {

// A differentiable objective together with whatever is known about its
// minimizers.  eval/mean_grad must be pure functions of x.
struct Objective {
  std::string name;
  std::size_t dim = 0;
  std::function<double(const Vec&)> eval;
  std::function<Vec(const Vec&)> mean_grad;
  std::optional<double> lipschitz_hint;  // gradient Lipschitz constant, if known
  std::vector<Vec> optima;               // known minimizers (may be a finite sample)
  std::optional<double> min_value;

  double operator()(const Vec& x) const { return eval(x); }
};

struct NoiseModel {
  enum class Kind { none, gaussian_additive };
  Kind kind = Kind::none;
  double sigma = 1.0;

  static NoiseModel none() { return {Kind::none, 0.0}; }
  static NoiseModel gaussian(double sigma = 1.0);
};

// Benchmark objectives addressable by name:
//   rosenbrock  (dim >= 2, coupling coefficient 1000, minimizer (1,...,1))
//   beale       (dim == 2, minimizer (3, 0.5))
//   polar       (dim == 2, r^2-type bowl with angular ripple, minimizer 0)
//   quadratic   (any dim, |x|^2)
//   double_well (any dim, (|x|^2 - 1)^2; gradient vanishes at 0, which is
//                not a minimizer -- kept as a coherence counterexample)
Objective make_test_objective(const std::string& name, std::size_t dim);

// Draw a gradient sample: mean_grad(x) plus additive noise.  The draw is a
// pure function of (x, seed); the same seed yields identical bits anywhere.
Vec sample_gradient(const Objective& obj, const NoiseModel& noise, const Vec& x,
                    std::uint64_t seed);

}  // namespace dsgd
