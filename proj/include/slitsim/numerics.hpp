#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "slitsim/errors.hpp"

namespace slitsim {

struct SolverSettings {
  double abs_tolerance = 1e-12;
  int max_iterations = 200;
};

/// Solves y + sin(y) = x for y >= 0.
///
/// f(y) = y + sin(y) is nondecreasing, so the root is unique. Since
/// |sin y| <= 1 it lies in [x - 1, x + 1] (clipped at 0). Newton steps are
/// taken while they stay inside the bracket and shrink it fast enough;
/// otherwise the bracket is bisected. Near odd multiples of pi f' vanishes
/// and Newton alone degrades to linear convergence.
///
/// Iteration continues until the step reaches machine precision, then the
/// residual is certified against the tolerance.
inline double solve_displacement(double x, const SolverSettings& settings = {}) {
  if (!std::isfinite(x) || x < 0.0)
    throw DomainError("solve_displacement: x must be finite and >= 0");
  if (!(settings.abs_tolerance > 0.0) || settings.max_iterations < 1)
    throw DomainError("solve_displacement: invalid solver settings");
  if (x == 0.0) return 0.0;

  const auto residual = [x](double y) { return y + std::sin(y) - x; };
  constexpr double eps = std::numeric_limits<double>::epsilon();
  // Residual of the correctly rounded root is bounded by a few ulps of x.
  const double tolerance = std::max(settings.abs_tolerance, 8.0 * eps * x);

  double lo = std::max(0.0, x - 1.0);
  double hi = x + 1.0;
  double y = 0.5 * (lo + hi);
  double step_old = hi - lo;
  double step = step_old;

  for (int it = 0; it < settings.max_iterations; ++it) {
    const double g = residual(y);
    if (g == 0.0) return y;
    if (g < 0.0)
      lo = y;
    else
      hi = y;
    const double dg = 1.0 + std::cos(y);

    const double newton = y - g / dg;
    const bool inside = dg > 0.0 && newton > lo && newton < hi;
    const bool fast = std::abs(2.0 * g) <= std::abs(step_old * dg);
    double next;
    if (inside && fast) {
      step_old = step;
      step = g / dg;
      next = newton;
    } else {
      step_old = step;
      step = 0.5 * (hi - lo);
      next = lo + step;
    }

    const bool converged = std::abs(next - y) <= 2.0 * eps * std::max(1.0, std::abs(y)) ||
                           next <= lo || next >= hi;
    if (converged) {
      // Keep whichever of the last two iterates has the smaller residual.
      const double best = std::abs(residual(next)) < std::abs(g) ? next : y;
      if (std::abs(residual(best)) <= tolerance) return best;
      throw SolverError("solve_displacement: stalled with residual above tolerance at x=" +
                        std::to_string(x));
    }
    y = next;
  }
  if (std::abs(residual(y)) <= tolerance) return y;
  throw SolverError("solve_displacement: no convergence within " +
                    std::to_string(settings.max_iterations) + " iterations at x=" +
                    std::to_string(x));
}

/// arcsin with its argument clamped to [-1, 1].
inline double arcsin_clamped(double p) {
  if (!std::isfinite(p)) throw DomainError("arcsin_clamped: argument must be finite");
  return std::asin(std::clamp(p, -1.0, 1.0));
}

}  // namespace slitsim
