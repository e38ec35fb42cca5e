#pragma once

// Per-particle processing at the atom: the spin-gated interference
// displacement, scattering off the atom and registration on the screen.

#include <cmath>
#include <numbers>

#include "slitsim/model.hpp"
#include "slitsim/numerics.hpp"

namespace slitsim {

struct InterferenceOutcome {
  double ordinate = 0.0;
  bool displaced = false;
  int orbit = 1;
  double distance_before = 0.0;
  double distance_after = 0.0;
};

/// Displaces the particle iff the nearest orbit's spin carries the name of
/// the slit it came through; that orbit's spin is then flipped. The distance
/// to the orbit, in units of pi * spacing, maps x -> y with y + sin y = x.
/// The particle moves toward the orbit and never crosses it.
inline InterferenceOutcome apply_interference(double ordinate, SlitTag slit,
                                              OrbitRegister& reg,
                                              const ModelParams& params,
                                              const SolverSettings& settings = {}) {
  const double rho = std::abs(ordinate);
  const NearestOrbit near = nearest_orbit(rho, params);
  InterferenceOutcome out{ordinate, false, near.orbit, near.distance, near.distance};
  if (!same_name(reg.spin(static_cast<std::size_t>(near.orbit)), slit)) return out;

  reg.flip(static_cast<std::size_t>(near.orbit));
  out.displaced = true;
  if (near.distance == 0.0) return out;

  const double unit = std::numbers::pi * params.orbit_spacing();
  const double moved = solve_displacement(near.distance / unit, settings) * unit;
  const double r_k = params.orbit_radius(near.orbit);
  const double new_rho = rho < r_k ? r_k - moved : r_k + moved;
  out.distance_after = moved;
  out.ordinate = ordinate < 0.0 ? -new_rho : new_rho;
  return out;
}

/// Scattering angle off the front (+) or back (-) of the atom for a
/// horizontal ray at the given height.
inline double scatter(double final_ordinate, Sign sign, const ModelParams& params) {
  return to_double(sign) * arcsin_clamped(final_ordinate / params.atom_radius);
}

/// 1-degree screen bin of a scattering angle; +90 degrees folds into bin 89.
inline int register_on_screen(double angle) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  if (!(angle >= -half_pi && angle <= half_pi))
    throw DomainError("register_on_screen: angle outside [-pi/2, pi/2]");
  const double degrees = angle * (180.0 / std::numbers::pi);
  const int bin = static_cast<int>(std::floor(degrees));
  return bin < kFirstBin ? kFirstBin : (bin > kLastBin ? kLastBin : bin);
}

}  // namespace slitsim
