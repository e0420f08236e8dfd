#pragma once

#include <cmath>
#include <numbers>

#include "gammalab/errors.hpp"

namespace gammalab {

inline constexpr double kPi = std::numbers::pi;

/// Volume of the unit ball in R^n, n = 1..3.
inline double unit_ball_volume(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return kPi;
    case 3: return 4.0 * kPi / 3.0;
    default: fail(ErrorCode::invalid_argument, "unit_ball_volume: n must be 1..3");
  }
}

/// Surface area of the unit sphere S^{n-1} in R^n (sigma_n = n * omega_n).
inline double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

/// Slope-to-perimeter factor: P = -c'(0) * n*omega_n / omega_{n-1}.
inline double slope_perimeter_factor(int n) {
  return n * unit_ball_volume(n) / unit_ball_volume(n - 1);
}

/// Prefactor n*omega_n / (2*omega_{n-1}) appearing in the critical coupling.
inline double critical_prefactor(int n) {
  return 0.5 * slope_perimeter_factor(n);
}

/// Radius of the n-ball with volume `vol`.
inline double ball_radius_for_volume(int n, double vol) {
  return std::pow(vol / unit_ball_volume(n), 1.0 / n);
}

/// Perimeter of the n-ball with volume `vol` (surface measure).
inline double ball_perimeter_for_volume(int n, double vol) {
  double r = ball_radius_for_volume(n, vol);
  return unit_sphere_area(n) * std::pow(r, n - 1);
}

}  // namespace gammalab
