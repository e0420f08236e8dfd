#pragma once

#include <functional>
#include <vector>

namespace gammalab {

using RealFn = std::function<double(double)>;

/// Fixed-order Gauss-Legendre rule on [a, b].
double gauss_legendre(const RealFn& f, double a, double b, int order = 16);

/// Adaptive Gauss-Legendre with bisection until |GL16 - GL32| <= tol on every
/// panel (tol split proportionally to panel width).
double integrate_adaptive(const RealFn& f, double a, double b, double abs_tol,
                          int max_depth = 48);

/// Integral over [0, b] of an integrand that may be mildly singular at 0
/// (integrable after the r^{n-1} weight carried by the caller). Panels are
/// graded geometrically toward the origin.
double integrate_graded_origin(const RealFn& f, double b, double abs_tol);

/// Integral over [a, inf) by octave doubling [a,2a],[2a,4a],... until the
/// panel contribution falls below tol. Requires eventual decay.
double integrate_octaves_to_inf(const RealFn& f, double a, double abs_tol,
                                int max_octaves = 80);

/// Simple linear least squares y ~ intercept + slope*x with optional weights.
struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_stderr = 0.0;
  double rms_residual = 0.0;
};
LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& w);

}  // namespace gammalab
