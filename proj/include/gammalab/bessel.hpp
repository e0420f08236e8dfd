#pragma once

namespace gammalab {

/// Modified Bessel function of the second kind K_nu(r), nu in {0, 1/2, 1},
/// r > 0. Evaluated from the integral representation
///   K_nu(r) = int_0^inf cosh(nu t) exp(-r cosh t) dt
/// with the truncation point chosen so the dropped integrand is < 1e-18 of
/// the peak, and from the large-argument asymptotic series for r > 30.
double bessel_k(double nu, double r);

/// The asymptotic series sqrt(pi/2r) e^{-r} sum_k a_k(nu)/r^k used for
/// r > 30 (exposed so the switchover can be checked against the integral).
double bessel_k_asymptotic(double nu, double r, int terms = 4);

}  // namespace gammalab
