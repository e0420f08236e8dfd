#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gammalab/errors.hpp"

namespace gammalab {

/// Radial interaction profile K(r) with the integrability metadata used to
/// check the admissibility hypotheses:
///   (H1) radial by construction,
///   (H2) |z| K(z) integrable, encoded as alpha < n+1 near 0 and beta > n+1
///        at infinity,
///   (H3) the integrated kernel Phi stays nonnegative.
struct Kernel {
  std::string name;   // canonical spec string, e.g. "ring:a=-1,b=0.5"
  int dim = 2;
  std::function<double(double)> profile;  // K(r), r > 0
  double support_radius = 0.0;            // 0 means unbounded support
  double singularity_exponent = 0.0;      // alpha: |K| <~ r^-alpha near 0
  double tail_exponent = 0.0;             // beta: |K| <~ r^-beta at infinity
  double total_mass = 0.0;                // int_{R^n} K(z) dz (signed)
  // For r >= power_tail_start the profile IS the power law
  // profile(start) * (r/start)^{-beta}; tail integrals use the closed form
  // (octave quadrature cannot reach 1e-12 on algebraic tails). 0 = unused.
  double power_tail_start = 0.0;

  bool compact() const { return support_radius > 0.0; }
};

/// Parses "indicator", "gaussian:s=1.0", "ring:a=-1,b=0.5", "helmholtz",
/// "fractional:s=1.5" for dimension n in {2,3}.
Kernel make_kernel(const std::string& spec, int dim);

/// sigma_n int_0^inf r^n K(r) dr = int |z| K(z) dz, by adaptive quadrature;
/// throws on nonconvergent tails.
double kernel_first_moment(const Kernel& k);

/// Critical coupling (n omega_n / 2 omega_{n-1}) / first_moment.
double kernel_gamma_crit(const Kernel& k);

/// Radius R with sigma_n int_R^inf r^{n-1}|K| dr <= mass_tol * total
/// absolute mass; used to truncate lattice sums safely for sign-changing
/// kernels.
double kernel_effective_radius(const Kernel& k, double mass_tol);

/// The integrated kernel Phi(r) = sigma_n int_r^inf rho^{n-1} K(rho) drho,
/// tabulated on a log-spaced grid with log-linear interpolation between
/// samples; carries the critical constant and both of its defining routes.
class IntegratedKernelTable {
 public:
  double phi(double r) const;   // interpolated, clamped to Phi(0+) below r_lo
  double phi0() const { return mass0_; }
  double l1_norm() const { return l1_norm_; }
  double first_moment() const { return first_moment_; }
  double gamma_crit() const { return gamma_crit_; }
  /// gamma_crit recomputed through ||Phi||_L1 (the consistency route).
  double gamma_crit_phi_route() const { return gamma_crit_phi_; }
  double min_phi() const { return min_phi_; }
  double r_cut() const { return r_cut_; }
  double quadrature_tol() const { return tol_; }
  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& values() const { return values_; }

 private:
  friend IntegratedKernelTable integrated_kernel(const Kernel&, double);
  std::vector<double> radii_, values_, log_radii_;
  double mass0_ = 0, l1_norm_ = 0, first_moment_ = 0;
  double gamma_crit_ = 0, gamma_crit_phi_ = 0;
  double min_phi_ = 0, r_cut_ = 0, tol_ = 0;
};

/// Builds the table; throws KernelInadmissible if Phi dips below
/// -quadrature_tol (H3 violation) and DegenerateMoment if the first moment
/// is nonpositive. Results are memoized per (kernel name, dim, tol).
IntegratedKernelTable integrated_kernel(const Kernel& k, double quadrature_tol = 1e-10);

struct HypothesesReport {
  bool h1 = false, h2 = false, h3 = false;
  std::string evidence;
};

/// Numerical evidence for (H1)-(H3); failures are reported, not thrown.
HypothesesReport verify_hypotheses(const Kernel& k);

/// Critical parameter of the corresponding diffuse interface model:
/// q_crit = 1 - (4 gamma_crit int_0^1 sqrt(W))^{-2}. May be negative.
double q_crit(double gamma_crit, double sqrt_w_integral);

}  // namespace gammalab
