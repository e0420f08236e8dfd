#pragma once

#include <optional>
#include <vector>

#include "gammalab/correlation.hpp"
#include "gammalab/field.hpp"
#include "gammalab/kernels.hpp"

namespace gammalab {

enum class EnergyMethod { direct_grid, autocorr_grid, autocorr_analytic };

/// One evaluation of E_{gamma,eps} = perimeter - gamma * nonlocal.
/// nonlocal_term is stored gamma-free (the subtracted integral itself).
struct EnergyBreakdown {
  double perimeter_term = 0.0;
  double nonlocal_term = 0.0;
  double total = 0.0;
  double epsilon = 0.0;
  double gamma = 0.0;
  EnergyMethod method = EnergyMethod::direct_grid;
  PerimeterMethod perimeter_source = PerimeterMethod::analytic;
  double uncertainty = 0.0;  // quadrature truncation budget on `total`
};

/// Direct lattice evaluation: the kernel is periodized over the torus and
/// summed against |u(x+z) - u(x)| through the identity
/// sum_x |u(x+z)-u(x)| = 2 (C_u(0) - C_u(z)); shifts are truncated once the
/// dropped |K| mass is below 1e-6 of the total. `torus_side` rescales all
/// lengths for domains [0, side)^n (used by the scaling-identity check).
/// Preconditions: eps >= 8h. If `analytic_perimeter` is absent the perimeter
/// term is slope-fitted from the same correlation map (unit torus only).
EnergyBreakdown energy_direct(const BinaryField& f, const Kernel& k,
                              double gamma, double eps,
                              const PerimeterEstimate* analytic_perimeter = nullptr,
                              const CorrelationMap* reuse_map = nullptr,
                              double torus_side = 1.0);

/// The literal bit-summation route for the nonlocal term, restricted to the
/// given lattice shifts (flat indices). Used to check the two internal
/// summation identities against the correlation route.
double nonlocal_direct_bits_at_shifts(const BinaryField& f,
                                      const std::vector<std::size_t>& shifts,
                                      const Kernel& k, double eps,
                                      double torus_side = 1.0);

/// Largest |h^n sum_x |u(x+z)-u(x)| - 2(C_u(0)-C_u(z))| over sampled shifts.
double direct_identity_gap(const BinaryField& f, const CorrelationMap& m,
                           int sample_count, std::uint64_t seed);

/// Reformulated route: nonlocal = (2 sigma_n / eps^{n+1})
/// int_0^{r_avail} r^{n-1} K(r/eps) [c(0) - c(r)] dr against binned radial
/// samples; the tail beyond r_avail is bounded by the Lipschitz estimate and
/// booked as uncertainty.
EnergyBreakdown energy_autocorr(const RadialCorrelation& rc, const Kernel& k,
                                double gamma, double eps,
                                const PerimeterEstimate& perimeter);

/// Same reformulation against a closed-form curve; exact (zero tail) when
/// the truncated kernel support fits inside the curve's validity radius.
EnergyBreakdown energy_autocorr_analytic(const AnalyticCorrelation& curve,
                                         const Kernel& k, double gamma,
                                         double eps);

/// Diagnostic evaluation of the integrated-kernel form
/// E = 2 gamma_crit int Phi_eps [ (gamma/gamma_crit) c'(r) - c'(0) ] dr
/// with c' from finite differences of the radial samples.
double energy_phi_form(const RadialCorrelation& rc,
                       const IntegratedKernelTable& table, double gamma,
                       double eps, const PerimeterEstimate& perimeter);

/// Limit energy E_{gamma,0} = (1 - gamma/gamma_crit) * P.
double gamma_limit_energy(const PerimeterEstimate& p, double gamma,
                          double gamma_crit);

/// E_{gamma,eps} - E_{gamma,0} with a matched perimeter source; the paper's
/// pointwise bound makes this nonnegative up to method tolerance.
double lower_bound_margin(const EnergyBreakdown& e, double gamma_crit);

struct ScalingCheck {
  double lhs = 0.0;  // E^{(ell)}[u_ell] at eps
  double rhs = 0.0;  // ell^{n-1} E[u] at eps/ell
  double rel_gap = 0.0;
};

/// Verifies E^{(ell)}_{gamma,eps}[u_ell] = ell^{n-1} E_{gamma,eps/ell}[u].
/// Stripes run through the closed-form path; other shapes through the grid
/// path at resolution N.
ScalingCheck scaling_identity_check(const ShapeSpec& shape, const Kernel& k,
                                    double gamma, double eps, double ell,
                                    int grid_n);

struct SweepRow {
  EnergyBreakdown energy;
  // Integral decomposition of the nonlocal term: the leading slope piece,
  // the curvature moment (-> 0 with eps), and the tail bound (-> 0).
  double i1 = 0.0, i2 = 0.0, i3 = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by decreasing epsilon
  double extrapolated_limit = 0.0;
  const char* extrapolation_model = "richardson_linear";
};

/// Energy sweep over decreasing epsilons for a polytope or laminate;
/// extrapolates the eps -> 0 limit linearly from the three smallest values.
SweepResult epsilon_sweep(const ShapeSpec& shape, const Kernel& k, double gamma,
                          const std::vector<double>& epsilons, int grid_n);

}  // namespace gammalab
