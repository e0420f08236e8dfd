#pragma once

#include <cstdint>
#include <vector>

#include "gammalab/energy.hpp"
#include "gammalab/field.hpp"
#include "gammalab/kernels.hpp"

namespace gammalab {

/// Volume-conserving swap (Kawasaki) Metropolis schedule. One step proposes
/// one exchange of a random 1-cell with a random 0-cell.
struct AnnealConfig {
  std::int64_t steps = 200000;
  double t0 = 0.02;            // initial temperature
  double decay = 0.99997;      // per-step geometric factor, < 1
  int swap_distance = 0;       // max Chebyshev distance in cells; 0 = global
  std::uint64_t seed = 1;
  std::int64_t record_every = 20000;
  double eps_perimeter = 0.0;  // interface-energy scale; defaults to 8h
};

struct TrajectorySnapshot {
  std::int64_t step = 0;
  EnergyBreakdown energy;       // perimeter surrogate, nonlocal term, total
  double bookkeeping_gap = 0.0; // |incremental - recomputed| / |recomputed|
  std::uint64_t checksum = 0;
  std::int64_t ones = 0;
};

struct Trajectory {
  std::vector<TrajectorySnapshot> snapshots;
  BinaryField final_field;
  std::int64_t accepted = 0;
  std::int64_t proposed = 0;
};

/// Minimizes the grid functional
///   E[u] = gamma_crit(indicator) * NL_indicator,eps_P[u] - gamma * NL_K,eps[u]
/// whose continuum limit is E_{gamma,eps}: the first term is the isotropic
/// nonlocal perimeter surrogate (an l1 cell count would bias minimizers by up
/// to 4/pi towards axis-aligned shapes). Swap acceptance uses an incremental
/// Delta-E over the combined periodized stencil; every record_every steps the
/// energy is recomputed from the correlation map and compared.
Trajectory anneal(const BinaryField& f0, const Kernel& k, double gamma,
                  double eps, const AnnealConfig& cfg);

/// slope-fit perimeter over the perimeter of the equal-volume ball.
double isoperimetric_quotient(const BinaryField& f);

enum class MinimizerClass { ball, laminate, other };

/// ball: a single non-wrapping component with quotient in [0.9, 1.1];
/// laminate: every component wraps the same single axis and the slope-fit
/// perimeter is within 15% of 2m (m = component count); other: anything else.
MinimizerClass classify_minimizer(const BinaryField& f);

const char* minimizer_class_name(MinimizerClass c);

/// Scatters `fraction` of the 1-cells to uniformly random empty cells
/// (volume preserved); used to prepare annealing initial conditions.
BinaryField scatter_fraction(const BinaryField& f, double fraction,
                             std::uint64_t seed);

/// Bernoulli-like field with exactly round(theta * N^n) ones.
BinaryField random_field(const TorusGrid& grid, double theta,
                         std::uint64_t seed);

}  // namespace gammalab
