#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gammalab/field.hpp"
#include "gammalab/geometry.hpp"
#include "gammalab/shapes.hpp"

namespace gammalab {

/// Periodic autocorrelation C_u at every lattice shift. Values are exact
/// multiples of h^n: the transform result is rounded to the underlying
/// integer overlap count, so C_u(z) = h^n * count(z) holds bit-for-bit.
struct CorrelationMap {
  TorusGrid grid;
  std::vector<std::int64_t> counts;  // same row-major layout as BinaryField

  double base() const {
    return static_cast<double>(count0) / static_cast<double>(grid.cell_count());
  }
  std::int64_t count0 = 0;  // overlap count at zero shift = number of ones

  double value_at(std::size_t flat_index) const {
    return static_cast<double>(counts[flat_index]) /
           static_cast<double>(grid.cell_count());
  }
};

/// Fast-transform route (FFTW, O(N^n log N)).
CorrelationMap correlation_map(const BinaryField& f);

/// Literal shifted-overlap sum, O(N^{2n}); the oracle for the fast route.
CorrelationMap correlation_map_direct(const BinaryField& f);

/// Spherically averaged autocorrelation on radial bins. radii[0] = 0 carries
/// c0 exactly; every other entry is the count-weighted mean radius and mean
/// correlation of one nonempty bin. Empty bins are merged into their
/// populated neighbors (the count is recorded).
struct RadialCorrelation {
  int dim = 2;
  double cell = 0.0;   // grid h, used for fit windows
  double c0 = 0.0;
  double r_max = 0.5;
  std::vector<double> radii;
  std::vector<double> c;
  std::vector<std::int64_t> counts;
  int merged_empty_bins = 0;
};

RadialCorrelation radial_average(const CorrelationMap& m, int bins,
                                 double r_max = 0.5);

/// Perimeter from the small-r slope of c_u: a linear fit on [2h, 16h] and
/// P = -slope * n omega_n / omega_{n-1}. Needs >= 4 samples in the window.
PerimeterEstimate perimeter_from_slope(const RadialCorrelation& rc);

/// Least-squares polynomial c(r) ~ c0 + sum_{j=1..degree} a_j r^j with c0
/// pinned to the measured value. Throws when the equilibrated normal matrix
/// has condition number > 1e8.
struct SmallRFit {
  std::vector<double> a;  // a[j-1] multiplies r^j
  double r_lo = 0.0, r_hi = 0.0;
  double residual = 0.0;  // RMS over the window
  double c0 = 0.0;
};

SmallRFit fit_small_r_polynomial(const RadialCorrelation& rc, int degree,
                                 double r_lo, double r_hi);

/// Closed-form c_u for the shapes where one exists: single balls (no wrap),
/// laminates inside their linear regime, axis-aligned squares with side
/// <= 1/2. The curve is exact on [0, validity].
struct AnalyticCorrelation {
  double c0 = 0.0;
  double validity = 0.0;
  double perimeter = 0.0;
  std::function<double(double)> c;
};

AnalyticCorrelation analytic_correlation_curve(const ShapeSpec& s);

/// Value of the closed-form c_u(r); throws OutOfAnalyticRange beyond the
/// regime of the formula.
double analytic_autocorrelation(const ShapeSpec& s, double r);

}  // namespace gammalab
