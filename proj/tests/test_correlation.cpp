#include <cmath>
#include <random>

#include "doctest.h"
#include "gammalab/anneal.hpp"
#include "gammalab/constants.hpp"
#include "gammalab/correlation.hpp"
#include "gammalab/field.hpp"
#include "gammalab/quadrature.hpp"
#include "gammalab/shapes.hpp"

using namespace gammalab;

namespace {

// Independent oracle: c_u(r) as a 1D angular quadrature of the exact
// overlap C_u(r w) for shapes whose 1D overlaps are known.
double stripe_angular_oracle(double theta, int m, double r) {
  // valid while m |r cos phi| stays below min(theta, 1-theta)
  auto overlap = [&](double phi) {
    return theta - m * std::abs(r * std::cos(phi));
  };
  return integrate_adaptive(overlap, 0.0, 2.0 * kPi, 1e-12) / (2.0 * kPi);
}

double square_angular_oracle(double side, double r) {
  auto overlap = [&](double phi) {
    double a = side - std::abs(r * std::cos(phi));
    double b = side - std::abs(r * std::sin(phi));
    return std::max(a, 0.0) * std::max(b, 0.0);
  };
  return integrate_adaptive(overlap, 0.0, 2.0 * kPi, 1e-12) / (2.0 * kPi);
}

}  // namespace

TEST_CASE("fast correlation equals the direct shifted-overlap sum") {
  for (int n : {16, 32}) {
    TorusGrid g = make_grid(2, n);
    BinaryField f = random_field(g, 0.4, 7 + n);
    CorrelationMap fast = correlation_map(f);
    CorrelationMap slow = correlation_map_direct(f);
    for (std::size_t i = 0; i < fast.counts.size(); ++i)
      REQUIRE(fast.counts[i] == slow.counts[i]);
  }
  TorusGrid g3 = make_grid(3, 16);
  BinaryField f3 = random_field(g3, 0.3, 17);
  CorrelationMap fast3 = correlation_map(f3);
  CorrelationMap slow3 = correlation_map_direct(f3);
  for (std::size_t i = 0; i < fast3.counts.size(); ++i)
    REQUIRE(fast3.counts[i] == slow3.counts[i]);
}

TEST_CASE("correlation range and reflection symmetry") {
  TorusGrid g = make_grid(2, 64);
  BinaryField f = random_field(g, 0.27, 5);
  CorrelationMap m = correlation_map(f);
  const int n = g.samples;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto v = m.counts[(std::size_t)i * n + j];
      REQUIRE(v >= 0);
      REQUIRE(v <= m.count0);
      REQUIRE(v == m.counts[(std::size_t)((n - i) % n) * n + (n - j) % n]);
    }
}

TEST_CASE("full torus correlates to itself everywhere") {
  TorusGrid g = make_grid(2, 32);
  BinaryField ones{g, std::vector<std::uint8_t>(g.cell_count(), 1),
                   g.cell_count()};
  CorrelationMap m = correlation_map(ones);
  for (auto v : m.counts) REQUIRE(v == g.cell_count());
  RadialCorrelation rc = radial_average(m, 32);
  for (double c : rc.c) REQUIRE(c == doctest::Approx(1.0));
}

TEST_CASE("disk covariogram: closed form, grid value, radial curve") {
  auto disk = make_ball(2, {0.5, 0.5, 0.0}, 0.2);
  // closed form at |z| = 0.2 (spec value 0.049135)
  double g02 = analytic_autocorrelation(disk, 0.2);
  CHECK(g02 == doctest::Approx(0.0491346938).epsilon(1e-7));

  TorusGrid g = make_grid(2, 128);
  BinaryField f = rasterize(disk, g);
  CorrelationMap m = correlation_map(f);
  CHECK(m.base() == doctest::Approx(kPi * 0.04).epsilon(0.01));
  int cells = g.samples / 5;  // shift (0.2, 0)
  CHECK(m.value_at(cells) == doctest::Approx(g02).epsilon(0.01));

  RadialCorrelation rc = radial_average(m, 4 * g.samples);
  for (std::size_t i = 0; i < rc.radii.size(); i += 7) {
    double r = rc.radii[i];
    if (r < 0.03 || r > 0.45) continue;
    CHECK(rc.c[i] ==
          doctest::Approx(analytic_autocorrelation(disk, r)).epsilon(0.08));
  }
  // out-of-regime requests are rejected
  CHECK_THROWS_AS((void)analytic_autocorrelation(disk, 0.7), Error);
}

TEST_CASE("analytic curves match the angular quadrature oracle") {
  // stripe: c(r) = theta - 2r/pi
  auto stripe = make_laminate(2, 1, 0.3, 1);
  for (double r : {0.05, 0.1, 0.2}) {
    double oracle = stripe_angular_oracle(0.3, 1, r);
    CHECK(analytic_autocorrelation(stripe, r) ==
          doctest::Approx(oracle).epsilon(1e-10));
    CHECK(oracle == doctest::Approx(0.3 - 2.0 * r / kPi).epsilon(1e-10));
  }
  CHECK(analytic_autocorrelation(stripe, 0.1) ==
        doctest::Approx(0.3 - 0.2 / kPi).epsilon(1e-12));

  // square: c(r) = s^2 - (4s/pi) r + r^2/pi
  auto square = make_square(0.5, 0.5, 0.5);
  CHECK(analytic_autocorrelation(square, 0.0) == doctest::Approx(0.25));
  for (double r : {0.05, 0.15, 0.3}) {
    double oracle = square_angular_oracle(0.5, r);
    CHECK(analytic_autocorrelation(square, r) ==
          doctest::Approx(oracle).epsilon(1e-10));
  }

  // multi-stripe laminate slope scales with m
  auto lam4 = make_laminate(2, 1, 0.3, 4);
  CHECK(analytic_autocorrelation(lam4, 0.01) ==
        doctest::Approx(0.3 - 4.0 * 2.0 * 0.01 / kPi).epsilon(1e-10));

  // 3D slab: c(r) = theta - r/2
  auto slab = make_laminate(3, 1, 0.3, 1);
  CHECK(analytic_autocorrelation(slab, 0.1) ==
        doctest::Approx(0.3 - 0.05).epsilon(1e-12));
}

TEST_CASE("grid radial curve tracks the stripe closed form") {
  TorusGrid g = make_grid(2, 256);
  auto stripe = make_laminate(2, 1, 0.3, 1);
  RadialCorrelation rc =
      radial_average(correlation_map(rasterize(stripe, g)), 4 * g.samples);
  CHECK(rc.c0 == doctest::Approx(0.3).epsilon(1e-9));
  for (std::size_t i = 0; i < rc.radii.size(); ++i) {
    double r = rc.radii[i];
    if (r < 0.02 || r > 0.25) continue;
    CHECK(rc.c[i] == doctest::Approx(0.3 - 2.0 * r / kPi).epsilon(0.02));
  }
}

TEST_CASE("radial average contracts") {
  TorusGrid g = make_grid(2, 64);
  CorrelationMap m = correlation_map(random_field(g, 0.4, 3));
  CHECK_THROWS_AS((void)radial_average(m, 8), Error);         // too few bins
  CHECK_THROWS_AS((void)radial_average(m, 64, 0.9), Error);   // r_max > 1/2
  RadialCorrelation rc = radial_average(m, 256);
  CHECK(rc.radii.front() == 0.0);
  CHECK(rc.c.front() == doctest::Approx(m.base()));
  for (std::size_t i = 1; i < rc.radii.size(); ++i) {
    CHECK(rc.radii[i] > rc.radii[i - 1]);
    CHECK(rc.c[i] >= -1e-15);
    CHECK(rc.c[i] <= rc.c0 + 1e-15);
  }
  CHECK(rc.merged_empty_bins > 0);  // bins finer than the lattice must merge
}

TEST_CASE("perimeter from slope") {
  TorusGrid g = make_grid(2, 1024);
  auto stripe = make_laminate(2, 1, 0.3, 1);
  RadialCorrelation rs =
      radial_average(correlation_map(rasterize(stripe, g)), 4 * g.samples);
  PerimeterEstimate ps = perimeter_from_slope(rs);
  CHECK(ps.method == PerimeterMethod::slope_fit);
  CHECK(ps.value == doctest::Approx(2.0).epsilon(0.01));

  auto disk = make_ball(2, {0.5, 0.5, 0.0}, 0.2);
  RadialCorrelation rd =
      radial_average(correlation_map(rasterize(disk, g)), 4 * g.samples);
  PerimeterEstimate pd = perimeter_from_slope(rd);
  CHECK(pd.value == doctest::Approx(0.4 * kPi).epsilon(0.02));

  BinaryField ones{g, std::vector<std::uint8_t>(g.cell_count(), 1),
                   g.cell_count()};
  RadialCorrelation r1 = radial_average(correlation_map(ones), 4 * g.samples);
  CHECK(std::abs(perimeter_from_slope(r1).value) < 1e-9);
}

TEST_CASE("slope fit in 3D") {
  TorusGrid g = make_grid(3, 64);
  auto slab = make_laminate(3, 1, 0.3, 1);
  RadialCorrelation rc =
      radial_average(correlation_map(rasterize(slab, g)), 4 * g.samples);
  PerimeterEstimate p = perimeter_from_slope(rc);
  CHECK(p.value == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("small-r polynomial fit") {
  TorusGrid g = make_grid(2, 1024);
  auto square = make_square(0.5, 0.5, 0.5);
  RadialCorrelation rc =
      radial_average(correlation_map(rasterize(square, g)), 4 * g.samples);
  SmallRFit fit = fit_small_r_polynomial(rc, 2, 0.01, 0.2);
  CHECK(fit.a[0] == doctest::Approx(-2.0 / kPi).epsilon(0.02));
  CHECK(fit.a[1] == doctest::Approx(1.0 / kPi).epsilon(0.10));
  CHECK(fit.residual < 1e-3);
  CHECK(fit.a[1] >= -0.01 * std::abs(fit.a[0]));

  auto stripe = make_laminate(2, 1, 0.3, 1);
  RadialCorrelation rs =
      radial_average(correlation_map(rasterize(stripe, g)), 4 * g.samples);
  SmallRFit fs = fit_small_r_polynomial(rs, 2, 0.01, 0.2);
  CHECK(fs.a[0] == doctest::Approx(-2.0 / kPi).epsilon(0.02));
  CHECK(std::abs(fs.a[1]) < 0.03 * std::abs(fs.a[0]) + 1e-3);

  // window with too few samples errors out
  CHECK_THROWS_AS(
      (void)fit_small_r_polynomial(rs, 3, 0.001, 0.0015), Error);
}

TEST_CASE("radial Lipschitz bound from the perimeter") {
  TorusGrid g = make_grid(2, 256);
  for (const ShapeSpec& s : {make_ball(2, {0.5, 0.5, 0.0}, 0.2),
                             make_laminate(2, 1, 0.3, 1)}) {
    double lips = shape_perimeter(s).value / slope_perimeter_factor(2);
    RadialCorrelation rc =
        radial_average(correlation_map(rasterize(s, g)), 4 * g.samples);
    double binw = rc.r_max / (4 * g.samples);
    for (std::size_t i = 0; i + 1 < rc.radii.size(); ++i) {
      double dr = rc.radii[i + 1] - rc.radii[i];
      double dc = std::abs(rc.c[i + 1] - rc.c[i]);
      REQUIRE(dc <= lips * (1.1 * dr + 2.0 * binw) + 1e-4);
    }
  }
}
