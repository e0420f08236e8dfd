#include <cmath>

#include "doctest.h"
#include "gammalab/constants.hpp"
#include "gammalab/energy.hpp"
#include "gammalab/field.hpp"
#include "gammalab/kernels.hpp"

using namespace gammalab;

TEST_CASE("trivial fields have zero energy") {
  TorusGrid g = make_grid(2, 64);
  Kernel ind = make_kernel("indicator", 2);
  PerimeterEstimate p0{0.0, PerimeterMethod::analytic, 0.0};
  BinaryField zero{g, std::vector<std::uint8_t>(g.cell_count(), 0), 0};
  BinaryField ones{g, std::vector<std::uint8_t>(g.cell_count(), 1),
                   g.cell_count()};
  for (const BinaryField* f : {&zero, &ones}) {
    EnergyBreakdown e = energy_direct(*f, ind, 1.3, 0.2, &p0);
    CHECK(e.nonlocal_term == 0.0);
    CHECK(e.total == 0.0);
  }
}

TEST_CASE("stripe energy is exact on the analytic path") {
  auto stripe = make_laminate(2, 1, 0.3, 1);
  AnalyticCorrelation curve = analytic_correlation_curve(stripe);
  Kernel ind = make_kernel("indicator", 2);
  double gc = kernel_gamma_crit(ind);
  CHECK(gc == doctest::Approx(0.75 * kPi).epsilon(1e-10));
  for (double gamma : {0.0, 0.5, 0.75 * kPi}) {
    EnergyBreakdown e = energy_autocorr_analytic(curve, ind, gamma, 0.1);
    double want = 2.0 - 8.0 * gamma / (3.0 * kPi);
    CHECK(std::abs(e.total - want) < 1e-10);
    CHECK(e.uncertainty == 0.0);  // kernel support inside the linear regime
  }
  // gamma = 0.5 evaluates to the spec's 1.57559
  CHECK(energy_autocorr_analytic(curve, ind, 0.5, 0.1).total ==
        doctest::Approx(1.57559).epsilon(1e-5));
  // exact zero at the critical coupling
  CHECK(std::abs(energy_autocorr_analytic(curve, ind, gc, 0.1).total) < 1e-10);

  // compactly supported sign-changing kernel: still exact
  Kernel ring = make_kernel("ring:a=-1,b=0.5", 2);
  double gcr = kernel_gamma_crit(ring);
  for (double gamma : {0.1, gcr}) {
    EnergyBreakdown e = energy_autocorr_analytic(curve, ring, gamma, 0.05);
    CHECK(std::abs(e.total - (1.0 - gamma / gcr) * 2.0) < 1e-10);
  }
}

TEST_CASE("direct grid route approximates the stripe closed form") {
  TorusGrid g = make_grid(2, 256);
  auto stripe = make_laminate(2, 1, 0.3, 1);
  Kernel ind = make_kernel("indicator", 2);
  BinaryField f = rasterize(stripe, g);
  PerimeterEstimate p = shape_perimeter(stripe);
  EnergyBreakdown e = energy_direct(f, ind, 0.5, 0.1, &p);
  CHECK(e.total == doctest::Approx(2.0 - 8.0 * 0.5 / (3.0 * kPi)).epsilon(0.01));
  CHECK(e.perimeter_term == 2.0);
  CHECK_THROWS_AS((void)energy_direct(f, ind, 0.5, 0.02, &p), Error);  // < 8h
}

TEST_CASE("cross-method agreement on ball, stripe, square") {
  TorusGrid g = make_grid(2, 256);
  const double eps = 0.05;
  std::vector<ShapeSpec> shapes = {make_ball(2, {0.5, 0.5, 0.0}, 0.2),
                                   make_laminate(2, 1, 0.3, 1),
                                   make_square(0.5, 0.5, 0.5)};
  for (const char* spec : {"indicator", "helmholtz"}) {
    Kernel k = make_kernel(spec, 2);
    for (const auto& s : shapes) {
      BinaryField f = rasterize(s, g);
      CorrelationMap m = correlation_map(f);
      PerimeterEstimate p = shape_perimeter(s);
      EnergyBreakdown direct = energy_direct(f, k, 1.0, eps, &p, &m);
      RadialCorrelation rc = radial_average(m, 4 * g.samples);
      EnergyBreakdown reform = energy_autocorr(rc, k, 1.0, eps, p);
      CHECK(reform.nonlocal_term ==
            doctest::Approx(direct.nonlocal_term).epsilon(0.02));
      CHECK(reform.total == doctest::Approx(direct.total).epsilon(0.05));
    }
  }
}

TEST_CASE("the two direct summations are the same integers") {
  TorusGrid g = make_grid(2, 128);
  auto square = make_square(0.5, 0.5, 0.5);
  BinaryField f = rasterize(square, g);
  CorrelationMap m = correlation_map(f);
  CHECK(direct_identity_gap(f, m, 128, 2024) <= 1e-12);

  // and the literal bit route reproduces the correlation-route nonlocal sum
  Kernel ind = make_kernel("indicator", 2);
  std::vector<std::size_t> all_shifts;
  for (std::size_t i = 1; i < f.bits.size(); ++i) all_shifts.push_back(i);
  double nl_bits = nonlocal_direct_bits_at_shifts(f, all_shifts, ind, 0.1);
  EnergyBreakdown e = energy_direct(f, ind, 1.0, 0.1,
                                    nullptr, &m);
  CHECK(nl_bits == doctest::Approx(e.nonlocal_term).epsilon(1e-12));
}

TEST_CASE("slope-fit perimeter source is used when no analytic value given") {
  TorusGrid g = make_grid(2, 256);
  auto disk = make_ball(2, {0.5, 0.5, 0.0}, 0.2);
  BinaryField f = rasterize(disk, g);
  Kernel ind = make_kernel("indicator", 2);
  EnergyBreakdown e = energy_direct(f, ind, 0.5, 0.0625);
  CHECK(e.perimeter_source == PerimeterMethod::slope_fit);
  CHECK(e.perimeter_term == doctest::Approx(0.4 * kPi).epsilon(0.05));
}

TEST_CASE("gamma limit energy and lower bound margin") {
  PerimeterEstimate p{2.0, PerimeterMethod::analytic, 0.0};
  CHECK(gamma_limit_energy(p, 0.5, 1.0) == doctest::Approx(1.0));
  CHECK(gamma_limit_energy(p, 1.0, 1.0) == doctest::Approx(0.0));
  PerimeterEstimate p16{16.0, PerimeterMethod::analytic, 0.0};
  CHECK(gamma_limit_energy(p16, 1.5, 1.0) == doctest::Approx(-8.0));

  auto stripe = make_laminate(2, 1, 0.3, 1);
  Kernel ind = make_kernel("indicator", 2);
  EnergyBreakdown es = energy_autocorr_analytic(
      analytic_correlation_curve(stripe), ind, 0.5, 0.1);
  CHECK(std::abs(lower_bound_margin(es, kernel_gamma_crit(ind))) < 1e-10);

  TorusGrid g = make_grid(2, 256);
  Kernel helm = make_kernel("helmholtz", 2);
  double gc = integrated_kernel(helm).gamma_crit();
  auto square = make_square(0.5, 0.5, 0.5);
  PerimeterEstimate psq = shape_perimeter(square);
  EnergyBreakdown eq = energy_direct(rasterize(square, g), helm, 0.5, 0.05, &psq);
  CHECK(lower_bound_margin(eq, gc) > 0.0);
}

TEST_CASE("scaling identity") {
  Kernel ind = make_kernel("indicator", 2);
  auto stripe = make_laminate(2, 1, 0.3, 1);
  CHECK(scaling_identity_check(stripe, ind, 0.5, 0.05, 1.0, 0).rel_gap < 1e-14);
  CHECK(scaling_identity_check(stripe, ind, 0.5, 0.05, 2.0, 0).rel_gap < 1e-10);
  CHECK(scaling_identity_check(stripe, ind, 0.5, 0.05, 4.0, 0).rel_gap < 1e-10);

  Kernel helm = make_kernel("helmholtz", 2);
  ScalingCheck grid = scaling_identity_check(make_square(0.5, 0.5, 0.5), helm,
                                             0.5, 0.1, 2.0, 256);
  CHECK(grid.rel_gap < 0.01);
}

TEST_CASE("epsilon sweep: stripes are constant, squares extrapolate to the limit") {
  Kernel ind = make_kernel("indicator", 2);
  SweepResult st = epsilon_sweep(make_laminate(2, 1, 0.3, 1), ind, 0.5,
                                 {0.1, 0.05, 0.025}, 256);
  double expect = 2.0 - 8.0 * 0.5 / (3.0 * kPi);
  REQUIRE(st.rows.size() == 3);
  for (const auto& row : st.rows)
    CHECK(std::abs(row.energy.total - expect) < 1e-10);
  CHECK(st.extrapolated_limit == doctest::Approx(expect).epsilon(1e-9));
  // rows sorted by decreasing epsilon
  CHECK(st.rows.front().energy.epsilon > st.rows.back().energy.epsilon);

  Kernel helm = make_kernel("helmholtz", 2);
  double gc = integrated_kernel(helm).gamma_crit();
  SweepResult sq = epsilon_sweep(make_square(0.5, 0.5, 0.5), helm, 0.5 * gc,
                                 {0.2, 0.1, 0.05}, 512);
  CHECK(sq.extrapolated_limit == doctest::Approx(1.0).epsilon(0.03));
  for (const auto& row : sq.rows)
    CHECK(row.energy.total >= sq.extrapolated_limit - 0.02);
  // diagnostics: I1 grows towards ||Phi||_1, I2 and I3 shrink with eps
  double l1 = integrated_kernel(helm).l1_norm();
  CHECK(sq.rows.back().i1 == doctest::Approx(l1).epsilon(0.05));
  CHECK(sq.rows.back().i3 < sq.rows.front().i3);

  CHECK_THROWS_AS(
      (void)epsilon_sweep(make_laminate(2, 1, 0.3, 1), ind, 0.5, {0.1, 0.05}, 256),
      Error);
  CHECK_THROWS_AS((void)epsilon_sweep(make_ball(2, {0.5, 0.5, 0.0}, 0.2), ind,
                                      0.5, {0.1, 0.05, 0.025}, 256),
                  Error);
}

TEST_CASE("supercritical laminates: energy blows down while perimeter grows") {
  Kernel ind = make_kernel("indicator", 2);
  double gamma = 1.5 * kernel_gamma_crit(ind);
  TorusGrid g = make_grid(2, 512);
  double prev = 0.0;
  for (int m : {4, 8}) {
    auto lam = make_laminate(2, 1, 0.5, m);
    double eps = 0.25 / m;
    BinaryField f = rasterize(lam, g);
    PerimeterEstimate p = shape_perimeter(lam);
    EnergyBreakdown e = energy_direct(f, ind, gamma, eps, &p);
    CHECK(e.total == doctest::Approx(-double(m)).epsilon(0.05));
    CHECK(e.total < prev);
    prev = e.total;
  }
}

TEST_CASE("phi-form diagnostic matches the difference form") {
  TorusGrid g = make_grid(2, 256);
  auto stripe = make_laminate(2, 1, 0.3, 1);
  Kernel ind = make_kernel("indicator", 2);
  BinaryField f = rasterize(stripe, g);
  RadialCorrelation rc = radial_average(correlation_map(f), 4 * g.samples);
  PerimeterEstimate p = shape_perimeter(stripe);
  double via_phi = energy_phi_form(rc, integrated_kernel(ind), 0.5, 0.05, p);
  EnergyBreakdown via_diff = energy_autocorr(rc, ind, 0.5, 0.05, p);
  CHECK(via_phi == doctest::Approx(via_diff.total).epsilon(0.02));
}

TEST_CASE("3D energy smoke test: slab with indicator kernel") {
  TorusGrid g = make_grid(3, 64);
  auto slab = make_laminate(3, 1, 0.3, 1);
  Kernel ind = make_kernel("indicator", 3);
  BinaryField f = rasterize(slab, g);
  PerimeterEstimate p = shape_perimeter(slab);
  EnergyBreakdown direct = energy_direct(f, ind, 0.5, 0.15, &p);
  EnergyBreakdown exact = energy_autocorr_analytic(
      analytic_correlation_curve(slab), ind, 0.5, 0.15);
  CHECK(direct.total == doctest::Approx(exact.total).epsilon(0.02));
}
