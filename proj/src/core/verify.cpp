#include "gammalab/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "gammalab/anneal.hpp"
#include "gammalab/bessel.hpp"
#include "gammalab/constants.hpp"
#include "gammalab/correlation.hpp"
#include "gammalab/energy.hpp"
#include "gammalab/field.hpp"
#include "gammalab/kernels.hpp"
#include "gammalab/quadrature.hpp"

namespace gammalab {

namespace {

struct Checker {
  bool ok = true;
  std::ostringstream note;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note << (note.tellp() > 0 ? "; " : "") << what;
    }
  }
  void expect_near(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      ok = false;
      note << (note.tellp() > 0 ? "; " : "") << what << ": got " << got
           << ", want " << want << " +/- " << tol;
    }
  }
  void expect_rel(double got, double want, double rel, const std::string& what) {
    expect_near(got, want, rel * std::abs(want), what);
  }
};

std::vector<std::string> builtin_kernel_specs() {
  return {"indicator", "gaussian:s=1.0", "ring:a=-1,b=0.5", "helmholtz"};
}

// --- kernel checks ----------------------------------------------------------

void check_gamma_crit_consistency(Checker& c) {
  for (int dim : {2, 3}) {
    for (const auto& spec : builtin_kernel_specs()) {
      Kernel k = make_kernel(spec, dim);
      auto table = integrated_kernel(k);
      double a = table.gamma_crit(), b = table.gamma_crit_phi_route();
      c.expect(std::abs(a - b) <= 1e-8 * std::abs(a),
               spec + " n=" + std::to_string(dim) + ": def-gam vs Phi route");
    }
  }
  c.expect_rel(integrated_kernel(make_kernel("helmholtz", 2)).gamma_crit(), 1.0,
               1e-6, "helmholtz n=2 gamma_crit");
  c.expect_rel(integrated_kernel(make_kernel("helmholtz", 3)).gamma_crit(), 1.0,
               1e-6, "helmholtz n=3 gamma_crit");
  c.expect_rel(integrated_kernel(make_kernel("indicator", 2)).gamma_crit(),
               0.75 * kPi, 1e-10, "indicator n=2 gamma_crit");
  c.expect_rel(integrated_kernel(make_kernel("ring:a=-1,b=0.5", 2)).gamma_crit(),
               0.3, 1e-8, "ring n=2 gamma_crit");
}

void check_phi_consistency(Checker& c) {
  for (int dim : {2, 3}) {
    for (const auto& spec : builtin_kernel_specs()) {
      auto table = integrated_kernel(make_kernel(spec, dim));
      c.expect(std::abs(table.l1_norm() - table.first_moment()) <=
                   1e-8 * table.first_moment(),
               spec + " n=" + std::to_string(dim) + ": ||Phi||_1 vs moment");
    }
    auto ind = integrated_kernel(make_kernel("indicator", dim));
    c.expect_near(ind.l1_norm(), double(dim) / (dim + 1), 1e-10,
                  "indicator ||Phi||_1 = n/(n+1)");
    for (double r : {0.1, 0.35, 0.8})
      c.expect_near(ind.phi(r), 1.0 - std::pow(r, dim), 2e-8,
                    "indicator Phi(r) = 1 - r^n");
  }
}

void check_helmholtz_values(Checker& c) {
  auto h2 = integrated_kernel(make_kernel("helmholtz", 2));
  auto h3 = integrated_kernel(make_kernel("helmholtz", 3));
  c.expect_rel(h2.first_moment(), 0.5 * kPi, 1e-6, "helmholtz n=2 moment");
  c.expect_rel(h3.first_moment(), 2.0, 1e-6, "helmholtz n=3 moment");
  c.expect_rel(h2.phi0(), 1.0, 1e-6, "helmholtz n=2 normalization");
  c.expect_rel(h3.phi0(), 1.0, 1e-6, "helmholtz n=3 normalization");
  // Closed forms: Phi_2(r) = r K_1(r), Phi_3(r) = (1+r) e^{-r}.
  for (double r : {0.05, 0.4, 1.5, 4.0}) {
    c.expect_rel(h2.phi(r), r * bessel_k(1.0, r), 2e-6, "Phi_2 = r K_1(r)");
    c.expect_rel(h3.phi(r), (1.0 + r) * std::exp(-r), 2e-6,
                 "Phi_3 = (1+r)e^{-r}");
  }
}

void check_bessel(Checker& c) {
  double want = std::sqrt(0.5 * kPi) * std::exp(-1.0);
  c.expect_rel(bessel_k(0.5, 1.0), want, 1e-10, "K_{1/2}(1)");
  c.expect_rel(bessel_k(0.0, 1.0), 0.421024438241, 1e-9, "K_0(1)");
  c.expect_rel(bessel_k(1.0, 1.0), 0.601907230197, 1e-9, "K_1(1)");
  double ratio = bessel_k(0.0, 30.0 - 1e-12) / bessel_k_asymptotic(0.0, 30.0);
  c.expect_near(ratio, 1.0, 1e-3, "K_0 switchover ratio at r=30");
}

void check_phi_limits(Checker& c) {
  for (const auto& spec : builtin_kernel_specs()) {
    auto t = integrated_kernel(make_kernel(spec, 2));
    double tol = t.quadrature_tol();
    c.expect(t.min_phi() >= -tol, spec + ": Phi >= 0 (H3)");
    double lo = t.radii().front(), hi = t.radii().back();
    c.expect(std::abs(lo * t.phi(lo)) <= 100 * tol + 1e-5 * t.phi0(),
             spec + ": r Phi(r) -> 0 at small r");
    c.expect(std::abs(hi * t.phi(hi)) <= 100 * tol + 1e-8,
             spec + ": r Phi(r) -> 0 at large r");
  }
}

void check_moment_scaling(Checker& c) {
  // Prop 4.1(iii) with j=1: the moment integral decays linearly in eps.
  for (const auto& spec : builtin_kernel_specs()) {
    auto t = integrated_kernel(make_kernel(spec, 2));
    std::vector<double> eps = {0.1, 0.05, 0.025};
    std::vector<double> m;
    for (double e : eps) {
      auto f = [&](double r) { return r * t.phi(r / e) / e; };
      m.push_back(integrate_adaptive(f, 1e-12, 1.0, 1e-12));
    }
    c.expect(m[0] > m[1] && m[1] > m[2] && m[2] > 0.0,
             spec + ": moment decreasing in eps");
    for (std::size_t i = 0; i < eps.size(); ++i)
      c.expect(m[i] <= 0.05 * t.l1_norm() * (eps[i] / 0.025),
               spec + ": moment below 0.05 ||Phi||_1 * eps/eps0");
  }
}

void check_ring_h3(Checker& c) {
  Kernel good = make_kernel("ring:a=-1,b=0.5", 2);
  auto rep = verify_hypotheses(good);
  c.expect(rep.h1 && rep.h2 && rep.h3, "ring(-1, 0.5) admissible");
  auto t = integrated_kernel(good);
  c.expect_near(t.phi(0.5), 0.5 * kPi + kPi * 0.25, 1e-8,
                "ring Phi(0.5) = pi/2 + pi r^2");
  c.expect_near(t.phi(1.5), kPi * (4.0 - 2.25) / 2.0, 1e-8,
                "ring Phi(1.5) = pi(4-r^2)/2");
  c.expect_rel(t.first_moment(), 5.0 * kPi / 3.0, 1e-8, "ring first moment");

  Kernel bad = make_kernel("ring:a=-1,b=0.1", 2);
  auto rep2 = verify_hypotheses(bad);
  c.expect(rep2.h1 && !rep2.h3, "ring(-1, 0.1) violates H3");
  bool threw = false;
  try {
    integrated_kernel(bad);
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::kernel_inadmissible;
  }
  c.expect(threw, "ring(-1, 0.1) table throws KernelInadmissible");
}

void check_q_crit(Checker& c) {
  c.expect_near(q_crit(1.0, 1.0 / 6.0), -1.25, 1e-12, "q_crit(1, 1/6)");
  c.expect_near(q_crit(1.0, 0.25), 0.0, 1e-12, "q_crit(1, 1/4)");
  c.expect_near(q_crit(2.0, 0.25), 0.75, 1e-12, "q_crit(2, 1/4)");
}

void check_threshold(Checker& c) {
  c.expect_near(ball_laminate_threshold(2), 1.0 / kPi, 1e-12, "threshold n=2");
  double theta = ball_laminate_threshold(2);
  double disk_p = 2.0 * std::sqrt(kPi * theta);
  c.expect_near(disk_p, 2.0, 1e-10, "disk-vs-laminate perimeter crossover");
  c.expect_near(ball_laminate_threshold(3),
                std::pow(2.0 / 3.0, 0.75) / std::sqrt(4.0 * kPi / 3.0), 1e-12,
                "threshold n=3 formula");
}

// --- shape / field checks ---------------------------------------------------

void check_shape_examples(Checker& c) {
  auto disk = make_ball(2, {0.5, 0.5, 0.0}, 0.2);
  c.expect_near(shape_volume(disk), kPi * 0.04, 1e-14, "disk area");
  c.expect_near(shape_perimeter(disk).value, 0.4 * kPi, 1e-14, "disk perimeter");
  auto lam = make_laminate(2, 1, 0.3, 5);
  c.expect_near(shape_volume(lam), 0.3, 1e-14, "laminate volume");
  c.expect_near(shape_perimeter(lam).value, 10.0, 1e-14, "laminate perimeter 2m");
  c.expect_near(shape_volume(make_complement(disk)), 1.0 - kPi * 0.04, 1e-14,
                "complement volume");
  auto square = make_square(0.5, 0.5, 0.5);
  c.expect_near(shape_volume(square), 0.25, 1e-14, "square area");
  c.expect_near(shape_perimeter(square).value, 2.0, 1e-14, "square perimeter");
}

void check_raster(Checker& c) {
  TorusGrid g = make_grid(2, 256);
  BinaryField lam = rasterize(make_laminate(2, 1, 0.5, 1), g);
  c.expect(lam.volume_fraction() == 0.5, "laminate theta=1/2 rasterizes exactly");
  auto disk = make_ball(2, {0.5, 0.5, 0.0}, 0.2);
  BinaryField b = rasterize(disk, g);
  double bound = shape_perimeter(disk).value * std::sqrt(2.0) * g.cell();
  c.expect(std::abs(b.volume_fraction() - shape_volume(disk)) <= bound,
           "disk raster volume bound");
  BinaryField full = rasterize(make_complement(make_polygon({})), g);
  c.expect(full.volume_fraction() == 1.0, "complement of empty set is full");
}

void check_complement_translation(Checker& c) {
  TorusGrid g = make_grid(2, 64);
  auto disk = make_ball(2, {0.3, 0.7, 0.0}, 0.17);
  BinaryField a = rasterize(disk, g);
  BinaryField nc = rasterize(make_complement(disk), g);
  bool equal = true;
  BinaryField neg = field_complement(a);
  for (std::size_t i = 0; i < a.bits.size(); ++i)
    equal = equal && neg.bits[i] == nc.bits[i];
  c.expect(equal, "complement raster = bitwise negation");
  c.expect_near(shape_perimeter(make_complement(disk)).value,
                shape_perimeter(disk).value, 1e-14, "complement perimeter");

  for (const ShapeSpec& s :
       {disk, make_laminate(2, 2, 0.3, 3)}) {
    std::array<double, 3> delta{7 * g.cell(), 61 * g.cell(), 0.0};
    BinaryField before = rasterize(s, g);
    BinaryField after = rasterize(shape_translate(s, delta), g);
    BinaryField shifted = field_shift(before, {7, 61, 0});
    bool same = after.ones == shifted.ones;
    for (std::size_t i = 0; same && i < after.bits.size(); ++i)
      same = after.bits[i] == shifted.bits[i];
    c.expect(same, "integer-cell translation permutes bits");
  }
}

void check_l1_perimeter(Checker& c) {
  TorusGrid g = make_grid(2, 256);
  c.expect_near(l1_interface_perimeter(rasterize(make_laminate(2, 1, 0.5, 1), g)).value,
                2.0, 1e-12, "stripe l1 perimeter exact");
  c.expect_near(
      l1_interface_perimeter(rasterize(make_square(0.5, 0.5, 0.5), g)).value,
      2.0, 1e-12, "square l1 perimeter exact");
  BinaryField empty{g, std::vector<std::uint8_t>(g.cell_count(), 0), 0};
  c.expect(l1_interface_perimeter(empty).value == 0.0, "empty field l1 = 0");
  TorusGrid fine = make_grid(2, 1024);
  double l1_disk =
      l1_interface_perimeter(rasterize(make_ball(2, {0.5, 0.5, 0.0}, 0.2), fine)).value;
  c.expect_near(l1_disk, 1.6, 0.03, "disk l1 perimeter ~ 8r (anisotropy bias)");
}

void check_volume_convergence(Checker& c) {
  auto tri = make_polygon({{0.2, 0.2}, {0.8, 0.3}, {0.4, 0.75}});
  auto disk = make_ball(2, {0.5, 0.5, 0.0}, 0.23);
  for (const ShapeSpec& s : {tri, disk}) {
    double vol = shape_volume(s);
    double per = shape_perimeter(s).value;
    double prev = 1e9;
    for (int n : {64, 128, 256, 512}) {
      TorusGrid g = make_grid(2, n);
      double err = std::abs(rasterize(s, g).volume_fraction() - vol);
      c.expect(err <= per * std::sqrt(2.0) * g.cell(), "raster volume O(1/N) bound");
      prev = std::max(err, 1e-12);
    }
    (void)prev;
  }
}

void check_laminate_weak_star(Checker& c) {
  // Coarse block averages of v_k converge to theta (the weak-* limit).
  TorusGrid g = make_grid(2, 512);
  const int blocks = 4, bs = 512 / blocks;
  double worst4 = 0.0, worst16 = 0.0;
  for (int k : {2, 16}) {
    BinaryField f = rasterize(laminate_sequence(k, 0.3), g);
    double worst = 0.0;
    for (int bi = 0; bi < blocks; ++bi)
      for (int bj = 0; bj < blocks; ++bj) {
        std::int64_t cnt = 0;
        for (int i = 0; i < bs; ++i)
          for (int j = 0; j < bs; ++j) cnt += f.at(bi * bs + i, bj * bs + j);
        worst = std::max(worst,
                         std::abs(cnt / double(bs * bs) - 0.3));
      }
    (k == 4 ? worst4 : worst16) = worst;
  }
  c.expect(worst16 < worst4 && worst16 <= 0.05,
           "laminate block averages approach theta");
}

// --- autocorrelation checks -------------------------------------------------

void check_correlation_basics(Checker& c) {
  TorusGrid g = make_grid(2, 32);
  std::mt19937_64 rng(7);
  BinaryField f = random_field(g, 0.35, 11);
  CorrelationMap fast = correlation_map(f);
  CorrelationMap slow = correlation_map_direct(f);
  bool same = true;
  for (std::size_t i = 0; i < fast.counts.size(); ++i)
    same = same && fast.counts[i] == slow.counts[i];
  c.expect(same, "FFT correlation equals direct shifted sum");
  const int n = g.samples;
  bool range_ok = true, sym_ok = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto v = fast.counts[(std::size_t)i * n + j];
      range_ok = range_ok && v >= 0 && v <= fast.count0;
      sym_ok = sym_ok &&
               v == fast.counts[(std::size_t)((n - i) % n) * n + (n - j) % n];
    }
  c.expect(range_ok, "0 <= C <= C(0)");
  c.expect(sym_ok, "C(z) = C(-z)");
  (void)rng;

  BinaryField ones{g, std::vector<std::uint8_t>(g.cell_count(), 1),
                   g.cell_count()};
  CorrelationMap m1 = correlation_map(ones);
  bool all_one = true;
  for (auto v : m1.counts) all_one = all_one && v == g.cell_count();
  c.expect(all_one, "u == 1 has constant correlation");
}

void check_disk_covariogram(Checker& c) {
  TorusGrid g = make_grid(2, 128);
  auto disk = make_ball(2, {0.5, 0.5, 0.0}, 0.2);
  BinaryField f = rasterize(disk, g);
  CorrelationMap m = correlation_map(f);
  // shift (0.2, 0): closed-form two-disk overlap
  int cells = static_cast<int>(0.2 * g.samples);
  double got = m.value_at((std::size_t)cells);  // shift (0, 0.2): row 0
  double want = analytic_autocorrelation(disk, 0.2);
  c.expect_near(want, 0.0491346938, 1e-8, "disk covariogram closed form");
  c.expect_rel(got, want, 0.01, "grid covariogram vs closed form (1%)");
  c.expect_rel(m.base(), kPi * 0.04, 0.01, "C(0) = volume");
}

void check_radial_curves(Checker& c) {
  TorusGrid g = make_grid(2, 256);
  auto stripe = make_laminate(2, 1, 0.3, 1);
  RadialCorrelation rc = radial_average(correlation_map(rasterize(stripe, g)),
                                        4 * g.samples);
  double worst = 0.0;
  for (std::size_t i = 0; i < rc.radii.size(); ++i) {
    double r = rc.radii[i];
    if (r < 0.02 || r > 0.25) continue;
    worst = std::max(worst, std::abs(rc.c[i] - (0.3 - 2.0 * r / kPi)));
  }
  c.expect(worst < 4e-3, "stripe radial curve matches theta - 2r/pi");

  auto disk = make_ball(2, {0.5, 0.5, 0.0}, 0.2);
  RadialCorrelation rd = radial_average(correlation_map(rasterize(disk, g)),
                                        4 * g.samples);
  worst = 0.0;
  for (std::size_t i = 0; i < rd.radii.size(); ++i) {
    double r = rd.radii[i];
    if (r < 0.02 || r > 0.45) continue;
    worst = std::max(worst, std::abs(rd.c[i] - analytic_autocorrelation(disk, r)));
  }
  c.expect(worst < 4e-3, "disk radial curve matches covariogram");
}

void check_slope_consistency(Checker& c, int n, double tol) {
  TorusGrid g = make_grid(2, n);
  struct Case {
    ShapeSpec s;
    const char* what;
  };
  std::vector<Case> cases = {{make_ball(2, {0.5, 0.5, 0.0}, 0.2), "ball"},
                             {make_laminate(2, 1, 0.3, 1), "stripe"},
                             {make_square(0.5, 0.5, 0.5), "square"}};
  for (const auto& [s, what] : cases) {
    RadialCorrelation rc =
        radial_average(correlation_map(rasterize(s, g)), 4 * g.samples);
    PerimeterEstimate p = perimeter_from_slope(rc);
    c.expect_rel(p.value, shape_perimeter(s).value, tol,
                 std::string("slope-fit perimeter, ") + what);
  }
  // u == 1 has zero slope
  BinaryField ones{g, std::vector<std::uint8_t>(g.cell_count(), 1),
                   g.cell_count()};
  RadialCorrelation rc = radial_average(correlation_map(ones), 4 * g.samples);
  c.expect(std::abs(perimeter_from_slope(rc).value) < 1e-9, "full torus P = 0");
}

void check_lipschitz(Checker& c) {
  TorusGrid g = make_grid(2, 256);
  for (const ShapeSpec& s :
       {make_ball(2, {0.5, 0.5, 0.0}, 0.2), make_laminate(2, 1, 0.3, 1)}) {
    double lips = shape_perimeter(s).value / slope_perimeter_factor(2);
    RadialCorrelation rc =
        radial_average(correlation_map(rasterize(s, g)), 4 * g.samples);
    double binw = rc.r_max / (4 * g.samples);
    bool ok = true;
    for (std::size_t i = 0; i + 1 < rc.radii.size(); ++i) {
      double dr = rc.radii[i + 1] - rc.radii[i];
      double dc = std::abs(rc.c[i + 1] - rc.c[i]);
      if (dc > lips * (1.1 * dr + 2.0 * binw) + 1e-4) ok = false;
    }
    c.expect(ok, "radial curve Lipschitz bound");
  }
}

void check_small_r_fit(Checker& c, int n, double tol1, double tol2) {
  TorusGrid g = make_grid(2, n);
  auto square = make_square(0.5, 0.5, 0.5);
  RadialCorrelation rc =
      radial_average(correlation_map(rasterize(square, g)), 4 * g.samples);
  SmallRFit fit = fit_small_r_polynomial(rc, 2, 0.01, 0.2);
  c.expect_rel(fit.a[0], -2.0 / kPi, tol1, "square a1 = -2/pi");
  c.expect_rel(fit.a[1], 1.0 / kPi, tol2, "square a2 = 1/pi");

  auto stripe = make_laminate(2, 1, 0.3, 1);
  RadialCorrelation rs =
      radial_average(correlation_map(rasterize(stripe, g)), 4 * g.samples);
  SmallRFit fs = fit_small_r_polynomial(rs, 2, 0.01, 0.2);
  c.expect_rel(fs.a[0], -2.0 / kPi, tol1, "stripe a1 = -2/pi");
  c.expect(std::abs(fs.a[1]) <= 0.03 * std::abs(fs.a[0]) + 1e-3,
           "stripe a2 ~ 0");

  auto tri = make_polygon({{0.25, 0.25}, {0.75, 0.3}, {0.4, 0.8}});
  RadialCorrelation rt =
      radial_average(correlation_map(rasterize(tri, g)), 4 * g.samples);
  SmallRFit ft = fit_small_r_polynomial(rt, 2, 0.01, 0.12);
  for (const SmallRFit* f : {&fit, &ft, &fs})
    c.expect(f->a[1] >= -0.01 * std::abs(f->a[0]), "a2 >= -0.01 |a1|");
}

// --- energy checks ----------------------------------------------------------

void check_stripe_exactness(Checker& c) {
  auto stripe = make_laminate(2, 1, 0.3, 1);
  AnalyticCorrelation curve = analytic_correlation_curve(stripe);
  Kernel ind = make_kernel("indicator", 2);
  double gc = kernel_gamma_crit(ind);
  for (double gamma : {0.0, 0.5, 0.75 * kPi}) {
    EnergyBreakdown e = energy_autocorr_analytic(curve, ind, gamma, 0.1);
    c.expect_near(e.total, 2.0 - 8.0 * gamma / (3.0 * kPi), 1e-10,
                  "stripe energy 2 - 8 gamma/(3 pi)");
  }
  EnergyBreakdown crit = energy_autocorr_analytic(curve, ind, gc, 0.1);
  c.expect_near(crit.total, 0.0, 1e-10, "zero at gamma_crit");

  Kernel ring = make_kernel("ring:a=-1,b=0.5", 2);
  double gcr = kernel_gamma_crit(ring);
  EnergyBreakdown re = energy_autocorr_analytic(curve, ring, 0.1, 0.05);
  c.expect_near(re.total, (1.0 - 0.1 / gcr) * 2.0, 1e-10,
                "ring-kernel stripe exactness");
}

void check_trivial_energies(Checker& c) {
  TorusGrid g = make_grid(2, 64);
  Kernel ind = make_kernel("indicator", 2);
  BinaryField zero{g, std::vector<std::uint8_t>(g.cell_count(), 0), 0};
  PerimeterEstimate p0{0.0, PerimeterMethod::analytic, 0.0};
  EnergyBreakdown e0 = energy_direct(zero, ind, 1.0, 0.2, &p0);
  c.expect(e0.total == 0.0 && e0.nonlocal_term == 0.0, "empty set energy 0");
  BinaryField one{g, std::vector<std::uint8_t>(g.cell_count(), 1),
                  g.cell_count()};
  EnergyBreakdown e1 = energy_direct(one, ind, 1.0, 0.2, &p0);
  c.expect(e1.total == 0.0 && e1.nonlocal_term == 0.0, "full torus energy 0");
}

void check_method_agreement(Checker& c, int n, const std::vector<std::string>& kernels) {
  TorusGrid g = make_grid(2, n);
  double eps = 0.05;
  std::vector<ShapeSpec> shapes = {make_ball(2, {0.5, 0.5, 0.0}, 0.2),
                                   make_laminate(2, 1, 0.3, 1),
                                   make_square(0.5, 0.5, 0.5)};
  for (const auto& spec : kernels) {
    Kernel k = make_kernel(spec, 2);
    for (const auto& s : shapes) {
      BinaryField f = rasterize(s, g);
      CorrelationMap m = correlation_map(f);
      PerimeterEstimate p = shape_perimeter(s);
      EnergyBreakdown direct = energy_direct(f, k, 1.0, eps, &p, &m);
      RadialCorrelation rc = radial_average(m, 4 * n);
      EnergyBreakdown reform = energy_autocorr(rc, k, 1.0, eps, p);
      c.expect_rel(reform.nonlocal_term, direct.nonlocal_term, 0.02,
                   spec + " nonlocal term, grid vs reformulated");
    }
  }
  // identity between the two direct summations
  BinaryField f = rasterize(shapes[0], g);
  CorrelationMap m = correlation_map(f);
  c.expect(direct_identity_gap(f, m, 64, 123) <= 1e-12,
           "bit sum equals 2(C(0)-C(z))");
}

void check_lower_bound(Checker& c, int n) {
  Kernel helm = make_kernel("helmholtz", 2);
  double gc = integrated_kernel(helm).gamma_crit();
  auto stripe = make_laminate(2, 1, 0.3, 1);
  Kernel ind = make_kernel("indicator", 2);
  EnergyBreakdown es = energy_autocorr_analytic(
      analytic_correlation_curve(stripe), ind, 0.5, 0.1);
  c.expect_near(lower_bound_margin(es, kernel_gamma_crit(ind)), 0.0, 1e-10,
                "stripe margin exactly 0");

  TorusGrid g = make_grid(2, n);
  auto square = make_square(0.5, 0.5, 0.5);
  BinaryField f = rasterize(square, g);
  PerimeterEstimate p = shape_perimeter(square);
  EnergyBreakdown eq = energy_direct(f, helm, 0.5, 0.05, &p);
  c.expect(lower_bound_margin(eq, gc) > 0.0, "square margin > 0");

  BinaryField zero{g, std::vector<std::uint8_t>(g.cell_count(), 0), 0};
  PerimeterEstimate p0{0.0, PerimeterMethod::analytic, 0.0};
  EnergyBreakdown e0 = energy_direct(zero, ind, 0.5, 0.1, &p0);
  c.expect(lower_bound_margin(e0, kernel_gamma_crit(ind)) == 0.0,
           "empty set margin 0");
}

void check_scaling(Checker& c, bool full) {
  Kernel ind = make_kernel("indicator", 2);
  auto stripe = make_laminate(2, 1, 0.3, 1);
  ScalingCheck a = scaling_identity_check(stripe, ind, 0.5, 0.05, 2.0, 0);
  c.expect(a.rel_gap <= 1e-10, "stripe scaling identity exact");
  ScalingCheck id = scaling_identity_check(stripe, ind, 0.5, 0.05, 1.0, 0);
  c.expect(id.rel_gap <= 1e-14, "ell = 1 is the identity");
  if (full) {
    Kernel helm = make_kernel("helmholtz", 2);
    ScalingCheck b = scaling_identity_check(make_square(0.5, 0.5, 0.5), helm,
                                            0.5, 0.1, 2.0, 512);
    c.expect(b.rel_gap <= 0.01, "square grid scaling within 1%");
  }
}

void check_sweep(Checker& c, bool full) {
  Kernel helm = make_kernel("helmholtz", 2);
  double gc = integrated_kernel(helm).gamma_crit();
  int n = full ? 1024 : 256;
  std::vector<double> eps = full ? std::vector<double>{0.2, 0.1, 0.05, 0.025}
                                 : std::vector<double>{0.2, 0.1, 0.05};
  SweepResult sw = epsilon_sweep(make_square(0.5, 0.5, 0.5), helm, 0.5 * gc,
                                 eps, n);
  double limit = (1.0 - 0.5) * 2.0;
  c.expect_rel(sw.extrapolated_limit, limit, full ? 0.01 : 0.03,
               "sweep extrapolates to (1-gamma/gamma_crit) P");
  for (const auto& row : sw.rows)
    c.expect(row.energy.total >= sw.extrapolated_limit - 0.02,
             "sweep rows above the limit (Prop 4.3)");
  // stripes: constant rows, exact limit
  Kernel ind = make_kernel("indicator", 2);
  SweepResult st = epsilon_sweep(make_laminate(2, 1, 0.3, 1), ind, 0.5,
                                 {0.1, 0.05, 0.025}, 256);
  double expect = 2.0 - 8.0 * 0.5 / (3.0 * kPi);
  for (const auto& row : st.rows)
    c.expect_near(row.energy.total, expect, 1e-10, "stripe sweep rows exact");
  c.expect_near(st.extrapolated_limit, expect, 1e-9, "stripe sweep limit");
}

void check_supercritical(Checker& c) {
  Kernel ind = make_kernel("indicator", 2);
  double gc = kernel_gamma_crit(ind);
  double gamma = 1.5 * gc;
  TorusGrid g = make_grid(2, 1024);
  double prev = 0.0;
  for (int m : {4, 8, 16}) {
    auto lam = make_laminate(2, 1, 0.5, m);
    double feature = 0.5 / m;
    double eps = 0.5 * feature;
    BinaryField f = rasterize(lam, g);
    PerimeterEstimate p = shape_perimeter(lam);
    EnergyBreakdown e = energy_direct(f, ind, gamma, eps, &p);
    c.expect_rel(e.total, -double(m), 0.05, "supercritical laminate energy ~ -m");
    c.expect(e.total <= -0.9 * (0.5 * 2.0 * m), "blow-up bound");
    c.expect(e.total < prev, "strictly decreasing in m");
    prev = e.total;
  }
}

void check_anneal_basics(Checker& c) {
  TorusGrid g = make_grid(2, 64);
  Kernel helm = make_kernel("helmholtz", 2);
  BinaryField f0 = rasterize(make_ball(2, {0.5, 0.5, 0.0}, 0.22), g);
  AnnealConfig cfg;
  cfg.steps = 4000;
  cfg.t0 = 0.01;
  cfg.decay = 0.999;
  cfg.seed = 42;
  cfg.record_every = 1000;
  Trajectory t1 = anneal(f0, helm, 0.5, 0.125, cfg);
  Trajectory t2 = anneal(f0, helm, 0.5, 0.125, cfg);
  c.expect(t1.snapshots.size() == t2.snapshots.size(), "deterministic layout");
  bool same = true;
  for (std::size_t i = 0; i < t1.snapshots.size(); ++i)
    same = same && t1.snapshots[i].checksum == t2.snapshots[i].checksum;
  c.expect(same, "identical seeds give identical trajectories");
  bool volume_ok = true, books_ok = true;
  for (const auto& s : t1.snapshots) {
    volume_ok = volume_ok && s.ones == f0.ones;
    books_ok = books_ok && s.bookkeeping_gap <= 1e-6;
  }
  c.expect(volume_ok, "volume conserved bit-exactly");
  c.expect(books_ok, "incremental energy matches recomputation (1e-6)");

  AnnealConfig zero = cfg;
  zero.steps = 0;
  Trajectory t0 = anneal(f0, helm, 0.5, 0.125, zero);
  c.expect(field_checksum(t0.final_field) == field_checksum(f0),
           "zero steps returns the initial field");

  // subcritical stability: annealing a rasterized ball cannot blow up
  double e_start = t1.snapshots.front().energy.total;
  double e_end = t1.snapshots.back().energy.total;
  c.expect(e_end <= e_start + cfg.t0 * 10.0, "subcritical ball is stable");
}

void check_classifier(Checker& c) {
  TorusGrid g = make_grid(2, 128);
  c.expect(classify_minimizer(rasterize(make_ball(2, {0.5, 0.5, 0.0}, 0.2), g)) ==
               MinimizerClass::ball,
           "rasterized ball classifies as ball");
  c.expect(classify_minimizer(rasterize(make_laminate(2, 1, 0.45, 1), g)) ==
               MinimizerClass::laminate,
           "laminate classifies as laminate");
  c.expect(classify_minimizer(random_field(g, 0.5, 99)) == MinimizerClass::other,
           "noise classifies as other");
  double q = isoperimetric_quotient(rasterize(make_ball(2, {0.5, 0.5, 0.0}, 0.2), g));
  c.expect_near(q, 1.0, 0.03, "ball quotient ~ 1");
  double ql = isoperimetric_quotient(rasterize(make_laminate(2, 1, 0.15, 1), g));
  c.expect_rel(ql, 2.0 / (2.0 * std::sqrt(kPi * 0.15)), 0.05,
               "thin laminate quotient ~ 1.457");
}

void check_anneal_dichotomy(Checker& c) {
  Kernel helm = make_kernel("helmholtz", 2);
  double gc = integrated_kernel(helm).gamma_crit();
  TorusGrid g = make_grid(2, 128);
  double eps = 8.0 * g.cell();
  int ball_hits = 0, lam_hits = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    AnnealConfig cfg;
    cfg.steps = 200000;
    cfg.t0 = 0.02;
    cfg.decay = std::pow(1e-3, 1.0 / cfg.steps);
    cfg.seed = seed;
    cfg.record_every = 50000;

    BinaryField ball0 = scatter_fraction(
        rasterize(make_ball(2, {0.5, 0.5, 0.0},
                            std::sqrt(0.15 / kPi)), g), 0.25, seed * 7 + 1);
    Trajectory tb = anneal(ball0, helm, 0.5 * gc, eps, cfg);
    if (classify_minimizer(tb.final_field) == MinimizerClass::ball) ++ball_hits;

    BinaryField lam0 = scatter_fraction(
        rasterize(make_laminate(2, 1, 0.45, 1), g), 0.25, seed * 7 + 3);
    Trajectory tl = anneal(lam0, helm, 0.5 * gc, eps, cfg);
    if (classify_minimizer(tl.final_field) == MinimizerClass::laminate)
      ++lam_hits;
  }
  c.expect(ball_hits >= 8, "theta=0.15 anneals to a ball in >= 8/10 seeds (got " +
                               std::to_string(ball_hits) + ")");
  c.expect(lam_hits >= 8, "theta=0.45 anneals to a laminate in >= 8/10 seeds (got " +
                              std::to_string(lam_hits) + ")");
}

void check_phi_form(Checker& c) {
  TorusGrid g = make_grid(2, 256);
  auto stripe = make_laminate(2, 1, 0.3, 1);
  Kernel ind = make_kernel("indicator", 2);
  auto table = integrated_kernel(ind);
  BinaryField f = rasterize(stripe, g);
  RadialCorrelation rc = radial_average(correlation_map(f), 4 * g.samples);
  PerimeterEstimate p = shape_perimeter(stripe);
  double via_phi = energy_phi_form(rc, table, 0.5, 0.05, p);
  EnergyBreakdown via_diff = energy_autocorr(rc, ind, 0.5, 0.05, p);
  c.expect_rel(via_phi, via_diff.total, 0.02,
               "Phi-form diagnostic matches difference form");
}

struct NamedCheck {
  const char* name;
  bool full_only;
  std::function<void(Checker&)> run;
};

}  // namespace

std::vector<CheckResult> run_verification(VerifyLevel level) {
  using namespace std::placeholders;
  std::vector<NamedCheck> checks = {
      {"gamma_crit_consistency", false, check_gamma_crit_consistency},
      {"phi_consistency", false, check_phi_consistency},
      {"helmholtz_values", false, check_helmholtz_values},
      {"bessel_k", false, check_bessel},
      {"phi_limits", false, check_phi_limits},
      {"moment_scaling", false, check_moment_scaling},
      {"ring_h3_witness", false, check_ring_h3},
      {"q_crit_values", false, check_q_crit},
      {"ball_laminate_threshold", false, check_threshold},
      {"shape_examples", false, check_shape_examples},
      {"rasterize_bounds", false, check_raster},
      {"complement_translation", false, check_complement_translation},
      {"l1_interface", false, check_l1_perimeter},
      {"volume_convergence", false, check_volume_convergence},
      {"laminate_weak_star", false, check_laminate_weak_star},
      {"correlation_oracle", false, check_correlation_basics},
      {"disk_covariogram", false, check_disk_covariogram},
      {"radial_curves", false, check_radial_curves},
      {"slope_fast", false,
       [](Checker& c) { check_slope_consistency(c, 256, 0.06); }},
      {"lipschitz_bound", false, check_lipschitz},
      {"small_r_fit_fast", false,
       [](Checker& c) { check_small_r_fit(c, 256, 0.05, 0.25); }},
      {"stripe_exactness", false, check_stripe_exactness},
      {"trivial_energies", false, check_trivial_energies},
      {"method_agreement_fast", false,
       [](Checker& c) {
         check_method_agreement(c, 256, {"indicator"});
       }},
      {"lower_bound_fast", false, [](Checker& c) { check_lower_bound(c, 128); }},
      {"scaling_stripe", false, [](Checker& c) { check_scaling(c, false); }},
      {"sweep_fast", false, [](Checker& c) { check_sweep(c, false); }},
      {"anneal_bookkeeping", false, check_anneal_basics},
      {"classifier", false, check_classifier},
      {"phi_form_diagnostic", false, check_phi_form},
      // full level
      {"slope_consistency_1024", true,
       [](Checker& c) { check_slope_consistency(c, 1024, 0.03); }},
      {"small_r_fit_2048", true,
       [](Checker& c) { check_small_r_fit(c, 2048, 0.01, 0.03); }},
      {"method_agreement_full", true,
       [](Checker& c) {
         check_method_agreement(c, 256, {"indicator", "helmholtz"});
       }},
      {"scaling_square_grid", true, [](Checker& c) { check_scaling(c, true); }},
      {"sweep_gamma_limit", true, [](Checker& c) { check_sweep(c, true); }},
      {"supercritical_blowup", true, check_supercritical},
      {"anneal_dichotomy", true, check_anneal_dichotomy},
  };

  std::vector<CheckResult> results;
  for (const auto& check : checks) {
    if (check.full_only && level != VerifyLevel::full) continue;
    Checker c;
    auto start = std::chrono::steady_clock::now();
    try {
      check.run(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.note << "exception: " << e.what();
    }
    auto end = std::chrono::steady_clock::now();
    CheckResult r;
    r.name = check.name;
    r.pass = c.ok;
    r.detail = c.ok ? "ok" : c.note.str();
    r.seconds = std::chrono::duration<double>(end - start).count();
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace gammalab
