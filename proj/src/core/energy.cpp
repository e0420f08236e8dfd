#include "gammalab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "gammalab/constants.hpp"
#include "gammalab/quadrature.hpp"

namespace gammalab {

namespace {

double cached_effective_radius(const Kernel& k) {
  static std::map<std::string, double> cache;
  std::string key = k.name + "|n=" + std::to_string(k.dim);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  double r = kernel_effective_radius(k, 1e-6);
  cache[key] = r;
  return r;
}

// Periodized kernel weights w(z) = sum_k K(|z + side*k| / eps) over the
// fundamental lattice, skipping the k=0 term of the zero shift (the
// difference field vanishes there and K may be singular at the origin).
std::vector<double> periodized_weights(const Kernel& k, const TorusGrid& grid,
                                       double eps, double side) {
  const int n = grid.samples;
  const double h = side / n;
  const double rho_cut = eps * cached_effective_radius(k);
  std::vector<double> w(grid.cell_count(), 0.0);
  const int copies = static_cast<int>(std::ceil((rho_cut + 0.5 * side) / side));

  auto min_image = [&](int idx) {
    int half = n / 2;
    int v = idx > half ? idx - n : idx;
    return v * h;
  };

  if (grid.dim == 2) {
    for (int i = 0; i < n; ++i) {
      double zi = min_image(i);
      for (int j = 0; j < n; ++j) {
        double zj = min_image(j);
        double acc = 0.0;
        for (int ki = -copies; ki <= copies; ++ki)
          for (int kj = -copies; kj <= copies; ++kj) {
            double xi = zi + side * ki, xj = zj + side * kj;
            double r = std::hypot(xi, xj);
            if (r > rho_cut || r == 0.0) continue;
            acc += k.profile(r / eps);
          }
        w[(std::size_t)i * n + j] = acc;
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      double zi = min_image(i);
      for (int j = 0; j < n; ++j) {
        double zj = min_image(j);
        for (int kk = 0; kk < n; ++kk) {
          double zk = min_image(kk);
          double acc = 0.0;
          for (int ki = -copies; ki <= copies; ++ki)
            for (int kj = -copies; kj <= copies; ++kj)
              for (int kl = -copies; kl <= copies; ++kl) {
                double xi = zi + side * ki, xj = zj + side * kj,
                       xk = zk + side * kl;
                double r = std::sqrt(xi * xi + xj * xj + xk * xk);
                if (r > rho_cut || r == 0.0) continue;
                acc += k.profile(r / eps);
              }
          w[((std::size_t)i * n + j) * n + kk] = acc;
        }
      }
    }
  }
  return w;
}

}  // namespace

EnergyBreakdown energy_direct(const BinaryField& f, const Kernel& k,
                              double gamma, double eps,
                              const PerimeterEstimate* analytic_perimeter,
                              const CorrelationMap* reuse_map,
                              double torus_side) {
  require(k.dim == f.grid.dim, ErrorCode::dimension_mismatch,
          "energy_direct: kernel and field dimensions differ");
  const int n = f.grid.samples;
  const double h = torus_side / n;
  require(eps >= 8.0 * h, ErrorCode::under_resolved,
          "energy_direct: eps must be resolved by at least 8 cells");

  CorrelationMap local;
  const CorrelationMap* map = reuse_map;
  if (map == nullptr) {
    local = correlation_map(f);
    map = &local;
  }

  std::vector<double> w = periodized_weights(k, f.grid, eps, torus_side);

  // NL = (1/eps) sum_z h^n K_eps(z) * 2 h^n (S0 - S(z))
  //    = 2 h^{2n} / eps^{n+1} * sum_z w(z) (S0 - S(z)).
  const std::int64_t s0 = map->count0;
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    acc += w[i] * static_cast<double>(s0 - map->counts[i]);
  const double h2n = std::pow(h, 2 * f.grid.dim);
  const double nl = 2.0 * h2n / std::pow(eps, f.grid.dim + 1) * acc;

  EnergyBreakdown out;
  out.method = EnergyMethod::direct_grid;
  out.epsilon = eps;
  out.gamma = gamma;
  out.nonlocal_term = nl;
  if (analytic_perimeter != nullptr) {
    out.perimeter_term = analytic_perimeter->value;
    out.perimeter_source = PerimeterMethod::analytic;
  } else {
    require(torus_side == 1.0, ErrorCode::invalid_argument,
            "energy_direct: slope-fit perimeter requires the unit torus");
    RadialCorrelation rc = radial_average(*map, 4 * n);
    PerimeterEstimate p = perimeter_from_slope(rc);
    out.perimeter_term = p.value;
    out.perimeter_source = PerimeterMethod::slope_fit;
    out.uncertainty = p.uncertainty;
  }
  out.total = out.perimeter_term - gamma * out.nonlocal_term;
  return out;
}

double nonlocal_direct_bits_at_shifts(const BinaryField& f,
                                      const std::vector<std::size_t>& shifts,
                                      const Kernel& k, double eps,
                                      double torus_side) {
  const int n = f.grid.samples;
  const double h = torus_side / n;
  std::vector<double> w = periodized_weights(k, f.grid, eps, torus_side);
  double acc = 0.0;
  for (std::size_t flat : shifts) {
    std::int64_t diff = 0;
    if (f.grid.dim == 2) {
      int si = static_cast<int>(flat) / n, sj = static_cast<int>(flat) % n;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          diff += std::abs(int(f.at(i, j)) - int(f.at((i + si) % n, (j + sj) % n)));
    } else {
      int si = static_cast<int>(flat / ((std::size_t)n * n));
      int sj = static_cast<int>((flat / n) % n);
      int sk = static_cast<int>(flat % n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l)
            diff += std::abs(int(f.at(i, j, l)) -
                             int(f.at((i + si) % n, (j + sj) % n, (l + sk) % n)));
    }
    acc += w[flat] * static_cast<double>(diff);
  }
  const double h2n = std::pow(h, 2 * f.grid.dim);
  return h2n / std::pow(eps, f.grid.dim + 1) * acc;
}

double direct_identity_gap(const BinaryField& f, const CorrelationMap& m,
                           int sample_count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t total = f.grid.cell_count();
  const int n = f.grid.samples;
  const double hn = std::pow(f.grid.cell(), f.grid.dim);
  double worst = 0.0;
  for (int s = 0; s < sample_count; ++s) {
    std::size_t flat = rng() % total;
    std::int64_t diff = 0;
    if (f.grid.dim == 2) {
      int si = static_cast<int>(flat) / n, sj = static_cast<int>(flat) % n;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          diff += std::abs(int(f.at(i, j)) - int(f.at((i + si) % n, (j + sj) % n)));
    } else {
      int si = static_cast<int>(flat / ((std::size_t)n * n));
      int sj = static_cast<int>((flat / n) % n);
      int sk = static_cast<int>(flat % n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l)
            diff += std::abs(int(f.at(i, j, l)) -
                             int(f.at((i + si) % n, (j + sj) % n, (l + sk) % n)));
    }
    double bits = hn * static_cast<double>(diff);
    double corr = 2.0 * hn * static_cast<double>(m.count0 - m.counts[flat]);
    worst = std::max(worst, std::abs(bits - corr));
  }
  return worst;
}

namespace {

struct CurveView {
  double c0 = 0.0;
  double r_avail = 0.0;
  std::function<double(double)> c;
};

// Core of the reformulated energy shared by the grid and analytic paths.
EnergyBreakdown autocorr_core(const CurveView& curve, const Kernel& k,
                              double gamma, double eps,
                              const PerimeterEstimate& perimeter,
                              EnergyMethod method) {
  require(k.dim >= 2, ErrorCode::invalid_argument, "autocorr energy: bad kernel");
  const double sigma = unit_sphere_area(k.dim);
  const double rho_cut = eps * cached_effective_radius(k);
  const double t_avail = curve.r_avail / eps;

  // NL = (2 sigma / eps) int_0^{T} t^{n-1} K(t) [c0 - c(eps t)] dt
  auto integrand = [&](double t) {
    return std::pow(t, k.dim - 1) * k.profile(t) * (curve.c0 - curve.c(eps * t));
  };
  double t_end = std::min(t_avail, rho_cut / eps);
  double integral = 0.0;
  if (t_end > 0.0) {
    // Split at profile breakpoints (discontinuous ring/indicator edges).
    std::vector<double> cuts{t_end};
    if (k.compact()) {
      if (k.support_radius < t_end) cuts.push_back(k.support_radius);
      if (k.support_radius / 2.0 < t_end) cuts.push_back(k.support_radius / 2.0);
      if (1.0 < t_end) cuts.push_back(1.0);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double lo = 0.0;
    for (double hi : cuts) {
      if (hi <= lo) continue;
      if (lo == 0.0)
        integral += integrate_graded_origin(integrand, hi, 1e-13);
      else
        integral += integrate_adaptive(integrand, lo, hi, 1e-13);
      lo = hi;
    }
  }
  double nl = 2.0 * sigma / eps * integral;

  // Tail beyond the available curve: |c0 - c| <= min(L r, c0) with the
  // Lipschitz constant L = (omega_{n-1} / n omega_n) P.
  double tail = 0.0;
  if (rho_cut > curve.r_avail) {
    double lipschitz = perimeter.value / slope_perimeter_factor(k.dim);
    auto bound = [&](double t) {
      return std::pow(t, k.dim - 1) * std::abs(k.profile(t)) *
             std::min(lipschitz * eps * t, curve.c0);
    };
    tail = 2.0 * sigma / eps *
           integrate_adaptive(bound, t_avail, rho_cut / eps, 1e-12);
  }

  EnergyBreakdown out;
  out.method = method;
  out.epsilon = eps;
  out.gamma = gamma;
  out.nonlocal_term = nl;
  out.perimeter_term = perimeter.value;
  out.perimeter_source = perimeter.method;
  out.total = out.perimeter_term - gamma * out.nonlocal_term;
  out.uncertainty = gamma * tail + perimeter.uncertainty;
  return out;
}

}  // namespace

EnergyBreakdown energy_autocorr(const RadialCorrelation& rc, const Kernel& k,
                                double gamma, double eps,
                                const PerimeterEstimate& perimeter) {
  require(rc.dim == k.dim, ErrorCode::dimension_mismatch,
          "energy_autocorr: dimensions differ");
  double r_avail = rc.radii.back();
  require(r_avail >= std::min(0.5, 20.0 * eps) - 2.0 * rc.cell,
          ErrorCode::insufficient_resolution,
          "energy_autocorr: radial curve too short for this eps");
  const RadialCorrelation* rcp = &rc;
  CurveView view;
  view.c0 = rc.c0;
  view.r_avail = r_avail;
  view.c = [rcp](double r) {
    const auto& rs = rcp->radii;
    auto it = std::lower_bound(rs.begin(), rs.end(), r);
    if (it == rs.begin()) return rcp->c.front();
    if (it == rs.end()) return rcp->c.back();
    std::size_t i = static_cast<std::size_t>(it - rs.begin());
    double r1 = rs[i - 1], r2 = rs[i];
    double f = (r - r1) / (r2 - r1);
    return rcp->c[i - 1] * (1.0 - f) + rcp->c[i] * f;
  };
  return autocorr_core(view, k, gamma, eps, perimeter,
                       EnergyMethod::autocorr_grid);
}

EnergyBreakdown energy_autocorr_analytic(const AnalyticCorrelation& curve,
                                         const Kernel& k, double gamma,
                                         double eps) {
  CurveView view{curve.c0, curve.validity, curve.c};
  PerimeterEstimate p{curve.perimeter, PerimeterMethod::analytic, 0.0};
  return autocorr_core(view, k, gamma, eps, p, EnergyMethod::autocorr_analytic);
}

double energy_phi_form(const RadialCorrelation& rc,
                       const IntegratedKernelTable& table, double gamma,
                       double eps, const PerimeterEstimate& perimeter) {
  // c'(r) by centered finite differences between consecutive radial samples.
  std::vector<double> mid, slope;
  for (std::size_t i = 0; i + 1 < rc.radii.size(); ++i) {
    double dr = rc.radii[i + 1] - rc.radii[i];
    if (dr <= 0.0) continue;
    mid.push_back(0.5 * (rc.radii[i] + rc.radii[i + 1]));
    slope.push_back((rc.c[i + 1] - rc.c[i]) / dr);
  }
  double gamma_crit = table.gamma_crit();
  double cprime0 = -perimeter.value / slope_perimeter_factor(rc.dim);
  auto cprime = [&](double r) {
    auto it = std::lower_bound(mid.begin(), mid.end(), r);
    if (it == mid.begin()) return slope.front();
    if (it == mid.end()) return slope.back();
    std::size_t i = static_cast<std::size_t>(it - mid.begin());
    double f = (r - mid[i - 1]) / (mid[i] - mid[i - 1]);
    return slope[i - 1] * (1.0 - f) + slope[i] * f;
  };
  auto integrand = [&](double r) {
    double phi_eps = table.phi(r / eps) / eps;
    return phi_eps * (gamma / gamma_crit * cprime(r) - cprime0);
  };
  double upper = std::min(rc.radii.back(), eps * table.r_cut());
  double integral = integrate_adaptive(integrand, 1e-9, upper, 1e-11);
  return 2.0 * gamma_crit * integral;
}

double gamma_limit_energy(const PerimeterEstimate& p, double gamma,
                          double gamma_crit) {
  require(gamma >= 0.0 && gamma_crit > 0.0, ErrorCode::invalid_argument,
          "gamma_limit_energy: gamma >= 0 and gamma_crit > 0 required");
  return (1.0 - gamma / gamma_crit) * p.value;
}

double lower_bound_margin(const EnergyBreakdown& e, double gamma_crit) {
  PerimeterEstimate p{e.perimeter_term, e.perimeter_source, 0.0};
  return e.total - gamma_limit_energy(p, e.gamma, gamma_crit);
}

ScalingCheck scaling_identity_check(const ShapeSpec& shape, const Kernel& k,
                                    double gamma, double eps, double ell,
                                    int grid_n) {
  require(ell == 1.0 || ell == 2.0 || ell == 4.0, ErrorCode::invalid_argument,
          "scaling_identity_check: ell must be 1, 2 or 4");
  ScalingCheck out;
  const int n = shape.dim;
  const double scale = std::pow(ell, n - 1);

  if (std::holds_alternative<Laminate>(shape.shape)) {
    // Closed form on both sides. On the side-ell torus the stripe pattern has
    // c0 = theta ell^n and |c'| = ell^{n-1} * m * angular mean of |w_1|.
    const auto& lam = std::get<Laminate>(shape.shape);
    double m = lam.stripes;
    double slope_unit = (n == 2) ? 2.0 * m / kPi : 0.5 * m;
    AnalyticCorrelation unit = analytic_correlation_curve(shape);

    AnalyticCorrelation scaled;
    scaled.c0 = lam.theta * std::pow(ell, n);
    scaled.validity = unit.validity * ell;
    scaled.perimeter = 2.0 * m * scale;
    double slope_ell = slope_unit * scale;
    double c0s = scaled.c0;
    scaled.c = [c0s, slope_ell](double r) { return c0s - slope_ell * r; };

    out.lhs = energy_autocorr_analytic(scaled, k, gamma, eps).total;
    out.rhs = scale * energy_autocorr_analytic(unit, k, gamma, eps / ell).total;
  } else {
    TorusGrid grid = make_grid(n, grid_n);
    BinaryField f = rasterize(shape, grid);
    CorrelationMap map = correlation_map(f);
    PerimeterEstimate p_unit = shape_perimeter(shape);
    PerimeterEstimate p_ell{p_unit.value * scale, PerimeterMethod::analytic, 0.0};
    out.lhs = energy_direct(f, k, gamma, eps, &p_ell, &map, ell).total;
    out.rhs = scale * energy_direct(f, k, gamma, eps / ell, &p_unit, &map).total;
  }
  double denom = std::max({std::abs(out.lhs), std::abs(out.rhs), 1e-30});
  out.rel_gap = std::abs(out.lhs - out.rhs) / denom;
  return out;
}

SweepResult epsilon_sweep(const ShapeSpec& shape, const Kernel& k, double gamma,
                          const std::vector<double>& epsilons, int grid_n) {
  require(epsilons.size() >= 3, ErrorCode::invalid_argument,
          "epsilon_sweep: need at least three epsilons");
  for (std::size_t i = 1; i < epsilons.size(); ++i)
    require(epsilons[i] < epsilons[i - 1], ErrorCode::invalid_argument,
            "epsilon_sweep: epsilons must be strictly decreasing");
  bool polytope_like = std::holds_alternative<Laminate>(shape.shape) ||
                       std::holds_alternative<Polygon>(shape.shape);
  require(polytope_like, ErrorCode::invalid_argument,
          "epsilon_sweep: shape must be a polytope or laminate");

  IntegratedKernelTable table = integrated_kernel(k);

  // Exact path for stripes when the truncated kernel fits in the linear
  // regime at every epsilon; grid path otherwise.
  bool analytic = false;
  AnalyticCorrelation curve;
  if (std::holds_alternative<Laminate>(shape.shape)) {
    curve = analytic_correlation_curve(shape);
    analytic = epsilons.front() * cached_effective_radius(k) <= curve.validity;
  }

  BinaryField f;
  CorrelationMap map;
  PerimeterEstimate p = shape_perimeter(shape);
  if (!analytic) {
    f = rasterize(shape, make_grid(shape.dim, grid_n));
    map = correlation_map(f);
  }

  // Validity radius of the small-r polynomial, for the I1/I2/I3 diagnostics.
  double poly_radius = 0.1;
  double curvature = 0.0;  // a_2 of c_u
  if (std::holds_alternative<Laminate>(shape.shape)) {
    poly_radius = analytic_correlation_curve(shape).validity;
  } else if (std::holds_alternative<Polygon>(shape.shape)) {
    try {
      AnalyticCorrelation square = analytic_correlation_curve(shape);
      poly_radius = square.validity;
      curvature = 1.0 / kPi;
    } catch (const Error&) {
      poly_radius = 0.1;
    }
  }
  double lipschitz = p.value / slope_perimeter_factor(shape.dim);

  SweepResult res;
  for (double eps : epsilons) {
    SweepRow row;
    if (analytic) {
      row.energy = energy_autocorr_analytic(curve, k, gamma, eps);
    } else {
      row.energy = energy_direct(f, k, gamma, eps, &p, &map);
    }
    auto phi_eps = [&](double r) { return table.phi(r / eps) / eps; };
    row.i1 = integrate_adaptive(phi_eps, 1e-12, poly_radius, 1e-10);
    row.i2 = 2.0 * curvature *
             integrate_adaptive([&](double r) { return r * phi_eps(r); }, 1e-12,
                                poly_radius, 1e-10);
    double tail_to = std::max(poly_radius * 2.0, eps * table.r_cut());
    row.i3 = lipschitz * integrate_adaptive(phi_eps, poly_radius, tail_to, 1e-10);
    res.rows.push_back(row);
  }

  // Linear-in-eps extrapolation from the three smallest epsilons.
  std::size_t m = res.rows.size();
  std::vector<double> xs, ys;
  for (std::size_t i = m - 3; i < m; ++i) {
    xs.push_back(res.rows[i].energy.epsilon);
    ys.push_back(res.rows[i].energy.total);
  }
  res.extrapolated_limit = fit_linear(xs, ys, {}).intercept;
  return res;
}

}  // namespace gammalab
