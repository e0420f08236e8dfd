#include "gammalab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "gammalab/bessel.hpp"
#include "gammalab/constants.hpp"
#include "gammalab/quadrature.hpp"

namespace gammalab {

namespace {

// --- small interpolation table used by quadrature-backed profiles ----------

struct LogTable {
  std::vector<double> t;  // log r, uniform spacing
  std::vector<double> v;  // profile values
  double dt = 0.0;

  double eval(double r) const {
    double x = std::log(r);
    if (x <= t.front()) return v.front();
    if (x >= t.back()) return v.back();
    double u = (x - t.front()) / dt;
    std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(u), t.size() - 2);
    double frac = u - double(i);
    // 4-point Lagrange where possible, linear at the ends.
    if (i == 0 || i + 2 >= t.size())
      return v[i] * (1.0 - frac) + v[i + 1] * frac;
    double p = frac;
    double vm1 = v[i - 1], v0 = v[i], v1 = v[i + 1], v2 = v[i + 2];
    double a = -p * (p - 1.0) * (p - 2.0) / 6.0;
    double b = (p * p - 1.0) * (p - 2.0) / 2.0;
    double c = -p * (p + 1.0) * (p - 2.0) / 2.0;
    double d = p * (p * p - 1.0) / 6.0;
    return a * vm1 + b * v0 + c * v1 + d * v2;
  }
};

std::shared_ptr<LogTable> tabulate_log(const std::function<double(double)>& f,
                                       double r_lo, double r_hi, int points) {
  auto tab = std::make_shared<LogTable>();
  tab->t.resize(points);
  tab->v.resize(points);
  double t0 = std::log(r_lo), t1 = std::log(r_hi);
  tab->dt = (t1 - t0) / (points - 1);
  for (int i = 0; i < points; ++i) {
    tab->t[i] = t0 + i * tab->dt;
    tab->v[i] = f(std::exp(tab->t[i]));
  }
  return tab;
}

// --- fractional kernel via radial Fourier inversion -------------------------
//
// K^{(s)} solves K + (-Laplace)^{s/2} K = delta_0, i.e. its Fourier transform
// is 1/(1 + (2 pi |xi|)^s). The inversion integral converges only through
// oscillation, so it is summed panel-by-panel between the oscillator's zeros
// and accelerated with repeated averaging of the partial sums.

double alternating_tail(const std::vector<double>& partial) {
  std::vector<double> row = partial;
  while (row.size() > 1) {
    for (std::size_t i = 0; i + 1 < row.size(); ++i)
      row[i] = 0.5 * (row[i] + row[i + 1]);
    row.pop_back();
  }
  return row[0];
}

double fractional_value(int dim, double s, double r) {
  const double q = std::pow(2.0 * kPi, s);
  auto symbol = [&](double xi) { return 1.0 / (1.0 + q * std::pow(xi, s)); };
  const int panels = 72;
  std::vector<double> partial;
  partial.reserve(panels);
  double sum = 0.0;
  if (dim == 3) {
    auto integrand = [&](double xi) {
      return (2.0 / r) * xi * std::sin(2.0 * kPi * r * xi) * symbol(xi);
    };
    double step = 1.0 / (2.0 * r);  // zeros of sin(2 pi r xi)
    sum += integrate_adaptive(integrand, 0.0, step, 1e-13);
    partial.push_back(sum);
    for (int k = 1; k < panels; ++k) {
      sum += integrate_adaptive(integrand, k * step, (k + 1) * step, 1e-13);
      partial.push_back(sum);
    }
  } else {
    auto integrand = [&](double xi) {
      return 2.0 * kPi * xi * std::cyl_bessel_j(0.0, 2.0 * kPi * r * xi) * symbol(xi);
    };
    // Bessel J0 zeros j_{0,k} ~ (k - 1/4) pi, refined by one Newton step.
    auto j0_zero = [](int k) {
      double x = (k - 0.25) * kPi;
      for (int it = 0; it < 2; ++it)
        x += std::cyl_bessel_j(0.0, x) / std::cyl_bessel_j(1.0, x);
      return x;
    };
    double prev = 0.0;
    for (int k = 1; k <= panels; ++k) {
      double next = j0_zero(k) / (2.0 * kPi * r);
      sum += integrate_adaptive(integrand, prev, next, 1e-13);
      partial.push_back(sum);
      prev = next;
    }
  }
  // Drop the pre-asymptotic head before averaging.
  std::vector<double> window(partial.begin() + partial.size() / 2, partial.end());
  return alternating_tail(window);
}

std::shared_ptr<LogTable> fractional_table(int dim, double s) {
  static std::map<std::pair<int, double>, std::shared_ptr<LogTable>> cache;
  auto key = std::make_pair(dim, s);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto f = [dim, s](double r) { return fractional_value(dim, s, r); };
  auto tab = tabulate_log(f, 1e-3, 60.0, 480);
  cache[key] = tab;
  return tab;
}

std::shared_ptr<LogTable> bessel_k0_table() {
  static std::shared_ptr<LogTable> tab = tabulate_log(
      [](double r) { return bessel_k(0.0, r); }, 1e-8, 29.0, 6144);
  return tab;
}

// --- parsing ----------------------------------------------------------------

std::map<std::string, double> parse_params(const std::string& text) {
  std::map<std::string, double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    require(eq != std::string::npos, ErrorCode::invalid_argument,
            "kernel spec: expected key=value in '" + item + "'");
    out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
  }
  return out;
}

}  // namespace

Kernel make_kernel(const std::string& spec, int dim) {
  require(dim == 2 || dim == 3, ErrorCode::invalid_argument,
          "make_kernel: dimension must be 2 or 3");
  std::string head = spec, params_text;
  if (auto colon = spec.find(':'); colon != std::string::npos) {
    head = spec.substr(0, colon);
    params_text = spec.substr(colon + 1);
  }
  auto params = parse_params(params_text);
  Kernel k;
  k.dim = dim;
  k.name = spec;
  const double omega = unit_ball_volume(dim);

  if (head == "indicator") {
    k.profile = [omega](double r) { return r < 1.0 ? 1.0 / omega : 0.0; };
    k.support_radius = 1.0;
    k.singularity_exponent = 0.0;
    k.tail_exponent = std::numeric_limits<double>::infinity();
    k.total_mass = 1.0;
  } else if (head == "gaussian") {
    double s = params.count("s") ? params["s"] : 1.0;
    require(s > 0.0, ErrorCode::invalid_argument, "gaussian: scale must be positive");
    double norm = std::pow(2.0 * kPi * s * s, -0.5 * dim);
    k.profile = [norm, s](double r) { return norm * std::exp(-0.5 * r * r / (s * s)); };
    k.singularity_exponent = 0.0;
    k.tail_exponent = std::numeric_limits<double>::infinity();
    k.total_mass = 1.0;
  } else if (head == "ring") {
    require(params.count("a") && params.count("b"), ErrorCode::invalid_argument,
            "ring: needs a= and b= values");
    double a = params["a"], b = params["b"];
    k.profile = [a, b](double r) { return r < 1.0 ? a : (r < 2.0 ? b : 0.0); };
    k.support_radius = 2.0;
    k.singularity_exponent = 0.0;
    k.tail_exponent = std::numeric_limits<double>::infinity();
    k.total_mass = omega * (a + b * (std::pow(2.0, dim) - 1.0));
  } else if (head == "helmholtz") {
    if (dim == 3) {
      // (2 pi)^{-3/2} r^{-1/2} K_{1/2}(r) = e^{-r} / (4 pi r)
      k.profile = [](double r) { return std::exp(-r) / (4.0 * kPi * r); };
      k.singularity_exponent = 1.0;
    } else {
      auto tab = bessel_k0_table();
      k.profile = [tab](double r) {
        double k0 = (r < 29.0) ? tab->eval(r) : bessel_k_asymptotic(0.0, r);
        return k0 / (2.0 * kPi);
      };
      k.singularity_exponent = 0.5;  // log singularity, weaker than any power
    }
    k.tail_exponent = std::numeric_limits<double>::infinity();
    k.total_mass = 1.0;
  } else if (head == "fractional") {
    require(params.count("s"), ErrorCode::invalid_argument,
            "fractional: needs s= exponent");
    double s = params["s"];
    require(s > 1.0 && s < 2.0, ErrorCode::invalid_argument,
            "fractional: s must lie in (1, 2)");
    auto tab = fractional_table(dim, s);
    double edge_lo = tab->v.front(), edge_hi = tab->v.back();
    double r_lo = 1e-3, r_hi = 60.0;
    double alpha = dim - s, beta = dim + s;
    k.profile = [=](double r) {
      if (r < r_lo) return edge_lo * std::pow(r / r_lo, -alpha);
      if (r > r_hi) return edge_hi * std::pow(r / r_hi, -beta);
      return tab->eval(r);
    };
    k.singularity_exponent = alpha;
    k.tail_exponent = beta;
    k.total_mass = 1.0;
    k.power_tail_start = r_hi;
  } else {
    fail(ErrorCode::invalid_argument, "make_kernel: unknown kernel '" + spec + "'");
  }
  require(k.singularity_exponent < dim + 1.0, ErrorCode::invalid_argument,
          "kernel violates the near-origin integrability encoding of (H2)");
  return k;
}

namespace {

// int_from^inf r^{n-1+extra} K(r) dr for the exact power-law tail region.
double power_tail_integral(const Kernel& k, double from, int extra) {
  double expo = k.tail_exponent - (k.dim + extra);
  require(expo > 0.0, ErrorCode::truncation_failure,
          "kernel tail decays too slowly for this moment (H2 fails)");
  double coef = k.profile(k.power_tail_start) *
                std::pow(k.power_tail_start, k.tail_exponent);
  return coef * std::pow(from, -expo) / expo;
}

// sigma_n int r^{n-1+extra} K(r) dr over [0, inf), graded near the origin.
double radial_integral(const Kernel& k, int extra, bool absolute,
                       double abs_tol) {
  const double sigma = unit_sphere_area(k.dim);
  auto f = [&](double r) {
    double v = k.profile(r) * std::pow(r, k.dim - 1 + extra);
    return absolute ? std::abs(v) : v;
  };
  double split = k.compact() ? std::min(0.25, k.support_radius) : 0.25;
  double total = integrate_graded_origin(f, split, abs_tol / sigma);
  if (k.compact()) {
    total += integrate_adaptive(f, split, k.support_radius, abs_tol / sigma);
  } else if (k.power_tail_start > 0.0) {
    total += integrate_adaptive(f, split, k.power_tail_start, abs_tol / sigma);
    total += power_tail_integral(k, k.power_tail_start, extra);
  } else {
    total += integrate_octaves_to_inf(f, split, abs_tol / sigma);
  }
  return sigma * total;
}

// sigma_n int_from^inf r^{n-1} |K| dr
double abs_tail_mass(const Kernel& k, double from) {
  const double sigma = unit_sphere_area(k.dim);
  auto f = [&](double r) {
    return std::abs(k.profile(r)) * std::pow(r, k.dim - 1);
  };
  if (k.compact()) {
    if (from >= k.support_radius) return 0.0;
    return sigma * integrate_adaptive(f, from, k.support_radius, 1e-13);
  }
  if (k.power_tail_start > 0.0) {
    double numeric = 0.0;
    double ts = k.power_tail_start;
    if (from < ts) numeric = sigma * integrate_adaptive(f, from, ts, 1e-13);
    return numeric + sigma * power_tail_integral(k, std::max(from, ts), 0);
  }
  return sigma * integrate_octaves_to_inf(f, from, 1e-13);
}

}  // namespace

double kernel_first_moment(const Kernel& k) {
  return radial_integral(k, 1, false, 1e-12);
}

double kernel_gamma_crit(const Kernel& k) {
  double moment = kernel_first_moment(k);
  require(moment > 0.0, ErrorCode::degenerate_moment,
          "gamma_crit: first moment must be positive");
  return critical_prefactor(k.dim) / moment;
}

double kernel_effective_radius(const Kernel& k, double mass_tol) {
  if (k.compact()) return k.support_radius;
  double total = radial_integral(k, 0, true, 1e-12);
  double lo = 0.5, hi = 1.0;
  while (abs_tail_mass(k, hi) > mass_tol * total) {
    lo = hi;
    hi *= 2.0;
    require(hi < 1e7, ErrorCode::truncation_failure,
            "kernel_effective_radius: tail mass target unreachable");
  }
  for (int it = 0; it < 50; ++it) {
    double mid = 0.5 * (lo + hi);
    if (abs_tail_mass(k, mid) > mass_tol * total)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

IntegratedKernelTable integrated_kernel(const Kernel& k, double quadrature_tol) {
  static std::map<std::string, IntegratedKernelTable> cache;
  std::string key = k.name + "|n=" + std::to_string(k.dim) + "|tol=" +
                    std::to_string(quadrature_tol);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  const double sigma = unit_sphere_area(k.dim);
  const double tol = quadrature_tol;
  IntegratedKernelTable tab;
  tab.tol_ = tol;

  // Truncation radius: everything of the signed mass beyond it is below tol.
  double r_cut;
  if (k.compact()) {
    r_cut = k.support_radius;
  } else {
    r_cut = 1.0;
    while (abs_tail_mass(k, r_cut) > tol) {
      r_cut *= 2.0;
      require(r_cut < 1e7, ErrorCode::truncation_failure,
              "integrated_kernel: kernel tail exceeds the tolerance budget");
    }
  }
  tab.r_cut_ = r_cut;

  const double r_lo = 1e-6;
  const int points = 4096;
  tab.radii_.resize(points);
  tab.values_.assign(points, 0.0);
  double t0 = std::log(r_lo), t1 = std::log(r_cut);
  double dt = (t1 - t0) / (points - 1);
  for (int i = 0; i < points; ++i) tab.radii_[i] = std::exp(t0 + i * dt);
  tab.radii_.back() = r_cut;

  auto weighted = [&](double r) { return k.profile(r) * std::pow(r, k.dim - 1); };

  // Signed remainder beyond the cut (zero for compact kernels, <= tol else).
  double beyond = 0.0;
  if (!k.compact()) {
    beyond = k.power_tail_start > 0.0
                 ? sigma * power_tail_integral(k, r_cut, 0)
                 : sigma * integrate_octaves_to_inf(weighted, r_cut, 0.01 * tol);
  }

  // Right-to-left cumulative panel integrals give Phi on the grid.
  tab.values_[points - 1] = beyond;
  for (int i = points - 2; i >= 0; --i) {
    double piece = sigma * integrate_adaptive(weighted, tab.radii_[i],
                                              tab.radii_[i + 1],
                                              0.05 * tol / points);
    tab.values_[i] = tab.values_[i + 1] + piece;
  }
  tab.mass0_ = tab.values_[0] +
               sigma * integrate_graded_origin(weighted, r_lo, 0.01 * tol);

  tab.min_phi_ = std::min(tab.mass0_, *std::min_element(tab.values_.begin(),
                                                        tab.values_.end()));
  require(tab.min_phi_ >= -tol, ErrorCode::kernel_inadmissible,
          "integrated_kernel: Phi < 0 detected, kernel violates (H3)");

  // ||Phi||_L1 panel-by-panel. Within a panel, Phi(r) = Phi(r_{i+1}) +
  // sigma int_r^{r_{i+1}} rho^{n-1} K, and Fubini turns the panel integral
  // of the second piece into sigma int rho^{n-1} (rho - r_i) K(rho) drho.
  double l1 = tab.mass0_ * r_lo;  // Phi is flat to within tol below r_lo
  for (int i = 0; i + 1 < points; ++i) {
    double a = tab.radii_[i], b = tab.radii_[i + 1];
    auto fub = [&](double rho) { return weighted(rho) * (rho - a); };
    l1 += tab.values_[i + 1] * (b - a) +
          sigma * integrate_adaptive(fub, a, b, 0.05 * tol / points);
  }
  if (!k.compact()) {
    if (k.power_tail_start > 0.0) {
      // int_{r_cut}^inf (rho - r_cut) rho^{n-1} K drho on the power tail
      l1 += sigma * (power_tail_integral(k, r_cut, 1) -
                     r_cut * power_tail_integral(k, r_cut, 0));
    } else {
      auto fub_tail = [&](double rho) { return weighted(rho) * (rho - r_cut); };
      l1 += sigma * integrate_octaves_to_inf(fub_tail, r_cut, 0.01 * tol);
    }
  }
  tab.l1_norm_ = l1;

  tab.first_moment_ = kernel_first_moment(k);
  require(tab.first_moment_ > 0.0, ErrorCode::degenerate_moment,
          "integrated_kernel: first moment must be positive");
  tab.gamma_crit_ = critical_prefactor(k.dim) / tab.first_moment_;
  tab.gamma_crit_phi_ = critical_prefactor(k.dim) / tab.l1_norm_;

  tab.log_radii_.resize(points);
  for (int i = 0; i < points; ++i) tab.log_radii_[i] = std::log(tab.radii_[i]);

  cache.emplace(key, tab);
  return tab;
}

double IntegratedKernelTable::phi(double r) const {
  if (r <= radii_.front()) return mass0_;
  if (r >= radii_.back()) return values_.back();
  double x = std::log(r);
  double dt = log_radii_[1] - log_radii_[0];
  std::size_t i = std::min<std::size_t>(
      static_cast<std::size_t>((x - log_radii_.front()) / dt), radii_.size() - 2);
  while (i + 1 < radii_.size() && log_radii_[i + 1] < x) ++i;
  while (i > 0 && log_radii_[i] > x) --i;
  double f = (x - log_radii_[i]) / (log_radii_[i + 1] - log_radii_[i]);
  if (i == 0 || i + 2 >= radii_.size())
    return values_[i] * (1.0 - f) + values_[i + 1] * f;
  // 4-point interpolation on the log-spaced grid, clamped to the bracketing
  // samples so kinks at support edges cannot overshoot below zero.
  double p = f;
  double a = -p * (p - 1.0) * (p - 2.0) / 6.0;
  double b = (p * p - 1.0) * (p - 2.0) / 2.0;
  double cc = -p * (p + 1.0) * (p - 2.0) / 2.0;
  double d = p * (p * p - 1.0) / 6.0;
  double v = a * values_[i - 1] + b * values_[i] + cc * values_[i + 1] +
             d * values_[i + 2];
  double lo = std::min(values_[i], values_[i + 1]);
  double hi = std::max(values_[i], values_[i + 1]);
  return std::min(std::max(v, lo), hi);
}

HypothesesReport verify_hypotheses(const Kernel& k) {
  HypothesesReport rep;
  rep.h1 = true;  // radial profile by construction
  std::ostringstream ev;

  // (H2): partial integrals sigma int_0^R r^n |K| must form a Cauchy sequence.
  const double sigma = unit_sphere_area(k.dim);
  auto f = [&](double r) { return std::abs(k.profile(r)) * std::pow(r, k.dim); };
  try {
    double base = k.compact() ? k.support_radius : 1.0;
    double m = sigma * integrate_graded_origin(f, base, 1e-12);
    double increment = 0.0;
    if (!k.compact()) {
      double lo = base;
      for (int oct = 0; oct < 60; ++oct) {
        increment = sigma * integrate_adaptive(f, lo, 2.0 * lo, 1e-13);
        m += increment;
        lo *= 2.0;
        if (increment < 1e-9 * std::max(m, 1e-30)) break;
      }
    }
    rep.h2 = k.compact() || increment < 1e-9 * std::max(m, 1e-30);
    ev << "int |z||K| = " << m << (rep.h2 ? " (convergent)" : " (NOT Cauchy)");
  } catch (const Error& e) {
    rep.h2 = false;
    ev << "moment quadrature failed: " << e.what();
  }

  // (H3): minimum of the tabulated Phi.
  try {
    auto tab = integrated_kernel(k, 1e-10);
    rep.h3 = true;
    ev << "; min Phi = " << tab.min_phi();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kernel_inadmissible) {
      rep.h3 = false;
      ev << "; Phi < 0 (H3 fails)";
    } else {
      rep.h3 = false;
      ev << "; Phi tabulation failed: " << e.what();
    }
  }
  rep.evidence = ev.str();
  return rep;
}

double q_crit(double gamma_crit, double sqrt_w_integral) {
  require(gamma_crit > 0.0 && sqrt_w_integral > 0.0, ErrorCode::invalid_argument,
          "q_crit: inputs must be positive");
  double denom = 4.0 * gamma_crit * sqrt_w_integral;
  return 1.0 - 1.0 / (denom * denom);
}

}  // namespace gammalab
