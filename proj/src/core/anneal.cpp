#include "gammalab/anneal.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

#include "gammalab/constants.hpp"

namespace gammalab {

namespace {

// Combined swap-interaction table W(z), z != 0, on the fundamental lattice:
//   E[u] = sum_{z != 0} W(z) (S0 - S(z)),  S(z) = sum_x u(x) u(x+z).
std::vector<double> combined_weights(const Kernel& k, const TorusGrid& grid,
                                     double gamma, double eps,
                                     double eps_perimeter) {
  const double h = grid.cell();
  const double h2n = std::pow(h, 2 * grid.dim);
  Kernel indicator = make_kernel("indicator", grid.dim);
  double gamma_crit_ind = kernel_gamma_crit(indicator);

  auto accumulate = [&](const Kernel& kk, double e, double coef,
                        std::vector<double>& w) {
    double rho_cut = e * kernel_effective_radius(kk, 1e-6);
    int n = grid.samples;
    int copies = static_cast<int>(std::ceil(rho_cut + 0.5));
    auto min_image = [&](int idx) {
      int half = n / 2;
      int v = idx > half ? idx - n : idx;
      return v * h;
    };
    for (int i = 0; i < n; ++i) {
      double zi = min_image(i);
      for (int j = 0; j < n; ++j) {
        double zj = min_image(j);
        double acc = 0.0;
        for (int ki = -copies; ki <= copies; ++ki)
          for (int kj = -copies; kj <= copies; ++kj) {
            double xi = zi + ki, xj = zj + kj;
            double r = std::hypot(xi, xj);
            if (r > rho_cut || r == 0.0) continue;
            acc += kk.profile(r / e);
          }
        w[(std::size_t)i * n + j] += coef * acc;
      }
    }
  };

  std::vector<double> w(grid.cell_count(), 0.0);
  double coef_perimeter =
      gamma_crit_ind * 2.0 * h2n / std::pow(eps_perimeter, grid.dim + 1);
  double coef_nonlocal = -gamma * 2.0 * h2n / std::pow(eps, grid.dim + 1);
  accumulate(indicator, eps_perimeter, coef_perimeter, w);
  if (gamma != 0.0) accumulate(k, eps, coef_nonlocal, w);
  w[0] = 0.0;
  return w;
}

// E = W_total * S0 - sum_z W(z) S(z), with S from the exact correlation map.
double energy_from_map(const std::vector<double>& w, const CorrelationMap& m,
                       double* perimeter_part,
                       const std::vector<double>& w_perimeter) {
  double total = 0.0, psum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    double diff = static_cast<double>(m.count0 - m.counts[i]);
    total += w[i] * diff;
    psum += w_perimeter[i] * diff;
  }
  if (perimeter_part) *perimeter_part = psum;
  return total;
}

// Correlation field phi(p) = sum_{z != 0} W(z) u(p+z) for one site, written
// as two contiguous dot products per row to keep the inner loop branch-free.
double site_field(const std::vector<double>& w, const std::vector<double>& u,
                  int n, int pi, int pj) {
  double acc = 0.0;
  for (int qi = 0; qi < n; ++qi) {
    int wi = qi - pi;
    if (wi < 0) wi += n;
    const double* wrow = &w[(std::size_t)wi * n];
    const double* urow = &u[(std::size_t)qi * n];
    const int head = n - pj;
    const double* wseg = wrow;
    for (int qj = pj; qj < n; ++qj) acc += urow[qj] * wseg[qj - pj];
    wseg = wrow + head;
    for (int qj = 0; qj < pj; ++qj) acc += urow[qj] * wseg[qj];
  }
  return acc;
}

}  // namespace

Trajectory anneal(const BinaryField& f0, const Kernel& k, double gamma,
                  double eps, const AnnealConfig& cfg) {
  require(f0.grid.dim == 2, ErrorCode::invalid_argument,
          "anneal: implemented for 2D fields");
  require(cfg.steps >= 0, ErrorCode::invalid_argument, "anneal: steps >= 0");
  require(cfg.decay > 0.0 && cfg.decay < 1.0, ErrorCode::invalid_argument,
          "anneal: decay factor must lie in (0,1)");
  require(f0.ones > 0 && f0.ones < f0.grid.cell_count(),
          ErrorCode::invalid_argument, "anneal: field must be nontrivial");
  const int n = f0.grid.samples;
  const double h = f0.grid.cell();
  require(eps >= 8.0 * h || gamma == 0.0, ErrorCode::under_resolved,
          "anneal: eps must be resolved by at least 8 cells");
  double eps_p = cfg.eps_perimeter > 0.0 ? cfg.eps_perimeter : 8.0 * h;

  std::vector<double> w = combined_weights(k, f0.grid, gamma, eps, eps_p);
  std::vector<double> w_perimeter =
      combined_weights(k, f0.grid, 0.0, eps, eps_p);

  // Working state: double copy of the bits plus index lists for sampling.
  std::vector<double> u(f0.bits.begin(), f0.bits.end());
  std::vector<std::int32_t> ones, zeros;
  std::vector<std::int32_t> slot(f0.bits.size());  // position in its list
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(f0.bits.size()); ++i) {
    if (f0.bits[i]) {
      slot[i] = static_cast<std::int32_t>(ones.size());
      ones.push_back(i);
    } else {
      slot[i] = static_cast<std::int32_t>(zeros.size());
      zeros.push_back(i);
    }
  }

  BinaryField cur = f0;
  Trajectory traj;
  std::mt19937_64 rng(cfg.seed);
  auto uniform = [&](std::size_t m) { return static_cast<std::size_t>(rng() % m); };
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  CorrelationMap map0 = correlation_map(cur);
  double p_part = 0.0;
  double e_inc = energy_from_map(w, map0, &p_part, w_perimeter);

  auto snapshot = [&](std::int64_t step) {
    CorrelationMap m = correlation_map(cur);
    double pp = 0.0;
    double e_full = energy_from_map(w, m, &pp, w_perimeter);
    TrajectorySnapshot snap;
    snap.step = step;
    snap.energy.method = EnergyMethod::direct_grid;
    snap.energy.epsilon = eps;
    snap.energy.gamma = gamma;
    snap.energy.perimeter_term = pp;
    snap.energy.perimeter_source = PerimeterMethod::slope_fit;
    snap.energy.nonlocal_term = gamma == 0.0 ? 0.0 : (pp - e_full) / gamma;
    snap.energy.total = e_full;
    snap.bookkeeping_gap =
        std::abs(e_inc - e_full) / std::max(1.0, std::abs(e_full));
    snap.checksum = field_checksum(cur);
    snap.ones = cur.ones;
    traj.snapshots.push_back(snap);
  };

  snapshot(0);

  double temperature = cfg.t0;
  for (std::int64_t step = 1; step <= cfg.steps; ++step) {
    ++traj.proposed;
    std::int32_t a = ones[uniform(ones.size())];
    std::int32_t b = -1;
    if (cfg.swap_distance <= 0 || cfg.swap_distance >= n / 2) {
      b = zeros[uniform(zeros.size())];
    } else {
      int d = cfg.swap_distance;
      int ai = a / n, aj = a % n;
      for (int attempt = 0; attempt < 32; ++attempt) {
        int di = static_cast<int>(uniform(2 * d + 1)) - d;
        int dj = static_cast<int>(uniform(2 * d + 1)) - d;
        int bi = (ai + di + n) % n, bj = (aj + dj + n) % n;
        std::int32_t cand = bi * n + bj;
        if (u[cand] == 0.0) {
          b = cand;
          break;
        }
      }
    }
    temperature *= cfg.decay;
    if (b < 0) continue;

    int ai = a / n, aj = a % n, bi = b / n, bj = b % n;
    double phi_a = site_field(w, u, n, ai, aj);
    double phi_b = site_field(w, u, n, bi, bj);
    int dwi = (bi - ai + n) % n, dwj = (bj - aj + n) % n;
    double w_ab = w[(std::size_t)dwi * n + dwj];
    double delta = 2.0 * (phi_a - phi_b + w_ab);

    bool accept = delta <= 0.0 ||
                  unit(rng) < std::exp(-delta / std::max(temperature, 1e-300));
    if (!accept) continue;

    ++traj.accepted;
    e_inc += delta;
    // swap bookkeeping: a leaves the ones list, b leaves the zeros list
    u[a] = 0.0;
    u[b] = 1.0;
    cur.bits[a] = 0;
    cur.bits[b] = 1;
    std::int32_t sa = slot[a], sb = slot[b];
    ones[sa] = b;
    slot[b] = sa;
    zeros[sb] = a;
    slot[a] = sb;

    if (cfg.record_every > 0 && step % cfg.record_every == 0) snapshot(step);
  }
  if (traj.snapshots.empty() || traj.snapshots.back().step != cfg.steps)
    snapshot(cfg.steps);
  traj.final_field = cur;
  return traj;
}

double isoperimetric_quotient(const BinaryField& f) {
  require(f.ones > 0 && f.ones < f.grid.cell_count(), ErrorCode::invalid_argument,
          "isoperimetric_quotient: field must be neither empty nor full");
  CorrelationMap m = correlation_map(f);
  RadialCorrelation rc = radial_average(m, 4 * f.grid.samples);
  PerimeterEstimate p = perimeter_from_slope(rc);
  return p.value / ball_perimeter_for_volume(f.grid.dim, f.volume_fraction());
}

namespace {

struct Components {
  int count = 0;
  bool any_wrap_axis[3] = {false, false, false};
  bool all_wrap_same_single_axis = false;
  int wrap_axis = -1;  // 0-based, valid when all_wrap_same_single_axis
};

Components component_analysis(const BinaryField& f) {
  const int n = f.grid.samples;
  require(f.grid.dim == 2, ErrorCode::invalid_argument,
          "classify: implemented for 2D fields");
  std::vector<std::int8_t> seen(f.bits.size(), 0);
  std::vector<std::array<int, 2>> unwrapped(f.bits.size());
  Components out;
  bool consistent_single = true;
  int common_axis = -2;  // -2 unset, -1 conflict

  for (int si = 0; si < n; ++si)
    for (int sj = 0; sj < n; ++sj) {
      std::size_t seed = (std::size_t)si * n + sj;
      if (!f.bits[seed] || seen[seed]) continue;
      ++out.count;
      bool wraps[2] = {false, false};
      std::queue<std::size_t> q;
      q.push(seed);
      seen[seed] = 1;
      unwrapped[seed] = {0, 0};
      while (!q.empty()) {
        std::size_t cur = q.front();
        q.pop();
        int ci = static_cast<int>(cur) / n, cj = static_cast<int>(cur) % n;
        auto coord = unwrapped[cur];
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        for (int e = 0; e < 4; ++e) {
          int ni = ci + di[e], nj = cj + dj[e];
          std::array<int, 2> nc = {coord[0] + di[e], coord[1] + dj[e]};
          int wi = (ni + n) % n, wj = (nj + n) % n;
          std::size_t nxt = (std::size_t)wi * n + wj;
          if (!f.bits[nxt]) continue;
          if (!seen[nxt]) {
            seen[nxt] = 1;
            unwrapped[nxt] = nc;
            q.push(nxt);
          } else {
            if (unwrapped[nxt][0] != nc[0]) wraps[0] = true;
            if (unwrapped[nxt][1] != nc[1]) wraps[1] = true;
          }
        }
      }
      out.any_wrap_axis[0] |= wraps[0];
      out.any_wrap_axis[1] |= wraps[1];
      int axis = -1;
      if (wraps[0] && !wraps[1]) axis = 0;
      if (!wraps[0] && wraps[1]) axis = 1;
      if (axis < 0) consistent_single = false;  // wraps none or both
      if (common_axis == -2)
        common_axis = axis;
      else if (common_axis != axis)
        common_axis = -1;
    }
  out.all_wrap_same_single_axis =
      consistent_single && common_axis >= 0 && out.count >= 1;
  out.wrap_axis = common_axis >= 0 ? common_axis : -1;
  return out;
}

}  // namespace

MinimizerClass classify_minimizer(const BinaryField& f) {
  Components comp = component_analysis(f);
  CorrelationMap m = correlation_map(f);
  RadialCorrelation rc = radial_average(m, 4 * f.grid.samples);
  double p_slope = perimeter_from_slope(rc).value;

  if (comp.count == 1 && !comp.any_wrap_axis[0] && !comp.any_wrap_axis[1]) {
    double q = p_slope / ball_perimeter_for_volume(f.grid.dim, f.volume_fraction());
    if (q >= 0.9 && q <= 1.1) return MinimizerClass::ball;
  }
  if (comp.all_wrap_same_single_axis) {
    double target = 2.0 * comp.count;
    if (p_slope >= 0.85 * target && p_slope <= 1.15 * target)
      return MinimizerClass::laminate;
  }
  return MinimizerClass::other;
}

const char* minimizer_class_name(MinimizerClass c) {
  switch (c) {
    case MinimizerClass::ball: return "ball";
    case MinimizerClass::laminate: return "laminate";
    default: return "other";
  }
}

BinaryField scatter_fraction(const BinaryField& f, double fraction,
                             std::uint64_t seed) {
  require(fraction >= 0.0 && fraction <= 1.0, ErrorCode::invalid_argument,
          "scatter_fraction: fraction in [0,1]");
  BinaryField g = f;
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> ones;
  for (std::size_t i = 0; i < g.bits.size(); ++i)
    if (g.bits[i]) ones.push_back(i);
  std::shuffle(ones.begin(), ones.end(), rng);
  std::size_t moves = static_cast<std::size_t>(fraction * ones.size());
  for (std::size_t m = 0; m < moves; ++m) {
    g.bits[ones[m]] = 0;
    while (true) {
      std::size_t target = rng() % g.bits.size();
      if (!g.bits[target]) {
        g.bits[target] = 1;
        break;
      }
    }
  }
  return g;
}

BinaryField random_field(const TorusGrid& grid, double theta,
                         std::uint64_t seed) {
  require(theta > 0.0 && theta < 1.0, ErrorCode::invalid_argument,
          "random_field: theta in (0,1)");
  BinaryField f;
  f.grid = grid;
  f.bits.assign(grid.cell_count(), 0);
  std::int64_t target = std::llround(theta * grid.cell_count());
  std::vector<std::size_t> idx(f.bits.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  for (std::int64_t i = 0; i < target; ++i) f.bits[idx[i]] = 1;
  f.ones = target;
  return f;
}

}  // namespace gammalab
