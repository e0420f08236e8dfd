#include "gammalab/correlation.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>

#include "gammalab/constants.hpp"
#include "gammalab/quadrature.hpp"

namespace gammalab {

namespace {

struct FftwBuffer {
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  FftwBuffer(std::size_t nreal, std::size_t ncplx) {
    real = fftw_alloc_real(nreal);
    cplx = fftw_alloc_complex(ncplx);
    require(real && cplx, ErrorCode::internal, "fftw allocation failed");
  }
  ~FftwBuffer() {
    fftw_free(real);
    fftw_free(cplx);
  }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};

}  // namespace

CorrelationMap correlation_map(const BinaryField& f) {
  const int n = f.grid.samples;
  const int dim = f.grid.dim;
  const std::size_t total = f.grid.cell_count();
  const std::size_t nc =
      dim == 2 ? (std::size_t)n * (n / 2 + 1) : (std::size_t)n * n * (n / 2 + 1);

  FftwBuffer buf(total, nc);
  for (std::size_t i = 0; i < total; ++i) buf.real[i] = f.bits[i];

  // FFTW_ESTIMATE keeps planning deterministic run to run.
  fftw_plan fwd = dim == 2
                      ? fftw_plan_dft_r2c_2d(n, n, buf.real, buf.cplx, FFTW_ESTIMATE)
                      : fftw_plan_dft_r2c_3d(n, n, n, buf.real, buf.cplx,
                                             FFTW_ESTIMATE);
  fftw_execute(fwd);
  fftw_destroy_plan(fwd);

  for (std::size_t i = 0; i < nc; ++i) {
    double re = buf.cplx[i][0], im = buf.cplx[i][1];
    buf.cplx[i][0] = re * re + im * im;
    buf.cplx[i][1] = 0.0;
  }

  fftw_plan bwd = dim == 2
                      ? fftw_plan_dft_c2r_2d(n, n, buf.cplx, buf.real, FFTW_ESTIMATE)
                      : fftw_plan_dft_c2r_3d(n, n, n, buf.cplx, buf.real,
                                             FFTW_ESTIMATE);
  fftw_execute(bwd);
  fftw_destroy_plan(bwd);

  CorrelationMap m;
  m.grid = f.grid;
  m.counts.resize(total);
  const double scale = 1.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < total; ++i)
    m.counts[i] = std::llround(buf.real[i] * scale);
  m.count0 = f.ones;
  require(m.counts[0] == f.ones, ErrorCode::internal,
          "correlation_map: zero-shift count disagrees with the bit count");
  return m;
}

CorrelationMap correlation_map_direct(const BinaryField& f) {
  const int n = f.grid.samples;
  CorrelationMap m;
  m.grid = f.grid;
  m.count0 = f.ones;
  m.counts.assign(f.grid.cell_count(), 0);
  if (f.grid.dim == 2) {
    for (int si = 0; si < n; ++si)
      for (int sj = 0; sj < n; ++sj) {
        std::int64_t acc = 0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            acc += f.at(i, j) & f.at((i + si) % n, (j + sj) % n);
        m.counts[(std::size_t)si * n + sj] = acc;
      }
  } else {
    for (int si = 0; si < n; ++si)
      for (int sj = 0; sj < n; ++sj)
        for (int sk = 0; sk < n; ++sk) {
          std::int64_t acc = 0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k)
                acc += f.at(i, j, k) &
                       f.at((i + si) % n, (j + sj) % n, (k + sk) % n);
          m.counts[((std::size_t)si * n + sj) * n + sk] = acc;
        }
  }
  return m;
}

RadialCorrelation radial_average(const CorrelationMap& m, int bins,
                                 double r_max) {
  require(bins >= 16, ErrorCode::invalid_argument,
          "radial_average: need at least 16 bins");
  require(r_max > 0.0 && r_max <= 0.5 + 1e-12, ErrorCode::invalid_argument,
          "radial_average: r_max must lie in (0, 1/2]");
  const int n = m.grid.samples;
  const double h = m.grid.cell();
  const double total_cells = static_cast<double>(m.grid.cell_count());
  const double dr = r_max / bins;

  std::vector<double> sum_c(bins, 0.0), sum_r(bins, 0.0);
  std::vector<std::int64_t> count(bins, 0);

  auto minimum_image = [&](int idx) {
    // component in (-1/2, 1/2] in physical units
    int half = n / 2;
    int w = idx > half ? idx - n : idx;
    return w * h;
  };

  auto deposit = [&](double r2, std::int64_t c) {
    double r = std::sqrt(r2);
    if (r > r_max + 1e-15 || r == 0.0) return;
    int b = std::min(bins - 1, static_cast<int>(r / dr));
    sum_c[b] += static_cast<double>(c);
    sum_r[b] += r;
    count[b] += 1;
  };

  if (m.grid.dim == 2) {
    for (int i = 0; i < n; ++i) {
      double zi = minimum_image(i);
      for (int j = 0; j < n; ++j) {
        double zj = minimum_image(j);
        deposit(zi * zi + zj * zj, m.counts[(std::size_t)i * n + j]);
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      double zi = minimum_image(i);
      for (int j = 0; j < n; ++j) {
        double zj = minimum_image(j);
        for (int k = 0; k < n; ++k) {
          double zk = minimum_image(k);
          deposit(zi * zi + zj * zj + zk * zk,
                  m.counts[((std::size_t)i * n + j) * n + k]);
        }
      }
    }
  }

  RadialCorrelation rc;
  rc.dim = m.grid.dim;
  rc.cell = h;
  rc.c0 = m.base();
  rc.r_max = r_max;
  rc.radii.push_back(0.0);
  rc.c.push_back(rc.c0);
  rc.counts.push_back(1);
  for (int b = 0; b < bins; ++b) {
    if (count[b] == 0) {
      ++rc.merged_empty_bins;  // bin content rolls into its neighbors
      continue;
    }
    rc.radii.push_back(sum_r[b] / count[b]);
    rc.c.push_back(sum_c[b] / count[b] / total_cells);
    rc.counts.push_back(count[b]);
  }
  return rc;
}

PerimeterEstimate perimeter_from_slope(const RadialCorrelation& rc) {
  const double lo = 2.0 * rc.cell, hi = 16.0 * rc.cell;
  std::vector<double> x, y, w;
  for (std::size_t i = 0; i < rc.radii.size(); ++i) {
    if (rc.radii[i] >= lo && rc.radii[i] <= hi) {
      x.push_back(rc.radii[i]);
      y.push_back(rc.c[i]);
      w.push_back(static_cast<double>(rc.counts[i]));
    }
  }
  require(x.size() >= 4, ErrorCode::insufficient_resolution,
          "perimeter_from_slope: fewer than 4 radial samples in [2h, 16h]");
  LinearFit fit = fit_linear(x, y, w);
  double factor = slope_perimeter_factor(rc.dim);
  PerimeterEstimate est;
  est.value = -fit.slope * factor;
  est.method = PerimeterMethod::slope_fit;
  est.uncertainty = fit.slope_stderr * factor;
  return est;
}

namespace {

// Cyclic Jacobi eigenvalues of a small symmetric matrix.
std::vector<double> sym_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t d = a.size();
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        double theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < d; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(d);
  for (std::size_t i = 0; i < d; ++i) ev[i] = a[i][i];
  return ev;
}

}  // namespace

SmallRFit fit_small_r_polynomial(const RadialCorrelation& rc, int degree,
                                 double r_lo, double r_hi) {
  require(degree >= 1 && degree <= 3, ErrorCode::invalid_argument,
          "fit_small_r_polynomial: degree must be 1..3");
  std::vector<double> xs, ys, ws;
  for (std::size_t i = 0; i < rc.radii.size(); ++i) {
    double r = rc.radii[i];
    if (r >= r_lo && r <= r_hi && r > 0.0) {
      xs.push_back(r);
      ys.push_back(rc.c[i] - rc.c0);  // c0 pinned
      ws.push_back(static_cast<double>(rc.counts[i]));
    }
  }
  require(static_cast<int>(xs.size()) >= 2 * degree,
          ErrorCode::insufficient_resolution,
          "fit_small_r_polynomial: need at least 2*degree samples in window");

  const int d = degree;
  std::vector<std::vector<double>> g(d, std::vector<double>(d, 0.0));
  std::vector<double> rhs(d, 0.0);
  for (std::size_t s = 0; s < xs.size(); ++s) {
    double powj = 1.0;
    std::vector<double> p(d);
    for (int j = 0; j < d; ++j) {
      powj *= xs[s];
      p[j] = powj;
    }
    for (int j = 0; j < d; ++j) {
      rhs[j] += ws[s] * p[j] * ys[s];
      for (int l = 0; l < d; ++l) g[j][l] += ws[s] * p[j] * p[l];
    }
  }

  // Column equilibration before the conditioning check and the solve.
  std::vector<double> scale(d);
  for (int j = 0; j < d; ++j) {
    require(g[j][j] > 0.0, ErrorCode::ill_conditioned_fit,
            "fit_small_r_polynomial: degenerate design matrix");
    scale[j] = 1.0 / std::sqrt(g[j][j]);
  }
  std::vector<std::vector<double>> gs(d, std::vector<double>(d));
  for (int j = 0; j < d; ++j)
    for (int l = 0; l < d; ++l) gs[j][l] = g[j][l] * scale[j] * scale[l];
  auto ev = sym_eigenvalues(gs);
  double lo = *std::min_element(ev.begin(), ev.end());
  double hi = *std::max_element(ev.begin(), ev.end());
  require(lo > 0.0 && hi / lo < 1e8, ErrorCode::ill_conditioned_fit,
          "fit_small_r_polynomial: normal matrix condition number > 1e8");

  // Solve the scaled system by Gaussian elimination with partial pivoting.
  std::vector<double> b(d);
  for (int j = 0; j < d; ++j) b[j] = rhs[j] * scale[j];
  for (int col = 0; col < d; ++col) {
    int piv = col;
    for (int row = col + 1; row < d; ++row)
      if (std::abs(gs[row][col]) > std::abs(gs[piv][col])) piv = row;
    std::swap(gs[col], gs[piv]);
    std::swap(b[col], b[piv]);
    for (int row = col + 1; row < d; ++row) {
      double f = gs[row][col] / gs[col][col];
      for (int l = col; l < d; ++l) gs[row][l] -= f * gs[col][l];
      b[row] -= f * b[col];
    }
  }
  std::vector<double> coef(d);
  for (int row = d - 1; row >= 0; --row) {
    double acc = b[row];
    for (int l = row + 1; l < d; ++l) acc -= gs[row][l] * coef[l];
    coef[row] = acc / gs[row][row];
  }
  SmallRFit fit;
  fit.a.resize(d);
  for (int j = 0; j < d; ++j) fit.a[j] = coef[j] * scale[j];
  fit.r_lo = r_lo;
  fit.r_hi = r_hi;
  fit.c0 = rc.c0;

  double ss = 0.0, sw = 0.0;
  for (std::size_t s = 0; s < xs.size(); ++s) {
    double model = 0.0, powj = 1.0;
    for (int j = 0; j < d; ++j) {
      powj *= xs[s];
      model += fit.a[j] * powj;
    }
    ss += ws[s] * (ys[s] - model) * (ys[s] - model);
    sw += ws[s];
  }
  fit.residual = std::sqrt(ss / sw);
  return fit;
}

namespace {

bool axis_aligned_square(const Polygon& p, double* side, double* max_side) {
  if (p.vertices.size() != 4) return false;
  double xs[4], ys[4];
  for (int i = 0; i < 4; ++i) {
    xs[i] = p.vertices[i][0];
    ys[i] = p.vertices[i][1];
  }
  double x0 = *std::min_element(xs, xs + 4), x1 = *std::max_element(xs, xs + 4);
  double y0 = *std::min_element(ys, ys + 4), y1 = *std::max_element(ys, ys + 4);
  for (int i = 0; i < 4; ++i) {
    bool on_x = std::abs(xs[i] - x0) < 1e-12 || std::abs(xs[i] - x1) < 1e-12;
    bool on_y = std::abs(ys[i] - y0) < 1e-12 || std::abs(ys[i] - y1) < 1e-12;
    if (!on_x || !on_y) return false;
  }
  double a = x1 - x0, b = y1 - y0;
  if (std::abs(a - b) > 1e-12) return false;
  *side = a;
  *max_side = std::max(a, b);
  return true;
}

}  // namespace

AnalyticCorrelation analytic_correlation_curve(const ShapeSpec& s) {
  AnalyticCorrelation out;
  if (const Ball* ball = std::get_if<Ball>(&s.shape)) {
    double rho = ball->radius;
    out.c0 = shape_volume(s);
    out.validity = 1.0 - 2.0 * rho;
    require(out.validity > 0.0, ErrorCode::out_of_analytic_range,
            "analytic c_u: ball covariogram needs 2 rho + r < 1");
    out.perimeter = shape_perimeter(s).value;
    if (s.dim == 2) {
      out.c = [rho](double r) {
        if (r >= 2.0 * rho) return 0.0;
        return 2.0 * rho * rho * std::acos(r / (2.0 * rho)) -
               0.5 * r * std::sqrt(4.0 * rho * rho - r * r);
      };
    } else {
      out.c = [rho](double r) {
        if (r >= 2.0 * rho) return 0.0;
        return unit_ball_volume(3) * rho * rho * rho - kPi * rho * rho * r +
               (kPi / 12.0) * r * r * r;
      };
    }
    return out;
  }
  if (const Laminate* lam = std::get_if<Laminate>(&s.shape)) {
    double theta = lam->theta;
    int m = lam->stripes;
    out.c0 = theta;
    out.validity = std::min(theta, 1.0 - theta) / m;
    out.perimeter = 2.0 * m;
    double slope = (s.dim == 2) ? 2.0 * m / kPi : 0.5 * m;
    out.c = [theta, slope](double r) { return theta - slope * r; };
    return out;
  }
  if (const Polygon* poly = std::get_if<Polygon>(&s.shape)) {
    double side = 0.0, max_side = 0.0;
    require(axis_aligned_square(*poly, &side, &max_side),
            ErrorCode::out_of_analytic_range,
            "analytic c_u: polygons other than axis-aligned squares have no "
            "closed form here");
    require(side <= 0.5 + 1e-12, ErrorCode::out_of_analytic_range,
            "analytic c_u: square side must be <= 1/2");
    out.c0 = side * side;
    out.validity = side;
    out.perimeter = 4.0 * side;
    out.c = [side](double r) {
      return side * side - (4.0 * side / kPi) * r + r * r / kPi;
    };
    return out;
  }
  fail(ErrorCode::out_of_analytic_range,
       "analytic c_u: no closed form for this shape");
}

double analytic_autocorrelation(const ShapeSpec& s, double r) {
  require(r >= 0.0, ErrorCode::invalid_argument,
          "analytic_autocorrelation: r must be nonnegative");
  AnalyticCorrelation curve = analytic_correlation_curve(s);
  require(r <= curve.validity, ErrorCode::out_of_analytic_range,
          "analytic_autocorrelation: r outside the closed-form regime");
  return curve.c(r);
}

}  // namespace gammalab
