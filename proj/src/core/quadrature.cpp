#include "gammalab/quadrature.hpp"

#include <array>
#include <cmath>
#include <cstddef>

#include "gammalab/errors.hpp"

namespace gammalab {

namespace {

// Nodes/weights on [-1, 1], symmetric halves stored.
constexpr std::array<double, 8> kNodes16 = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kWeights16 = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

constexpr std::array<double, 16> kNodes32 = {
    0.0483076656877383, 0.1444719615827965, 0.2392873622521371,
    0.3318686022821277, 0.4213512761306353, 0.5068999089322294,
    0.5877157572407623, 0.6630442669302152, 0.7321821187402897,
    0.7944837959679424, 0.8493676137325700, 0.8963211557660521,
    0.9349060759377397, 0.9647622555875064, 0.9856115115452684,
    0.9972638618494816};
constexpr std::array<double, 16> kWeights32 = {
    0.0965400885147278, 0.0956387200792749, 0.0938443990808046,
    0.0911738786957639, 0.0876520930044038, 0.0833119242269467,
    0.0781938957870703, 0.0723457941088485, 0.0658222227763618,
    0.0586840934785355, 0.0509980592623762, 0.0428358980222267,
    0.0342738629130214, 0.0253920653092621, 0.0162743947309057,
    0.0070186100094701};

template <size_t M>
double gl_sym(const RealFn& f, double a, double b,
              const std::array<double, M>& nodes,
              const std::array<double, M>& weights, double* abs_norm) {
  double mid = 0.5 * (a + b);
  double half = 0.5 * (b - a);
  double sum = 0.0, l1 = 0.0;
  for (size_t i = 0; i < M; ++i) {
    double dx = half * nodes[i];
    double lo = f(mid - dx), hi = f(mid + dx);
    sum += weights[i] * (lo + hi);
    l1 += weights[i] * (std::abs(lo) + std::abs(hi));
  }
  if (abs_norm) *abs_norm = l1 * std::abs(half);
  return sum * half;
}

double adaptive_panel(const RealFn& f, double a, double b, double tol,
                      int depth, int max_depth) {
  double coarse = gl_sym(f, a, b, kNodes16, kWeights16, nullptr);
  double l1 = 0.0;
  double fine = gl_sym(f, a, b, kNodes32, kWeights32, &l1);
  // The 1e-15 * l1 floor stops recursion once the discrepancy is roundoff.
  double accept = std::max(tol, 1e-15 * l1);
  if (std::abs(fine - coarse) <= accept || depth >= max_depth) return fine;
  double mid = 0.5 * (a + b);
  return adaptive_panel(f, a, mid, 0.5 * tol, depth + 1, max_depth) +
         adaptive_panel(f, mid, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double gauss_legendre(const RealFn& f, double a, double b, int order) {
  if (order <= 16) return gl_sym(f, a, b, kNodes16, kWeights16, nullptr);
  return gl_sym(f, a, b, kNodes32, kWeights32, nullptr);
}

double integrate_adaptive(const RealFn& f, double a, double b, double abs_tol,
                          int max_depth) {
  if (a == b) return 0.0;
  return adaptive_panel(f, a, b, abs_tol, 0, std::min(max_depth, 30));
}

double integrate_graded_origin(const RealFn& f, double b, double abs_tol) {
  if (b <= 0.0) return 0.0;
  // Geometric panels b/2^{k+1} .. b/2^k; stop once panels stop contributing.
  double total = 0.0;
  double hi = b;
  for (int k = 0; k < 60; ++k) {
    double lo = 0.5 * hi;
    double piece = integrate_adaptive(f, lo, hi, 0.25 * abs_tol, 24);
    total += piece;
    if (std::abs(piece) < 0.1 * abs_tol && k > 4) break;
    hi = lo;
  }
  return total;
}

double integrate_octaves_to_inf(const RealFn& f, double a, double abs_tol,
                                int max_octaves) {
  require(a > 0.0, ErrorCode::invalid_argument,
          "integrate_octaves_to_inf: lower bound must be positive");
  double total = 0.0;
  double lo = a;
  for (int k = 0; k < max_octaves; ++k) {
    double hi = 2.0 * lo;
    double piece = integrate_adaptive(f, lo, hi, 0.25 * abs_tol, 24);
    total += piece;
    if (std::abs(piece) < 0.1 * abs_tol && k > 1) return total;
    lo = hi;
  }
  fail(ErrorCode::truncation_failure,
       "integrate_octaves_to_inf: tail did not converge (divergent moment?)");
}

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& w) {
  require(x.size() == y.size() && x.size() >= 2, ErrorCode::invalid_argument,
          "fit_linear: need at least two samples");
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double wi = w.empty() ? 1.0 : w[i];
    sw += wi;
    sx += wi * x[i];
    sy += wi * y[i];
  }
  double xbar = sx / sw, ybar = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double wi = w.empty() ? 1.0 : w[i];
    sxx += wi * (x[i] - xbar) * (x[i] - xbar);
    sxy += wi * (x[i] - xbar) * (y[i] - ybar);
  }
  require(sxx > 0.0, ErrorCode::ill_conditioned_fit,
          "fit_linear: degenerate abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  double ss = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double wi = w.empty() ? 1.0 : w[i];
    double r = y[i] - fit.intercept - fit.slope * x[i];
    ss += wi * r * r;
  }
  size_t m = x.size();
  fit.rms_residual = std::sqrt(ss / sw);
  if (m > 2) fit.slope_stderr = std::sqrt((ss / sw) / sxx * m / double(m - 2));
  return fit;
}

}  // namespace gammalab
