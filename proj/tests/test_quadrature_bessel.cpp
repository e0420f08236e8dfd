#include <cmath>

#include "doctest.h"
#include "gammalab/bessel.hpp"
#include "gammalab/constants.hpp"
#include "gammalab/errors.hpp"
#include "gammalab/quadrature.hpp"

using namespace gammalab;

namespace {

// Ascending-series oracle for K_0, valid for small arguments:
// K_0(x) = -(ln(x/2) + gamma_E) I_0(x) + sum_{k>=1} (x^2/4)^k / (k!)^2 * H_k.
double k0_series(double x) {
  const double euler = 0.57721566490153286060;
  double q = 0.25 * x * x;
  double i0 = 1.0, term = 1.0, sum = 0.0, harmonic = 0.0;
  for (int k = 1; k < 40; ++k) {
    term *= q / (k * k);
    i0 += term;
    harmonic += 1.0 / k;
    sum += term * harmonic;
  }
  return -(std::log(0.5 * x) + euler) * i0 + sum;
}

}  // namespace

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  auto cubic = [](double x) { return 3.0 * x * x * x - x + 2.0; };
  double got = gauss_legendre(cubic, -1.0, 2.0);
  // antiderivative 3/4 x^4 - x^2/2 + 2x
  double want = (0.75 * 16 - 2.0 + 4.0) - (0.75 - 0.5 - 2.0);
  CHECK(got == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("adaptive quadrature handles a sharp peak") {
  auto peak = [](double x) { return 1.0 / (1e-4 + x * x); };
  double got = integrate_adaptive(peak, -1.0, 1.0, 1e-12);
  double want = 2.0 / 1e-2 * std::atan(1.0 / 1e-2);
  CHECK(got == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("graded origin quadrature integrates r^{-1/2}") {
  auto f = [](double r) { return 1.0 / std::sqrt(r); };
  CHECK(integrate_graded_origin(f, 1.0, 1e-12) ==
        doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("octave tail quadrature and divergence detection") {
  auto decay = [](double r) { return std::exp(-r); };
  CHECK(integrate_octaves_to_inf(decay, 0.5, 1e-12) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-10));
  auto divergent = [](double r) { return 1.0 / r; };
  CHECK_THROWS_AS((void)integrate_octaves_to_inf(divergent, 1.0, 1e-10), Error);
}

TEST_CASE("weighted linear fit recovers a line") {
  std::vector<double> x{0.0, 1.0, 2.0, 3.0}, y, w{1, 2, 1, 2};
  for (double v : x) y.push_back(4.0 - 0.5 * v);
  LinearFit fit = fit_linear(x, y, w);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(fit.intercept == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(fit.rms_residual < 1e-14);
}

TEST_CASE("K_{1/2} closed form") {
  for (double r : {0.3, 1.0, 5.0, 20.0}) {
    double want = std::sqrt(0.5 * kPi / r) * std::exp(-r);
    CHECK(bessel_k(0.5, r) == doctest::Approx(want).epsilon(1e-10));
  }
  CHECK(bessel_k(0.5, 1.0) ==
        doctest::Approx(std::sqrt(0.5 * kPi) * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("K_0 matches the ascending series") {
  for (double r : {0.25, 0.5, 1.0, 2.0})
    CHECK(bessel_k(0.0, r) == doctest::Approx(k0_series(r)).epsilon(1e-10));
  CHECK(bessel_k(0.0, 1.0) == doctest::Approx(0.421024438241).epsilon(1e-10));
}

TEST_CASE("K_1 via the derivative of K_0") {
  for (double r : {0.5, 1.0, 3.0}) {
    double h = 1e-5;
    double deriv = (bessel_k(0.0, r + h) - bessel_k(0.0, r - h)) / (2.0 * h);
    CHECK(bessel_k(1.0, r) == doctest::Approx(-deriv).epsilon(1e-7));
  }
}

TEST_CASE("asymptotic branch is continuous at the switchover") {
  // integral representation against the series used beyond r = 30
  for (double r : {25.0, 29.0, 29.999}) {
    double ratio = bessel_k(0.0, r) / bessel_k_asymptotic(0.0, r);
    CHECK(ratio == doctest::Approx(1.0).epsilon(1e-5));
  }
  double ratio = bessel_k(0.0, 29.9999) / bessel_k_asymptotic(0.0, 30.0);
  CHECK(std::abs(ratio - 1.0) < 1e-3);
}

TEST_CASE("bessel_k rejects bad arguments") {
  CHECK_THROWS_AS((void)bessel_k(0.0, -1.0), Error);
  CHECK_THROWS_AS((void)bessel_k(0.0, 0.0), Error);
  CHECK_THROWS_AS((void)bessel_k(0.3, 1.0), Error);
}
