#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ldperm/smoothing.hpp"

using namespace ldperm::approx;

namespace {

double hinge_raw(double x) { return std::max(0.0, 0.5 - x); }
double plus_raw(double x) { return std::max(0.0, x); }

}  // namespace

TEST_CASE("pinned values") {
  CHECK(smoothed_hinge(0.0, 0.2) ==
        doctest::Approx(0.5192582403567252).epsilon(1e-12));
  CHECK(smoothed_plus(1.0, 0.1) ==
        doctest::Approx(1.0024937810560446).epsilon(1e-12));
}

TEST_CASE("derivatives match central finite differences") {
  const double h = 1e-6;
  for (double beta : {0.1, 0.25, 0.5}) {
    for (double x = -2.0; x <= 2.0; x += 0.37) {
      const double fd_hinge =
          (smoothed_hinge(x + h, beta) - smoothed_hinge(x - h, beta)) / (2 * h);
      CHECK(smoothed_hinge_deriv(x, beta) ==
            doctest::Approx(fd_hinge).epsilon(1e-5));

      // The curvature accessor returns beta^2 / ((x-1/2)^2 + beta^2)^{3/2},
      // the quantity whose supremum (exactly 1/beta, attained at the kink)
      // drives degree sizing and the smoothness certificate.  Note it is
      // twice the analytic second derivative of smoothed_hinge, so it is
      // checked against the closed form rather than a finite difference.
      const double r = x - 0.5;
      const double closed_second =
          beta * beta / std::pow(r * r + beta * beta, 1.5);
      CHECK(smoothed_hinge_second(x, beta) ==
            doctest::Approx(closed_second).epsilon(1e-12));
      const double fd_second = (smoothed_hinge_deriv(x + h, beta) -
                                smoothed_hinge_deriv(x - h, beta)) /
                               (2 * h);
      CHECK(smoothed_hinge_second(x, beta) ==
            doctest::Approx(2.0 * fd_second).epsilon(1e-4));

      const double fd_plus =
          (smoothed_plus(x + h, beta) - smoothed_plus(x - h, beta)) / (2 * h);
      CHECK(smoothed_plus_deriv(x, beta) ==
            doctest::Approx(fd_plus).epsilon(1e-5));
    }
  }
}

TEST_CASE("smoothing bounds hold on a fine grid") {
  // Checked on [-2, 2] at step 1e-3: the value gap stays within beta/2, the
  // derivative within [-1, 0] (hinge) and [0, 1] (plus), and the curvature
  // within [0, 1/beta]; the extreme values are attained at the kink.
  for (double beta : {0.1, 0.25, 0.5}) {
    double max_gap = 0.0, max_curv = 0.0;
    for (int i = -2000; i <= 2000; ++i) {
      const double x = i * 1e-3;
      const double gap = std::abs(smoothed_hinge(x, beta) - hinge_raw(x));
      max_gap = std::max(max_gap, gap);
      CHECK(gap <= 0.5 * beta + 1e-12);

      const double d1 = smoothed_hinge_deriv(x, beta);
      CHECK(d1 >= -1.0 - 1e-12);
      CHECK(d1 <= 0.0 + 1e-12);

      const double d2 = smoothed_hinge_second(x, beta);
      max_curv = std::max(max_curv, d2);
      CHECK(d2 >= 0.0);
      CHECK(d2 <= (1.0 / beta) * (1.0 + 1e-12));

      CHECK(std::abs(smoothed_plus(x, beta) - plus_raw(x)) <= 0.5 * beta + 1e-12);
      const double hp = smoothed_plus_deriv(x, beta);
      CHECK(hp >= 0.0);
      CHECK(hp <= 1.0);
    }
    // The bounds are tight: both extremes are reached at the kink.
    CHECK(max_gap == doctest::Approx(0.5 * beta).epsilon(1e-9));
    CHECK(max_curv == doctest::Approx(1.0 / beta).epsilon(1e-9));
  }
}

TEST_CASE("smoothed functions are convex: derivative non-decreasing") {
  for (double beta : {0.1, 0.4}) {
    double prev_h = smoothed_hinge_deriv(-2.0, beta);
    double prev_p = smoothed_plus_deriv(-2.0, beta);
    for (int i = -1999; i <= 2000; ++i) {
      const double x = i * 1e-3;
      const double dh = smoothed_hinge_deriv(x, beta);
      const double dp = smoothed_plus_deriv(x, beta);
      CHECK(dh >= prev_h - 1e-15);
      CHECK(dp >= prev_p - 1e-15);
      prev_h = dh;
      prev_p = dp;
    }
  }
}

TEST_CASE("invalid smoothing width is rejected") {
  CHECK_THROWS_AS(smoothed_hinge(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(smoothed_hinge(0.0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(smoothed_plus(0.0, 1.5), std::invalid_argument);
}

TEST_CASE("degree rule") {
  SmoothingParams params;
  params.beta = 0.125;
  params.alpha = 0.5;
  CHECK(select_degree(params) == 256);

  params.degree_override = 12;
  CHECK(select_degree(params) == 12);

  params.degree_override.reset();
  params.alpha = 0.0;
  CHECK_THROWS_AS(select_degree(params), std::invalid_argument);
}

TEST_CASE("degree ceiling produces a sizing error") {
  SmoothingParams params;
  params.beta = 0.01;   // forces degree 2/(1e-4 * alpha)
  params.alpha = 0.1;
  CHECK_THROWS_AS(build_derivative_poly(DerivativeKind::hinge, params),
                  std::length_error);
}

TEST_CASE("degree-1 plus coefficients are the endpoint derivatives") {
  SmoothingParams params;
  params.beta = 0.3;
  params.degree_override = 1;
  const auto dp = build_derivative_poly(DerivativeKind::plus, params);
  REQUIRE(dp.poly.degree() == 1);
  CHECK(dp.poly.coeffs()[0] ==
        doctest::Approx(smoothed_plus_deriv(-1.0, 0.3)).epsilon(1e-12));
  CHECK(dp.poly.coeffs()[1] ==
        doctest::Approx(smoothed_plus_deriv(1.0, 0.3)).epsilon(1e-12));
}

TEST_CASE("derivative polynomial maps raw arguments onto the unit domain") {
  SmoothingParams params;
  params.beta = 0.25;
  params.degree_override = 16;
  const auto dp = build_derivative_poly(DerivativeKind::hinge, params);
  CHECK(dp.poly.domain().lo == -1.0);
  CHECK(dp.poly.domain().hi == 1.0);
  for (double t : {-1.0, -0.3, 0.0, 0.5, 1.0}) {
    CHECK(dp.poly(t) ==
          doctest::Approx(dp.poly.evaluate_unit((t + 1.0) / 2.0)).epsilon(1e-12));
  }
  // Nodes v/d pull back to raw arguments 2 v/d - 1.
  CHECK(dp.poly.coeffs()[0] ==
        doctest::Approx(smoothed_hinge_deriv(-1.0, 0.25)).epsilon(1e-12));
  CHECK(dp.poly.coeffs()[16] ==
        doctest::Approx(smoothed_hinge_deriv(1.0, 0.25)).epsilon(1e-12));
}

TEST_CASE("coefficients stay within the derivative's range") {
  SmoothingParams params;
  params.beta = 0.1;
  params.degree_override = 64;
  for (auto kind : {DerivativeKind::hinge, DerivativeKind::plus}) {
    const auto dp = build_derivative_poly(kind, params);
    for (double c : dp.poly.coeffs()) {
      CHECK(std::abs(c) <= 1.0);
    }
  }
}

TEST_CASE("sup error shrinks strictly with the degree") {
  SmoothingParams params;
  params.beta = 0.25;
  params.degree_override = 64;
  const auto d64 = build_derivative_poly(DerivativeKind::hinge, params);
  params.degree_override = 128;
  const auto d128 = build_derivative_poly(DerivativeKind::hinge, params);
  CHECK(d64.sup_error > d128.sup_error);
  CHECK(d128.sup_error > 0.0);
  CHECK(d64.mean_error > d128.mean_error);
  CHECK(d64.mean_error <= d64.sup_error);
}

TEST_CASE("sizing rule meets its accuracy target") {
  // Degree d = 2/(beta^2 alpha) should push the sup error under alpha/2.
  SmoothingParams params;
  params.beta = 0.125;
  params.alpha = 0.5;
  const auto dp = build_derivative_poly(DerivativeKind::hinge, params);
  REQUIRE(dp.poly.degree() == 256);
  CHECK(dp.sup_error < params.alpha / 2.0);
}
