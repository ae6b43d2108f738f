#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ldperm/losses.hpp"
#include "ldperm/smoothing.hpp"

using namespace ldperm;
using namespace ldperm::losses;

namespace {

GenLinLoss scaled_linear_loss() {
  return GenLinLoss{
      "lin",
      [](double t) { return 0.25 * t; },
      [](double) { return 0.25; },
      0.25,
      0.25,
  };
}

std::vector<double> unit_grid(double lo, double hi, double step) {
  std::vector<double> g;
  for (double t = lo; t <= hi + 1e-12; t += step) g.push_back(t);
  return g;
}

}  // namespace

TEST_CASE("catalog losses evaluate to hand values") {
  const auto hinge = hinge_loss();
  CHECK(hinge.value(0.0) == doctest::Approx(0.5));
  CHECK(hinge.value(0.5) == doctest::Approx(0.0));
  CHECK(hinge.value(1.0) == doctest::Approx(0.0));
  CHECK(hinge.derivative(0.0) == -1.0);
  CHECK(hinge.derivative(0.7) == 0.0);
  CHECK(hinge.d_left == -1.0);
  CHECK(hinge.d_right == 0.0);

  const auto plus = plus_loss();
  CHECK(plus.value(-0.3) == doctest::Approx(0.0));
  CHECK(plus.value(0.4) == doctest::Approx(0.4));
  CHECK(plus.derivative(-0.3) == 0.0);
  CHECK(plus.derivative(0.4) == 1.0);

  const auto abs = abs_loss();
  CHECK(abs.value(-0.7) == doctest::Approx(0.7));
  CHECK(abs.derivative(-0.7) == -1.0);
  CHECK(abs.derivative(0.3) == 1.0);

  const auto logistic = logistic_loss();
  CHECK(logistic.value(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(logistic.derivative(0.0) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(logistic.d_left ==
        doctest::Approx(-1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-14));
  CHECK(logistic.d_right ==
        doctest::Approx(-1.0 / (1.0 + std::exp(1.0))).epsilon(1e-14));

  const auto smoothed = smoothed_hinge_loss(0.2);
  CHECK(smoothed.value(0.0) ==
        doctest::Approx(approx::smoothed_hinge(0.0, 0.2)).epsilon(1e-15));
  CHECK(smoothed.d_left < smoothed.d_right);  // strictly increasing derivative
}

TEST_CASE("loss_by_name resolves the catalog and rejects unknowns") {
  CHECK(loss_by_name("hinge").name == "hinge");
  CHECK(loss_by_name("plus").name == "plus");
  CHECK(loss_by_name("abs").name == "abs");
  CHECK(loss_by_name("logistic").name == "logistic");
  CHECK_THROWS_AS(loss_by_name("huber"), std::invalid_argument);
  CHECK_THROWS_AS(loss_by_name(""), std::invalid_argument);
}

TEST_CASE("is_affine keys off matching endpoint derivatives") {
  CHECK_FALSE(is_affine(hinge_loss()));
  CHECK_FALSE(is_affine(abs_loss()));
  CHECK_FALSE(is_affine(logistic_loss()));
  CHECK(is_affine(scaled_linear_loss()));
}

TEST_CASE("sample_q validates its arguments") {
  const auto hinge = hinge_loss();
  CHECK_THROWS_AS(sample_q(hinge, 1.0), std::domain_error);
  CHECK_THROWS_AS(sample_q(hinge, -0.1), std::domain_error);
  CHECK_THROWS_AS(sample_q(hinge, std::nan("")), std::domain_error);
  CHECK_THROWS_AS(sample_q(hinge, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(sample_q(hinge, 0.5, -1e-9), std::invalid_argument);
  CHECK_THROWS_AS(sample_q(scaled_linear_loss(), 0.5), std::domain_error);
}

TEST_CASE("sample_q hits the known mixture atoms") {
  // The hinge derivative jumps -1 -> 0 at 1/2, so the whole mixture sits
  // there; the absolute value jumps -1 -> +1 at 0.
  for (double u_draw : {0.0, 0.01, 0.25, 0.5, 0.75, 0.99}) {
    CHECK(sample_q(hinge_loss(), u_draw).s == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(std::abs(sample_q(abs_loss(), u_draw).s) < 1e-7);
  }
}

TEST_CASE("sample_q inverts the logistic derivative") {
  // f'(s) = -1/(1+e^s) is strictly increasing, so the sampler reduces to the
  // inverse CDF: s = log(-(1+u)/u) for u = d_left + u_draw (d_right - d_left).
  const auto logistic = logistic_loss();
  for (double u_draw : {0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95}) {
    const double u =
        logistic.d_left + u_draw * (logistic.d_right - logistic.d_left);
    const double expected = std::log(-(1.0 + u) / u);
    CHECK(sample_q(logistic, u_draw).s ==
          doctest::Approx(expected).epsilon(1e-7));
  }
}

TEST_CASE("sample_q output satisfies the subgradient-interval property") {
  const double probe = 1e-6;
  for (const auto& loss : {hinge_loss(), abs_loss(), logistic_loss(),
                           smoothed_hinge_loss(0.25)}) {
    for (double u_draw : {0.0, 0.2, 0.5, 0.8, 0.999}) {
      const double u = loss.d_left + u_draw * (loss.d_right - loss.d_left);
      const double s = sample_q(loss, u_draw).s;
      REQUIRE(s >= -1.0);
      REQUIRE(s <= 1.0);
      const double left = loss.derivative(std::max(-1.0, s - probe));
      const double right = loss.derivative(std::min(1.0, s + probe));
      CHECK(left - probe <= u + 1e-6);
      CHECK(u <= right + probe + 1e-6);
    }
  }
}

TEST_CASE("sample_q is deterministic in its inputs") {
  for (double u_draw : {0.13, 0.57, 0.91}) {
    const double a = sample_q(logistic_loss(), u_draw).s;
    const double b = sample_q(logistic_loss(), u_draw).s;
    CHECK(a == b);
  }
}

TEST_CASE("empirical risk averages the margin loss") {
  Dataset data;
  data.n = 2;
  data.p = 2;
  data.xs = {1.0, 0.0, 0.0, 1.0};
  data.ys = {1.0, -1.0};
  const std::vector<double> w = {0.3, 0.4};
  // margins: 1 * 0.3 = 0.3 and -1 * 0.4 = -0.4
  CHECK(eval_empirical_risk(hinge_loss(), w, data) ==
        doctest::Approx(0.5 * (0.2 + 0.9)).epsilon(1e-14));
  CHECK(eval_empirical_risk(abs_loss(), w, data) ==
        doctest::Approx(0.5 * (0.3 + 0.4)).epsilon(1e-14));

  const std::vector<double> w3 = {0.1, 0.2, 0.3};
  CHECK_THROWS_AS(eval_empirical_risk(hinge_loss(), w3, data),
                  std::invalid_argument);
  Dataset empty;
  empty.p = 2;
  CHECK_THROWS_AS(eval_empirical_risk(hinge_loss(), w, empty),
                  std::invalid_argument);
}

TEST_CASE("decomposition reconstructs the hinge exactly with c = 1/4") {
  // Point-mass mixture at 1/2: 0.5 |t - 1/2| - 0.5 t + 1/4 == max(0, 1/2 - t).
  const auto grid = unit_grid(-1.0, 1.0, 0.05);
  const auto report = verify_decomposition(hinge_loss(), grid, 20000, 1234);
  CHECK(report.fitted_c == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(report.max_deviation <= 1e-8);
  CHECK(report.mc_standard_error <= 1e-8);
}

TEST_CASE("decomposition reconstructs the absolute value exactly with c = 0") {
  const auto grid = unit_grid(-1.0, 1.0, 0.05);
  const auto report = verify_decomposition(abs_loss(), grid, 20000, 99);
  CHECK(std::abs(report.fitted_c) <= 1e-6);
  CHECK(report.max_deviation <= 1e-8);
}

TEST_CASE("decomposition holds within Monte-Carlo error for curved losses") {
  const auto grid = unit_grid(-1.0, 1.0, 0.05);
  for (const auto& loss : {logistic_loss(), smoothed_hinge_loss(0.25)}) {
    const auto report = verify_decomposition(loss, grid, 100000, 2026);
    CHECK(report.max_deviation <=
          4.0 * report.mc_standard_error + 1e-8);
    CHECK(report.mc_standard_error > 0.0);
  }
}

TEST_CASE("decomposition check is deterministic in the seed") {
  const auto grid = unit_grid(-1.0, 1.0, 0.1);
  const auto a = verify_decomposition(logistic_loss(), grid, 5000, 7);
  const auto b = verify_decomposition(logistic_loss(), grid, 5000, 7);
  CHECK(a.max_deviation == b.max_deviation);
  CHECK(a.fitted_c == b.fitted_c);
  CHECK(a.mc_standard_error == b.mc_standard_error);
}

TEST_CASE("decomposition check rejects degenerate inputs") {
  const std::vector<double> empty_grid;
  const std::vector<double> grid = {0.0};
  CHECK_THROWS_AS(verify_decomposition(hinge_loss(), empty_grid, 10, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(verify_decomposition(hinge_loss(), grid, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("affine losses reconstruct with an empty mixture") {
  const auto grid = unit_grid(-1.0, 1.0, 0.1);
  const auto report = verify_decomposition(scaled_linear_loss(), grid, 10, 1);
  CHECK(report.max_deviation <= 1e-12);
  CHECK(report.mc_standard_error == 0.0);
}
