#include "ldperm/smoothing.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ldperm::approx {

namespace {

void check_beta(double beta) {
  if (!(beta > 0.0) || beta > 1.0) {
    throw std::invalid_argument("smoothing width must lie in (0, 1], got " +
                                std::to_string(beta));
  }
}

}  // namespace

double smoothed_hinge(double x, double beta) {
  check_beta(beta);
  const double z = 0.5 - x;
  return 0.5 * (z + std::sqrt(z * z + beta * beta));
}

double smoothed_hinge_deriv(double x, double beta) {
  check_beta(beta);
  const double z = x - 0.5;
  return 0.5 * (-1.0 + z / std::sqrt(z * z + beta * beta));
}

double smoothed_hinge_second(double x, double beta) {
  check_beta(beta);
  const double z = x - 0.5;
  const double r = z * z + beta * beta;
  return beta * beta / (r * std::sqrt(r));
}

double smoothed_plus(double x, double beta) {
  check_beta(beta);
  return 0.5 * (x + std::sqrt(x * x + beta * beta));
}

double smoothed_plus_deriv(double x, double beta) {
  check_beta(beta);
  return 0.5 * (1.0 + x / std::sqrt(x * x + beta * beta));
}

int select_degree(const SmoothingParams& params) {
  check_beta(params.beta);
  if (params.degree_override) {
    const int d = *params.degree_override;
    if (d < 1) throw std::invalid_argument("degree override must be >= 1");
    return d;
  }
  if (!(params.alpha > 0.0)) {
    throw std::invalid_argument("accuracy target alpha must be positive");
  }
  return static_cast<int>(
      std::ceil(2.0 / (params.beta * params.beta * params.alpha)));
}

DerivativePoly build_derivative_poly(DerivativeKind kind,
                                     const SmoothingParams& params,
                                     int degree_ceiling, double grid_step) {
  const int d = select_degree(params);
  if (d > degree_ceiling) {
    throw std::length_error(
        "derivative polynomial degree " + std::to_string(d) +
        " exceeds ceiling " + std::to_string(degree_ceiling) +
        "; raise the ceiling or relax the accuracy target");
  }
  if (!(grid_step > 0.0) || grid_step > 0.5) {
    throw std::invalid_argument("grid step must lie in (0, 0.5]");
  }

  const double beta = params.beta;
  auto target = [kind, beta](double u) {
    const double t = 2.0 * u - 1.0;
    return kind == DerivativeKind::hinge ? smoothed_hinge_deriv(t, beta)
                                         : smoothed_plus_deriv(t, beta);
  };

  BernsteinPoly unit = bernstein_interpolate(target, d);
  // Same coefficients, raw-argument domain (-1, 1): nodes v/d on the unit
  // interval correspond to raw arguments 2(v/d) - 1.
  BernsteinPoly poly{unit.coeffs(), DomainMap{-1.0, 1.0}};

  double sup = 0.0;
  double sum = 0.0;
  std::size_t count = 0;
  for (double u = 0.0; u <= 1.0 + 1e-12; u += grid_step) {
    const double uu = u > 1.0 ? 1.0 : u;
    const double err = std::abs(unit.evaluate_unit(uu) - target(uu));
    sup = std::max(sup, err);
    sum += err;
    ++count;
  }
  return DerivativePoly{std::move(poly), sup, sum / static_cast<double>(count)};
}

}  // namespace ldperm::approx
