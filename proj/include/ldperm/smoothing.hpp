#pragma once

#include <optional>

#include "ldperm/bernstein.hpp"

namespace ldperm::approx {

// Smoothed hinge: beta-width convex smoothing of max(0, 1/2 - x).
// Value stays within beta/2 of the hinge, the derivative is bounded by 1 in
// magnitude, and the second derivative is bounded by 1/beta.
double smoothed_hinge(double x, double beta);
double smoothed_hinge_deriv(double x, double beta);
double smoothed_hinge_second(double x, double beta);

// Smoothed plus: beta-width convex smoothing of max(0, x); derivative in [0,1].
double smoothed_plus(double x, double beta);
double smoothed_plus_deriv(double x, double beta);

enum class DerivativeKind { hinge, plus };

// alpha is the target excess-risk accuracy; beta the smoothing width.
// degree_override pins the polynomial degree directly (decoupled from alpha).
struct SmoothingParams {
  double beta = 0.25;
  double alpha = 0.5;
  std::optional<int> degree_override;
};

// Degree rule: ceil(2 / (beta^2 * alpha)) unless overridden.
int select_degree(const SmoothingParams& params);

struct DerivativePoly {
  BernsteinPoly poly;
  double sup_error;   // max |poly - target| over the measurement grid
  double mean_error;  // mean |poly - target| over the measurement grid
};

// Bernstein approximant of the chosen smoothed derivative.  The raw argument
// interval (-1, 1) is mapped onto [0, 1]: the polynomial is fit to
// g(u) = deriv(2u - 1) and evaluated at u = (t + 1)/2 via its domain map.
// Approximation error is measured on a grid over [0, 1] of the given step.
// Degrees above degree_ceiling are refused with a sizing error.
DerivativePoly build_derivative_poly(DerivativeKind kind,
                                     const SmoothingParams& params,
                                     int degree_ceiling = 1024,
                                     double grid_step = 1e-3);

}  // namespace ldperm::approx
