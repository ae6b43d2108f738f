#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ldperm/dataset.hpp"

namespace ldperm::losses {

// Convex 1-Lipschitz margin loss on [-1, 1], described by its value, a
// non-decreasing derivative selection (one-sided at kinks), and the endpoint
// derivatives d_left = f'(-1), d_right = f'(1).
struct GenLinLoss {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  double d_left = 0.0;
  double d_right = 0.0;
};

GenLinLoss hinge_loss();           // max(0, 1/2 - t)
GenLinLoss plus_loss();            // max(0, t)
GenLinLoss abs_loss();             // |t|
GenLinLoss logistic_loss();        // log(1 + exp(-t))
GenLinLoss smoothed_hinge_loss(double beta);

// Catalog lookup by CLI name: hinge | plus | abs | logistic.
GenLinLoss loss_by_name(const std::string& name);

// d_left == d_right: the loss is affine and has no mixture component.
bool is_affine(const GenLinLoss& loss);

struct QSample {
  double s = 0.0;
};

// Mixture sampler for the 1-Lipschitz decomposition
//   f(t) = (d_right - d_left)/2 * E_{s~Q}|t - s| + (d_right + d_left)/2 * t + c.
// u_draw in [0, 1) picks u uniformly on [d_left, d_right]; the sample is the
// maximal s in [-1, 1] whose subgradient interval contains u, located by
// bisection to the given tolerance (the subgradient interval is read off the
// derivative by probing one tolerance to each side).
QSample sample_q(const GenLinLoss& loss, double u_draw, double tol = 1e-9);

// Mean loss over the dataset at parameter w (margin form: f(y * <x, w>)).
double eval_empirical_risk(const GenLinLoss& loss, std::span<const double> w,
                           const Dataset& data);

struct DecompositionReport {
  double max_deviation = 0.0;  // max_t |reconstruction(t) - f(t)| after the c-fit
  double mc_standard_error = 0.0;  // max over the grid of the per-point MC SE
  double fitted_c = 0.0;
};

// Monte-Carlo check of the decomposition above: draws num_samples mixture
// points, reconstructs f on the grid with the best-fitting constant c, and
// reports the largest deviation together with the Monte-Carlo standard error.
DecompositionReport verify_decomposition(const GenLinLoss& loss,
                                         std::span<const double> theta_grid,
                                         std::size_t num_samples,
                                         std::uint64_t seed);

}  // namespace ldperm::losses
