#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ldperm/bernstein.hpp"
#include "ldperm/losses.hpp"
#include "ldperm/privacy.hpp"

namespace ldperm::oracle {

// Quality contract the gradient source advertises to the solver:
// gamma bounds the systematic bias, smoothness the surrogate's curvature,
// sigma_bound the gradient noise scale.
struct Certificate {
  double gamma = 0.0;
  double smoothness = 0.0;
  double sigma_bound = 0.0;
};

struct OracleSample {
  std::vector<double> gradient;
  int player_id = 0;
  Certificate certificate;
};

// Copy bookkeeping for one gradient evaluation at degree d: block j consumes
// copies [j*d, j*d + d) (0-based, half-open), the first j of them in the
// ascending product and the remaining d - j in the descending product.
// Blocks tile [0, d(d+1)) exactly, so every copy is consumed once; that keeps
// the block products independent across factors.
struct CopyRanges {
  int t_begin = 0, t_end = 0;  // ascending-product copies
  int s_begin = 0, s_end = 0;  // descending-product copies
};
CopyRanges copy_ranges(int d, int j);

// Margin-loss gradient reconstructed from one report: with u_k the copy
// inner products mapped onto the polynomial's unit domain,
//   G = sum_j c_j C(d,j) prod(u_k, ascending) prod(1 - u_k, descending)
//       * y0 * x0.
// Unbiased for poly(y<w,x>) * y * x conditional on the record, because each
// block multiplies independent unbiased factors.  The returned certificate is
// zeroed; the pipeline stamps its own.
OracleSample hinge_gradient(std::span<const double> w,
                            const privacy::PlayerReport& report,
                            const approx::BernsteinPoly& poly);

// Generalized-linear gradient via the 1-Lipschitz mixture decomposition.
// Consumes exactly d(d+1) fresh mixture draws, one per copy; factor k uses
// (y_k<w,x_k> - s_k)/2 mapped onto the unit domain.  The polynomial term is
// centered (coefficients c_j - 1/2) so that together with the affine term
// (d_right + d_left)/2 * y0 * x0 the estimate targets the smoothed-surrogate
// gradient (d_right - d_left) * h'((theta - s)/2) + d_left, scaled by y0*x0.
// For an affine loss the mixture term is skipped entirely.
OracleSample genlin_gradient(std::span<const double> w,
                             const privacy::PlayerReport& report,
                             const approx::BernsteinPoly& poly,
                             const losses::GenLinLoss& loss,
                             std::span<const losses::QSample> s_draws);

// Build the pipeline certificate: gamma = 2 * measured sup approximation
// error, smoothness = 1/beta, sigma_bound = root-mean-square L2 deviation of
// a pilot batch drawn from the live gradient source.
Certificate certify(double sup_error, double beta,
                    const std::function<std::vector<double>()>& draw_gradient,
                    int pilot_samples = 200);

}  // namespace ldperm::oracle
