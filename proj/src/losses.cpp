#include "ldperm/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ldperm/rng.hpp"
#include "ldperm/smoothing.hpp"
#include "ldperm/vec.hpp"

namespace ldperm::losses {

GenLinLoss hinge_loss() {
  return GenLinLoss{
      "hinge",
      [](double t) { return std::max(0.0, 0.5 - t); },
      [](double t) { return t < 0.5 ? -1.0 : 0.0; },
      -1.0,
      0.0,
  };
}

GenLinLoss plus_loss() {
  return GenLinLoss{
      "plus",
      [](double t) { return std::max(0.0, t); },
      [](double t) { return t < 0.0 ? 0.0 : 1.0; },
      0.0,
      1.0,
  };
}

GenLinLoss abs_loss() {
  return GenLinLoss{
      "abs",
      [](double t) { return std::abs(t); },
      [](double t) { return t < 0.0 ? -1.0 : 1.0; },
      -1.0,
      1.0,
  };
}

GenLinLoss logistic_loss() {
  return GenLinLoss{
      "logistic",
      [](double t) { return std::log1p(std::exp(-t)); },
      [](double t) { return -1.0 / (1.0 + std::exp(t)); },
      -1.0 / (1.0 + std::exp(-1.0)),
      -1.0 / (1.0 + std::exp(1.0)),
  };
}

GenLinLoss smoothed_hinge_loss(double beta) {
  return GenLinLoss{
      "smoothed_hinge",
      [beta](double t) { return approx::smoothed_hinge(t, beta); },
      [beta](double t) { return approx::smoothed_hinge_deriv(t, beta); },
      approx::smoothed_hinge_deriv(-1.0, beta),
      approx::smoothed_hinge_deriv(1.0, beta),
  };
}

GenLinLoss loss_by_name(const std::string& name) {
  if (name == "hinge") return hinge_loss();
  if (name == "plus") return plus_loss();
  if (name == "abs") return abs_loss();
  if (name == "logistic") return logistic_loss();
  throw std::invalid_argument("unknown loss name: " + name);
}

bool is_affine(const GenLinLoss& loss) { return loss.d_left == loss.d_right; }

QSample sample_q(const GenLinLoss& loss, double u_draw, double tol) {
  if (!(u_draw >= 0.0) || u_draw >= 1.0) {
    throw std::domain_error("sample_q: u_draw must lie in [0, 1)");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("sample_q: tol must be > 0");
  if (is_affine(loss)) {
    throw std::domain_error("sample_q: loss '" + loss.name +
                            "' is affine; the mixture component is empty");
  }
  const double u = loss.d_left + u_draw * (loss.d_right - loss.d_left);

  // The maximal s with u in the subgradient interval at s is the right
  // endpoint of {s : f'(s) <= u + tol}; that set is an interval anchored at
  // -1 because f' is non-decreasing, so plain bisection on the predicate
  // finds its boundary.  The +tol probe supplies the maximality sweep: any s
  // whose one-sided derivative still sits at u (within tolerance) stays in.
  const double cutoff = u + tol;
  if (loss.derivative(-1.0) > cutoff) {
    // u == d_left up to rounding; the mass sits at the left edge.
    return QSample{-1.0};
  }
  if (loss.derivative(1.0) <= cutoff) return QSample{1.0};

  double lo = -1.0, hi = 1.0;
  double f_lo = loss.derivative(lo), f_hi = loss.derivative(hi);
  for (int iter = 0; iter < 60 && (hi - lo) > tol * 0.25; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = loss.derivative(mid);
    if (f_mid < f_lo - tol || f_mid > f_hi + tol) {
      throw std::runtime_error("sample_q: derivative of '" + loss.name +
                               "' is not non-decreasing near " +
                               std::to_string(mid));
    }
    if (f_mid <= cutoff) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  return QSample{lo};
}

double eval_empirical_risk(const GenLinLoss& loss, std::span<const double> w,
                           const Dataset& data) {
  if (w.size() != data.p) {
    throw std::invalid_argument(
        "eval_empirical_risk: parameter dimension " + std::to_string(w.size()) +
        " does not match data dimension " + std::to_string(data.p));
  }
  if (data.n == 0) throw std::invalid_argument("eval_empirical_risk: empty data");
  double sum = 0.0;
  for (std::size_t i = 0; i < data.n; ++i) {
    sum += loss.value(data.ys[i] * dot(w, data.row(i)));
  }
  return sum / static_cast<double>(data.n);
}

DecompositionReport verify_decomposition(const GenLinLoss& loss,
                                         std::span<const double> theta_grid,
                                         std::size_t num_samples,
                                         std::uint64_t seed) {
  if (theta_grid.empty()) {
    throw std::invalid_argument("verify_decomposition: empty grid");
  }
  if (num_samples == 0) {
    throw std::invalid_argument("verify_decomposition: no samples");
  }
  const double a = 0.5 * (loss.d_right - loss.d_left);
  const double b = 0.5 * (loss.d_right + loss.d_left);

  std::vector<double> draws;
  if (!is_affine(loss)) {
    draws.reserve(num_samples);
    SubstreamRng rng(seed, /*stream*/ 0x71);
    for (std::size_t m = 0; m < num_samples; ++m) {
      draws.push_back(sample_q(loss, rng.uniform()).s);
    }
  }

  // Per-point mixture mean and standard error, then the best constant shift.
  const std::size_t g = theta_grid.size();
  std::vector<double> recon(g), se(g);
  for (std::size_t t = 0; t < g; ++t) {
    const double theta = theta_grid[t];
    double mean = 0.0, sq = 0.0;
    if (draws.empty()) {
      mean = 0.0;  // affine loss: no mixture term
    } else {
      for (double s : draws) mean += std::abs(theta - s);
      mean /= static_cast<double>(draws.size());
      for (double s : draws) {
        const double dlt = std::abs(theta - s) - mean;
        sq += dlt * dlt;
      }
      sq /= static_cast<double>(draws.size());
    }
    recon[t] = a * mean + b * theta;
    se[t] = draws.empty()
                ? 0.0
                : std::abs(a) * std::sqrt(sq / static_cast<double>(draws.size()));
  }

  double c = 0.0;
  for (std::size_t t = 0; t < g; ++t) c += loss.value(theta_grid[t]) - recon[t];
  c /= static_cast<double>(g);

  double max_dev = 0.0, max_se = 0.0;
  for (std::size_t t = 0; t < g; ++t) {
    max_dev = std::max(max_dev, std::abs(recon[t] + c - loss.value(theta_grid[t])));
    max_se = std::max(max_se, se[t]);
  }
  return DecompositionReport{max_dev, max_se, c};
}

}  // namespace ldperm::losses
