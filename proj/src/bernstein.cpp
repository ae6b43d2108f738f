#include "ldperm/bernstein.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace ldperm::approx {

double log_binomial(int k, int v) {
  if (v < 0 || v > k) {
    throw std::domain_error("log_binomial: index " + std::to_string(v) +
                            " outside 0.." + std::to_string(k));
  }
  return std::lgamma(k + 1.0) - std::lgamma(v + 1.0) - std::lgamma(k - v + 1.0);
}

double binomial(int k, int v) {
  if (v < 0 || v > k) {
    throw std::domain_error("binomial: index " + std::to_string(v) +
                            " outside 0.." + std::to_string(k));
  }
  // Multiplicative form keeps every intermediate value an exact ratio of the
  // final result's magnitude; exact for small k, accurate to ulps beyond.
  const int m = std::min(v, k - v);
  double r = 1.0;
  for (int i = 1; i <= m; ++i) r = r * (k - m + i) / i;
  return r;
}

std::vector<double> binomial_row(int d) {
  std::vector<double> row(static_cast<std::size_t>(d) + 1);
  row[0] = 1.0;
  for (int j = 1; j <= d; ++j) {
    row[j] = row[j - 1] * (d - j + 1) / j;
  }
  return row;
}

double bernstein_basis(int v, int k, double x) {
  if (v < 0 || v > k) {
    throw std::domain_error("bernstein_basis: index " + std::to_string(v) +
                            " outside 0.." + std::to_string(k));
  }
  if (x == 0.0) return v == 0 ? 1.0 : 0.0;
  if (x == 1.0) return v == k ? 1.0 : 0.0;
  const double lb = log_binomial(k, v) + v * std::log(x) +
                    (k - v) * std::log1p(-x);
  return std::exp(lb);
}

BernsteinPoly::BernsteinPoly(std::vector<double> coeffs, DomainMap map)
    : coeffs_(std::move(coeffs)), map_(map) {
  if (coeffs_.empty()) {
    throw std::invalid_argument("BernsteinPoly: empty coefficient vector");
  }
  if (!(map_.hi > map_.lo)) {
    throw std::invalid_argument("BernsteinPoly: domain hi must exceed lo");
  }
  for (double c : coeffs_) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("BernsteinPoly: non-finite coefficient");
    }
  }
}

double BernsteinPoly::evaluate_unit(double u) const {
  std::vector<double> work(coeffs_);
  const double v = 1.0 - u;
  for (std::size_t level = work.size() - 1; level > 0; --level) {
    for (std::size_t i = 0; i < level; ++i) {
      work[i] = v * work[i] + u * work[i + 1];
    }
  }
  return work[0];
}

BernsteinPoly bernstein_interpolate(const std::function<double(double)>& f,
                                    int k) {
  if (k < 1) throw std::invalid_argument("bernstein_interpolate: degree < 1");
  std::vector<double> coeffs(static_cast<std::size_t>(k) + 1);
  for (int v = 0; v <= k; ++v) {
    coeffs[v] = f(static_cast<double>(v) / k);
  }
  return BernsteinPoly(std::move(coeffs), DomainMap{0.0, 1.0});
}

std::function<double(double)> iterated_bernstein(
    const std::function<double(double)>& f, int k, int h) {
  if (k < 1) throw std::invalid_argument("iterated_bernstein: degree < 1");
  if (h < 1) throw std::invalid_argument("iterated_bernstein: order < 1");

  // Work on node values: applying the operator to a function known at the
  // nodes v/k produces another function we only ever need at the same nodes.
  const std::size_t m = static_cast<std::size_t>(k) + 1;
  std::vector<double> nodes(m);
  for (int v = 0; v <= k; ++v) nodes[v] = static_cast<double>(v) / k;

  std::vector<double> fn(m);
  for (std::size_t i = 0; i < m; ++i) fn[i] = f(nodes[i]);

  // I - (I-B)^h = sum_{i=1..h} C(h,i) (-1)^{i-1} B^i, so the result is a
  // single Bernstein polynomial whose coefficient vector is the matching
  // combination of B^{i-1} applied to the node values.
  std::vector<double> accum(m, 0.0);
  std::vector<double> power(fn);  // node values of B^{i-1} f
  double sign = 1.0;
  for (int i = 1; i <= h; ++i) {
    const double weight = sign * binomial(h, i);
    for (std::size_t j = 0; j < m; ++j) accum[j] += weight * power[j];
    sign = -sign;
    if (i < h) {
      // Advance power to node values of B^i f.
      BernsteinPoly step{power, DomainMap{0.0, 1.0}};
      std::vector<double> next(m);
      for (std::size_t j = 0; j < m; ++j) next[j] = step.evaluate_unit(nodes[j]);
      power = std::move(next);
    }
  }

  auto poly = std::make_shared<BernsteinPoly>(std::move(accum),
                                              DomainMap{0.0, 1.0});
  return [poly](double x) { return poly->evaluate_unit(x); };
}

}  // namespace ldperm::approx
