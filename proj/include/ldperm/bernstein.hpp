#pragma once

#include <functional>
#include <vector>

namespace ldperm::approx {

// log C(k, v) via lgamma; exact enough for k well past 512 and never overflows.
double log_binomial(int k, int v);

// C(k, v) as a double (multiplicative form; representable up to k ~ 1000).
double binomial(int k, int v);

// Row C(d, 0..d).
std::vector<double> binomial_row(int d);

// Basis polynomial b_{v,k}(x) = C(k,v) x^v (1-x)^{k-v} for x in [0,1].
// Evaluated in the log domain so large k stays stable; the endpoints are
// handled exactly.  Throws std::domain_error for v outside 0..k.
double bernstein_basis(int v, int k, double x);

// Affine map between a raw argument interval [lo, hi] and the unit interval.
struct DomainMap {
  double lo = 0.0;
  double hi = 1.0;
  double to_unit(double t) const { return (t - lo) / (hi - lo); }
  double from_unit(double u) const { return lo + u * (hi - lo); }
};

// Polynomial in Bernstein form on [0,1], evaluated at raw arguments through a
// domain map.  Evaluation uses de Casteljau's recurrence (numerically stable,
// and valid for arguments outside [0,1] as plain polynomial extrapolation).
class BernsteinPoly {
 public:
  BernsteinPoly(std::vector<double> coeffs, DomainMap map);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  const DomainMap& domain() const { return map_; }

  // Evaluate at u on the unit interval.
  double evaluate_unit(double u) const;

  // Evaluate at a raw argument t (mapped through the domain).
  double operator()(double t) const { return evaluate_unit(map_.to_unit(t)); }

 private:
  std::vector<double> coeffs_;
  DomainMap map_;
};

// Degree-k Bernstein approximant of f on [0,1]: coefficients f(v/k).
BernsteinPoly bernstein_interpolate(const std::function<double(double)>& f,
                                    int k);

// Iterated Bernstein operator I - (I - B_k)^h applied to f, returned as an
// evaluator on [0,1].  h = 1 reduces to bernstein_interpolate.  Higher h
// trades a larger constant for a faster k^{-h} error decay on smooth f.
std::function<double(double)> iterated_bernstein(
    const std::function<double(double)>& f, int k, int h);

}  // namespace ldperm::approx
