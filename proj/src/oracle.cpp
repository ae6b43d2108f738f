#include "ldperm/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ldperm/vec.hpp"

namespace ldperm::oracle {

namespace {

void check_report(std::span<const double> w,
                  const privacy::PlayerReport& report,
                  const approx::BernsteinPoly& poly) {
  const int d = poly.degree();
  if (report.degree != d) {
    throw std::invalid_argument(
        "gradient reconstruction: report degree " +
        std::to_string(report.degree) + " does not match polynomial degree " +
        std::to_string(d));
  }
  const std::size_t copies =
      static_cast<std::size_t>(d) * (static_cast<std::size_t>(d) + 1);
  if (report.x_copies.size() != copies || report.y_copies.size() != copies) {
    throw std::invalid_argument("gradient reconstruction: report carries " +
                                std::to_string(report.x_copies.size()) +
                                " copies, expected " + std::to_string(copies));
  }
  if (w.size() != report.x0.size()) {
    throw std::invalid_argument(
        "gradient reconstruction: parameter dimension " +
        std::to_string(w.size()) + " does not match report dimension " +
        std::to_string(report.x0.size()));
  }
}

const std::vector<double>& binomial_row_cache(int d) {
  thread_local int cached_d = -1;
  thread_local std::vector<double> cached_row;
  if (cached_d != d) {
    cached_row = approx::binomial_row(d);
    cached_d = d;
  }
  return cached_row;
}

// Block sum shared by both reconstructions.  shift_k(k) supplies the additive
// shift applied to copy k's inner product before the domain map; coeff(j)
// supplies the polynomial coefficient for block j.
template <typename Shift, typename Coeff>
double block_sum(std::span<const double> w,
                 const privacy::PlayerReport& report,
                 const approx::BernsteinPoly& poly, Shift&& shift,
                 Coeff&& coeff) {
  const int d = poly.degree();
  const auto& row = binomial_row_cache(d);
  const approx::DomainMap& map = poly.domain();
  double sum = 0.0;
  for (int j = 0; j <= d; ++j) {
    const CopyRanges r = copy_ranges(d, j);
    double t = 1.0;
    for (int k = r.t_begin; k < r.t_end; ++k) {
      const double raw = report.y_copies[k] * dot(w, report.x_copies[k]);
      t *= map.to_unit(shift(raw, k));
    }
    double s = 1.0;
    for (int k = r.s_begin; k < r.s_end; ++k) {
      const double raw = report.y_copies[k] * dot(w, report.x_copies[k]);
      s *= 1.0 - map.to_unit(shift(raw, k));
    }
    sum += coeff(j) * row[j] * t * s;
  }
  return sum;
}

}  // namespace

CopyRanges copy_ranges(int d, int j) {
  if (d < 1) throw std::domain_error("copy_ranges: degree must be >= 1");
  if (j < 0 || j > d) {
    throw std::domain_error("copy_ranges: block index " + std::to_string(j) +
                            " outside 0.." + std::to_string(d));
  }
  const int base = j * d;
  return CopyRanges{base, base + j, base + j, base + d};
}

OracleSample hinge_gradient(std::span<const double> w,
                            const privacy::PlayerReport& report,
                            const approx::BernsteinPoly& poly) {
  check_report(w, report, poly);
  const double sum = block_sum(
      w, report, poly, [](double raw, int) { return raw; },
      [&poly](int j) { return poly.coeffs()[j]; });

  OracleSample sample;
  sample.player_id = report.player_id;
  sample.gradient.resize(w.size());
  const double scale = sum * report.y0;
  for (std::size_t c = 0; c < w.size(); ++c) {
    sample.gradient[c] = scale * report.x0[c];
  }
  return sample;
}

OracleSample genlin_gradient(std::span<const double> w,
                             const privacy::PlayerReport& report,
                             const approx::BernsteinPoly& poly,
                             const losses::GenLinLoss& loss,
                             std::span<const losses::QSample> s_draws) {
  check_report(w, report, poly);
  const double spread = loss.d_right - loss.d_left;
  const double affine = 0.5 * (loss.d_right + loss.d_left);

  double mixture = 0.0;
  if (!losses::is_affine(loss)) {
    const std::size_t copies = report.y_copies.size();
    if (s_draws.size() != copies) {
      throw std::invalid_argument(
          "genlin_gradient: " + std::to_string(s_draws.size()) +
          " mixture draws for " + std::to_string(copies) + " copies");
    }
    mixture = block_sum(
        w, report, poly,
        [&s_draws](double raw, int k) { return 0.5 * (raw - s_draws[k].s); },
        [&poly](int j) { return poly.coeffs()[j] - 0.5; });
  }

  OracleSample sample;
  sample.player_id = report.player_id;
  sample.gradient.resize(w.size());
  const double scale = (spread * mixture + affine) * report.y0;
  for (std::size_t c = 0; c < w.size(); ++c) {
    sample.gradient[c] = scale * report.x0[c];
  }
  return sample;
}

Certificate certify(double sup_error, double beta,
                    const std::function<std::vector<double>()>& draw_gradient,
                    int pilot_samples) {
  if (!(beta > 0.0)) throw std::invalid_argument("certify: beta must be > 0");
  if (sup_error < 0.0) {
    throw std::invalid_argument("certify: negative approximation error");
  }
  if (pilot_samples < 2) {
    throw std::invalid_argument("certify: pilot needs at least 2 samples");
  }

  std::vector<std::vector<double>> pilot;
  pilot.reserve(pilot_samples);
  for (int i = 0; i < pilot_samples; ++i) pilot.push_back(draw_gradient());
  const std::size_t p = pilot.front().size();
  std::vector<double> mean(p, 0.0);
  for (const auto& g : pilot) {
    if (g.size() != p) {
      throw std::invalid_argument("certify: pilot gradient dimension drift");
    }
    axpy(1.0 / pilot_samples, g, mean);
  }
  double msd = 0.0;
  for (const auto& g : pilot) {
    double sq = 0.0;
    for (std::size_t c = 0; c < p; ++c) {
      const double dlt = g[c] - mean[c];
      sq += dlt * dlt;
    }
    msd += sq / pilot_samples;
  }

  Certificate cert;
  cert.gamma = 2.0 * sup_error;
  cert.smoothness = 1.0 / beta;
  cert.sigma_bound = std::sqrt(msd);
  return cert;
}

}  // namespace ldperm::oracle
