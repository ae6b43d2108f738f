#include "ldperm/solver.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ldperm/rng.hpp"
#include "ldperm/vec.hpp"

namespace ldperm::solver {

std::vector<double> project_ball(std::span<const double> w, double radius) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("project_ball: radius must be positive");
  }
  std::vector<double> r(w.begin(), w.end());
  const double nrm = norm2(r);
  if (nrm > radius) {
    const double scale = radius / nrm;
    for (double& v : r) v *= scale;
  }
  return r;
}

SigmResult run_sigm(const GradientSource& source, int n_players, int dim,
                    double sigma_hat, const SolverConfig& config) {
  if (n_players < 1) throw std::invalid_argument("run_sigm: no players");
  if (dim < 1) throw std::invalid_argument("run_sigm: dimension must be >= 1");
  if (config.iterations < 1) {
    throw std::invalid_argument("run_sigm: iterations must be >= 1");
  }
  if (!(config.radius > 0.0)) {
    throw std::invalid_argument("run_sigm: radius must be positive");
  }
  if (!(config.step_scale > 0.0)) {
    throw std::invalid_argument("run_sigm: step_scale must be positive");
  }

  const double sigma = sigma_hat > 0.0 ? sigma_hat : 1.0;
  SubstreamRng sampler(config.seed, /*stream*/ 0x5a);

  std::vector<double> w(dim, 0.0);
  const int tail = (config.iterations + 1) / 2;
  std::vector<double> tail_sum(dim, 0.0);
  int tail_count = 0;

  SigmResult result;
  result.trace.rows.reserve(config.iterations);

  for (int t = 1; t <= config.iterations; ++t) {
    const int player =
        static_cast<int>(sampler.uniform_index(static_cast<std::uint64_t>(n_players)));
    const std::vector<double> g = source(w, player);
    if (g.size() != static_cast<std::size_t>(dim)) {
      throw std::runtime_error("run_sigm: gradient dimension mismatch at iteration " +
                               std::to_string(t));
    }
    for (double v : g) {
      if (!std::isfinite(v)) {
        throw std::runtime_error(
            "run_sigm: non-finite gradient at iteration " + std::to_string(t) +
            " (player " + std::to_string(player) + ")");
      }
    }
    const double eta = config.step_rule == StepRule::fixed
                           ? config.step_scale
                           : config.step_scale / (sigma * std::sqrt(t));
    std::vector<double> next(w);
    axpy(-eta, g, next);
    w = project_ball(next, config.radius);

    result.trace.rows.push_back(TraceRow{t, player, norm2(w), eta});

    if (t > config.iterations - tail) {
      axpy(1.0, w, tail_sum);
      ++tail_count;
    }
  }

  if (config.averaging == Averaging::last) {
    result.w_out = w;
  } else {
    result.w_out = scaled(tail_sum, 1.0 / tail_count);
  }
  return result;
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
  out << "iteration,player_id,iterate_norm,step_size\n";
  char buf[128];
  for (const TraceRow& row : trace.rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.12g,%.12g\n", row.iteration,
                  row.player_id, row.iterate_norm, row.step_size);
    out << buf;
  }
}

}  // namespace ldperm::solver
