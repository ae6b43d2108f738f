#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace ldperm::solver {

enum class StepRule { fixed, inv_sqrt };
enum class Averaging { last, uniform_tail };

struct SolverConfig {
  int iterations = 1000;
  double radius = 1.0;
  StepRule step_rule = StepRule::inv_sqrt;
  double step_scale = 1.0;
  Averaging averaging = Averaging::uniform_tail;
  std::uint64_t seed = 0;
};

struct TraceRow {
  int iteration = 0;
  int player_id = 0;
  double iterate_norm = 0.0;
  double step_size = 0.0;
};

struct Trace {
  std::vector<TraceRow> rows;
};

struct SigmResult {
  std::vector<double> w_out;
  Trace trace;
};

// Euclidean projection onto the ball of the given radius.
std::vector<double> project_ball(std::span<const double> w, double radius);

// Gradient source: stochastic gradient at w for the sampled player.
using GradientSource =
    std::function<std::vector<double>(std::span<const double> w, int player_id)>;

// Projected stochastic gradient descent starting from w = 0.  Players are
// sampled uniformly with replacement from [0, n_players).  Under inv_sqrt the
// step is step_scale / (sigma_hat * sqrt(t)) with sigma_hat taken from the
// certificate (a non-positive sigma_hat falls back to 1 so a noiseless source
// still steps).  The output is the last iterate or the average of the final
// ceil(iterations/2) iterates.  A non-finite gradient aborts with a
// diagnostic carrying the iteration.
SigmResult run_sigm(const GradientSource& source, int n_players, int dim,
                    double sigma_hat, const SolverConfig& config);

// Trace persistence: header iteration,player_id,iterate_norm,step_size.
void write_trace_csv(const Trace& trace, std::ostream& out);

}  // namespace ldperm::solver
