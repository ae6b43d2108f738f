#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ldperm/dataset.hpp"
#include "ldperm/losses.hpp"
#include "ldperm/oracle.hpp"
#include "ldperm/privacy.hpp"
#include "ldperm/solver.hpp"

namespace ldperm::harness {

enum class DataKind { separable_svm, logistic_planted, uniform_ball };

DataKind data_kind_by_name(const std::string& name);

// Synthetic records in the unit ball.  separable_svm plants a unit direction
// and resamples until every record clears the margin; logistic_planted draws
// labels in {-1, 1} with logistic probabilities; uniform_ball pairs ball
// features with uniform labels in [-1, 1].  margin must lie in [0, 0.5).
Dataset generate_synthetic(DataKind kind, std::size_t n, std::size_t p,
                           double margin, std::uint64_t seed);

struct BaselineResult {
  std::vector<double> w;
  double value = 0.0;
  bool converged = false;  // false: iteration ceiling hit before tolerance
};

// Nonprivate reference optimum: projected subgradient descent over the unit
// ball, tracking the best averaged iterate, stopped when the best value over
// a 200-iteration window stops improving by more than tol.
BaselineResult baseline_optimum(const losses::GenLinLoss& loss,
                                const Dataset& data, double tol,
                                int max_iters = 5000);

enum class NoiseMode { zero_noise, paper_faithful, calibrated };
enum class Algorithm { automatic, hinge, genlin, plus_reduction };

struct ExperimentConfig {
  std::string loss = "hinge";
  std::size_t n = 0;
  std::size_t p = 0;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<int> degree;
  std::optional<double> alpha;
  NoiseMode mode = NoiseMode::calibrated;
  std::vector<std::uint64_t> seeds;
  std::string dataset = "separable_svm";  // kind[:margin] or a .csv path
  std::string out_dir;
  Algorithm algorithm = Algorithm::automatic;
  std::optional<int> iterations;  // solver steps; defaults to n
};

// Parse lines of "key = value" ('#' starts a comment).  Unknown keys are
// rejected.  Throws with a message enumerating every violated field.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);
void validate_config(const ExperimentConfig& config);

// Smoothing width / degree rules shared by config handling and the CLI:
// given alpha: beta = alpha/4, degree = ceil(32/alpha^3); given a degree
// alone, beta = (2*degree)^(-1/3) keeps both entry points on the same curve.
struct ResolvedApprox {
  int degree = 0;
  double beta = 0.0;
  double alpha = 0.0;
};
ResolvedApprox resolve_approx(const ExperimentConfig& config);

struct SeedOutcome {
  std::uint64_t seed = 0;
  std::size_t n = 0;  // records actually used (file datasets override config)
  std::size_t p = 0;
  double excess_risk = 0.0;
  double baseline_value = 0.0;
  std::int64_t wall_ms = 0;
  std::vector<double> w_out;
  oracle::Certificate certificate;
  bool baseline_converged = false;
};

// Proof of noninteractivity for one run: the order in which player records
// were consumed (exactly once each) and whether the solver had started by
// then.
struct NoninteractiveAudit {
  std::vector<int> randomize_order;
  bool randomized_before_solver = false;
  bool each_player_once(std::size_t n) const;
};

struct ExperimentResult {
  ExperimentConfig config;
  ResolvedApprox approx;
  privacy::NoisePlan plan;  // plan of the last seed run (identical across seeds)
  std::vector<SeedOutcome> outcomes;
  std::vector<NoninteractiveAudit> audits;
};

// Full pipeline per seed: load or synthesize data, clip, randomize every
// player once, build the derivative polynomial, certify, run the solver on
// reports only, and score the output against the measured baseline optimum.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Results CSV: loss,epsilon,delta,degree,n,p,seed,excess_risk,baseline_value,
// wall_ms.  Identical configs and seeds reproduce every byte except wall_ms.
void write_results_csv(const ExperimentResult& result, std::ostream& out);

// Dataset CSV: one record per line, label first, then the features.
void write_dataset_csv(const Dataset& data, std::ostream& out);
Dataset load_dataset_csv(std::istream& in, const std::string& provenance);
Dataset load_dataset_csv_file(const std::string& path);

}  // namespace ldperm::harness
