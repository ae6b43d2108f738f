#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ldperm/rng.hpp"

namespace ldperm::privacy {

enum class AccountingMode { paper_faithful, calibrated };

struct PrivacyBudget {
  double epsilon = 1.0;
  double delta = 1e-5;
  AccountingMode mode = AccountingMode::calibrated;
};

// Per-player noise schedule plus the budget the full report actually spends.
// Every released element is one Gaussian-mechanism invocation with L2
// sensitivity 2 (features live in the unit ball, labels in [-1, 1]); a player
// releases 2*(1 + d(d+1)) elements: per stream one head plus d(d+1) copies.
struct NoisePlan {
  double head_var = 0.0;
  double copy_var = 0.0;
  double composed_epsilon = 0.0;
  double composed_delta = 0.0;
  bool per_release_warning = false;  // some single release has epsilon >= 1
};

// paper_faithful: the historical schedule head_var = 32 ln(1.25/delta)/eps^2,
// copy_var = 8 ln(1.25/delta) d^2 (d+1)^2 / eps^2, with the composed budget
// recovered per release and summed (it lands at 3*eps, 2(1+d(d+1))*delta).
// calibrated: the budget is split evenly across releases so the composed
// budget equals (eps, delta) exactly; head and copies then share one variance.
NoisePlan plan_noise(const PrivacyBudget& budget, int degree);

// Test-only: all variances zero.  Never produced by plan_noise; reports built
// from it reproduce the record exactly and carry no privacy guarantee.
NoisePlan zero_noise_plan();

// One player's complete noninteractive message: noisy head (x0, y0) plus
// d(d+1) independently noisied copies of each stream.
struct PlayerReport {
  int player_id = 0;
  int degree = 0;
  std::vector<double> x0;
  double y0 = 0.0;
  std::vector<std::vector<double>> x_copies;  // d(d+1) rows of length p
  std::vector<double> y_copies;               // d(d+1)
};

// Scale x into the unit ball (if needed) and clamp y to [-1, 1].
// Non-finite inputs are rejected.
std::pair<std::vector<double>, double> clip_record(std::span<const double> x,
                                                   double y);

// Build the report for one record.  The record must already satisfy the
// normalization contract (||x|| <= 1, |y| <= 1); violations are rejected with
// a hint to run clip_record.  All noise is drawn from the supplied substream
// in a fixed documented order (x0 coords, y0, then per copy: x coords, y), so
// the report is a pure function of (x, y, plan, degree, stream key).
PlayerReport randomize_player(std::span<const double> x, double y,
                              const NoisePlan& plan, int degree,
                              SubstreamRng& stream, int player_id);

// JSONL persistence: one report object per line, keys
// player_id, x0, y0, x_copies, y_copies.
void write_reports_jsonl(std::span<const PlayerReport> reports,
                         std::ostream& out);
std::vector<PlayerReport> read_reports_jsonl(std::istream& in);

}  // namespace ldperm::privacy
