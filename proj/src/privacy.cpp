#include "ldperm/privacy.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ldperm/vec.hpp"

#include <json.hpp>

namespace ldperm::privacy {

namespace {

constexpr double kNormTolerance = 1e-9;

// Gaussian mechanism at L2 sensitivity 2: sigma^2 = 2 ln(1.25/delta) 4 / eps^2.
double gaussian_variance(double eps, double delta) {
  return 8.0 * std::log(1.25 / delta) / (eps * eps);
}

// Inverse of the above: the per-release epsilon a given variance spends.
double release_epsilon(double variance, double delta) {
  return std::sqrt(8.0 * std::log(1.25 / delta) / variance);
}

void check_budget(const PrivacyBudget& b) {
  if (!(b.epsilon > 0.0)) {
    throw std::invalid_argument("privacy budget: epsilon must be positive");
  }
  if (!(b.delta > 0.0) || b.delta >= 1.0) {
    throw std::invalid_argument("privacy budget: delta must lie in (0, 1)");
  }
}

}  // namespace

NoisePlan plan_noise(const PrivacyBudget& budget, int degree) {
  check_budget(budget);
  if (degree < 1) throw std::invalid_argument("plan_noise: degree must be >= 1");

  const double d = degree;
  const double copies = d * (d + 1.0);
  const double releases = 2.0 * (1.0 + copies);

  NoisePlan plan;
  if (budget.mode == AccountingMode::paper_faithful) {
    const double log_term = std::log(1.25 / budget.delta);
    plan.head_var = 32.0 * log_term / (budget.epsilon * budget.epsilon);
    plan.copy_var = 8.0 * log_term * copies * copies /
                    (budget.epsilon * budget.epsilon);
    const double eps_head = release_epsilon(plan.head_var, budget.delta);
    const double eps_copy = release_epsilon(plan.copy_var, budget.delta);
    plan.composed_epsilon = 2.0 * eps_head + 2.0 * copies * eps_copy;
    plan.composed_delta = releases * budget.delta;
    plan.per_release_warning = eps_head >= 1.0 || eps_copy >= 1.0;
  } else {
    const double eps_r = budget.epsilon / releases;
    const double delta_r = budget.delta / releases;
    const double var = gaussian_variance(eps_r, delta_r);
    plan.head_var = var;
    plan.copy_var = var;
    plan.composed_epsilon = releases * eps_r;
    plan.composed_delta = releases * delta_r;
    plan.per_release_warning = eps_r >= 1.0;
  }
  return plan;
}

NoisePlan zero_noise_plan() { return NoisePlan{0.0, 0.0, 0.0, 0.0, false}; }

std::pair<std::vector<double>, double> clip_record(std::span<const double> x,
                                                   double y) {
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("clip_record: non-finite feature value");
    }
  }
  if (!std::isfinite(y)) {
    throw std::invalid_argument("clip_record: non-finite label");
  }
  std::vector<double> xc(x.begin(), x.end());
  const double nrm = norm2(xc);
  if (nrm > 1.0) {
    for (double& v : xc) v /= nrm;
  }
  const double yc = std::min(1.0, std::max(-1.0, y));
  return {std::move(xc), yc};
}

PlayerReport randomize_player(std::span<const double> x, double y,
                              const NoisePlan& plan, int degree,
                              SubstreamRng& stream, int player_id) {
  if (degree < 1) {
    throw std::invalid_argument("randomize_player: degree must be >= 1");
  }
  if (x.empty()) {
    throw std::invalid_argument("randomize_player: empty feature vector");
  }
  if (norm2(x) > 1.0 + kNormTolerance || std::abs(y) > 1.0 + kNormTolerance) {
    throw std::invalid_argument(
        "randomize_player: record violates the normalization contract "
        "(||x|| <= 1, |y| <= 1); run clip_record first");
  }
  if (plan.head_var < 0.0 || plan.copy_var < 0.0) {
    throw std::invalid_argument("randomize_player: negative variance");
  }

  const std::size_t p = x.size();
  const std::size_t copies =
      static_cast<std::size_t>(degree) * (static_cast<std::size_t>(degree) + 1);
  const double head_sd = std::sqrt(plan.head_var);
  const double copy_sd = std::sqrt(plan.copy_var);

  PlayerReport report;
  report.player_id = player_id;
  report.degree = degree;
  report.x0.resize(p);
  for (std::size_t c = 0; c < p; ++c) report.x0[c] = x[c] + stream.normal(head_sd);
  report.y0 = y + stream.normal(head_sd);
  report.x_copies.resize(copies);
  report.y_copies.resize(copies);
  for (std::size_t k = 0; k < copies; ++k) {
    report.x_copies[k].resize(p);
    for (std::size_t c = 0; c < p; ++c) {
      report.x_copies[k][c] = x[c] + stream.normal(copy_sd);
    }
    report.y_copies[k] = y + stream.normal(copy_sd);
  }
  return report;
}

void write_reports_jsonl(std::span<const PlayerReport> reports,
                         std::ostream& out) {
  for (const PlayerReport& r : reports) {
    nlohmann::ordered_json line;
    line["player_id"] = r.player_id;
    line["x0"] = r.x0;
    line["y0"] = r.y0;
    line["x_copies"] = r.x_copies;
    line["y_copies"] = r.y_copies;
    out << line.dump() << '\n';
  }
}

std::vector<PlayerReport> read_reports_jsonl(std::istream& in) {
  std::vector<PlayerReport> reports;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json obj = nlohmann::json::parse(line);
    PlayerReport r;
    r.player_id = obj.at("player_id").get<int>();
    r.x0 = obj.at("x0").get<std::vector<double>>();
    r.y0 = obj.at("y0").get<double>();
    r.x_copies = obj.at("x_copies").get<std::vector<std::vector<double>>>();
    r.y_copies = obj.at("y_copies").get<std::vector<double>>();
    const std::size_t m = r.x_copies.size();
    if (r.y_copies.size() != m) {
      throw std::runtime_error("reports jsonl: copy stream length mismatch");
    }
    // m = d(d+1) determines the degree.
    int d = static_cast<int>(std::floor(std::sqrt(static_cast<double>(m))));
    while (static_cast<std::size_t>(d) * (d + 1) > m) --d;
    while (static_cast<std::size_t>(d + 1) * (d + 2) <= m) ++d;
    if (d < 1 || static_cast<std::size_t>(d) * (d + 1) != m) {
      throw std::runtime_error(
          "reports jsonl: copy count " + std::to_string(m) +
          " is not d(d+1) for any degree d >= 1");
    }
    r.degree = d;
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace ldperm::privacy
