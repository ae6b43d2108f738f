#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ldperm/harness.hpp"
#include "ldperm/rng.hpp"
#include "ldperm/smoothing.hpp"
#include "ldperm/vec.hpp"

namespace ldperm::harness {

namespace {

// Substream tags for the per-seed randomness partition.
constexpr std::uint64_t kTagPlayer = 1;
constexpr std::uint64_t kTagSolver = 2;
constexpr std::uint64_t kTagPilot = 3;
constexpr std::uint64_t kTagQDraws = 4;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct DatasetSpec {
  bool is_file = false;
  std::string path;
  DataKind kind = DataKind::separable_svm;
  double margin = 0.0;
};

DatasetSpec parse_dataset_spec(const std::string& spec) {
  DatasetSpec out;
  if (ends_with(spec, ".csv")) {
    out.is_file = true;
    out.path = spec;
    return out;
  }
  std::string kind = spec;
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    kind = spec.substr(0, colon);
    out.margin = std::stod(spec.substr(colon + 1));
  }
  out.kind = data_kind_by_name(kind);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::vector<std::string> errors;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) +
                       ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "loss") {
        cfg.loss = value;
      } else if (key == "n") {
        cfg.n = std::stoull(value);
      } else if (key == "p") {
        cfg.p = std::stoull(value);
      } else if (key == "epsilon") {
        cfg.epsilon = std::stod(value);
      } else if (key == "delta") {
        cfg.delta = std::stod(value);
      } else if (key == "degree") {
        cfg.degree = std::stoi(value);
      } else if (key == "alpha") {
        cfg.alpha = std::stod(value);
      } else if (key == "mode") {
        if (value == "zero_noise") {
          cfg.mode = NoiseMode::zero_noise;
        } else if (value == "paper" || value == "paper_faithful") {
          cfg.mode = NoiseMode::paper_faithful;
        } else if (value == "calibrated") {
          cfg.mode = NoiseMode::calibrated;
        } else {
          errors.push_back("mode: unknown value '" + value + "'");
        }
      } else if (key == "seeds") {
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
          item = trim(item);
          if (!item.empty()) cfg.seeds.push_back(std::stoull(item));
        }
      } else if (key == "dataset") {
        cfg.dataset = value;
      } else if (key == "out_dir") {
        cfg.out_dir = value;
      } else if (key == "algorithm") {
        if (value == "auto") {
          cfg.algorithm = Algorithm::automatic;
        } else if (value == "hinge") {
          cfg.algorithm = Algorithm::hinge;
        } else if (value == "genlin") {
          cfg.algorithm = Algorithm::genlin;
        } else if (value == "plus_reduction") {
          cfg.algorithm = Algorithm::plus_reduction;
        } else {
          errors.push_back("algorithm: unknown value '" + value + "'");
        }
      } else if (key == "iterations") {
        cfg.iterations = std::stoi(value);
      } else {
        errors.push_back("unknown key '" + key + "'");
      }
    } catch (const std::exception&) {
      errors.push_back(key + ": cannot parse value '" + value + "'");
    }
  }
  if (!errors.empty()) {
    std::string msg = "config parse failed:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw std::invalid_argument(msg);
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(in);
}

void validate_config(const ExperimentConfig& cfg) {
  std::vector<std::string> errors;

  try {
    losses::loss_by_name(cfg.loss);
  } catch (const std::exception&) {
    errors.push_back("loss: unknown name '" + cfg.loss + "'");
  }

  DatasetSpec spec;
  bool spec_ok = true;
  try {
    spec = parse_dataset_spec(cfg.dataset);
  } catch (const std::exception&) {
    spec_ok = false;
    errors.push_back("dataset: cannot parse '" + cfg.dataset + "'");
  }
  if (spec_ok && !spec.is_file) {
    if (cfg.n == 0) errors.push_back("n: must be >= 1 for synthetic data");
    if (cfg.p == 0) errors.push_back("p: must be >= 1 for synthetic data");
    if (!(spec.margin >= 0.0) || spec.margin >= 0.5) {
      errors.push_back("dataset: margin must lie in [0, 0.5)");
    }
  }

  if (cfg.mode == NoiseMode::zero_noise) {
    if (cfg.epsilon || cfg.delta) {
      errors.push_back(
          "mode: zero_noise is test-only and rejects a privacy budget "
          "(drop epsilon/delta or pick paper/calibrated)");
    }
  } else {
    if (!cfg.epsilon) {
      errors.push_back("epsilon: required unless mode = zero_noise");
    } else if (!(*cfg.epsilon > 0.0)) {
      errors.push_back("epsilon: must be positive");
    }
    if (!cfg.delta) {
      errors.push_back("delta: required unless mode = zero_noise");
    } else if (!(*cfg.delta > 0.0) || *cfg.delta >= 1.0) {
      errors.push_back("delta: must lie in (0, 1)");
    }
  }

  if (!cfg.degree && !cfg.alpha) {
    errors.push_back("degree/alpha: set at least one");
  }
  if (cfg.degree && *cfg.degree < 1) errors.push_back("degree: must be >= 1");
  if (cfg.alpha && !(*cfg.alpha > 0.0)) errors.push_back("alpha: must be positive");

  if (cfg.seeds.empty()) errors.push_back("seeds: need at least one seed");
  if (cfg.iterations && *cfg.iterations < 1) {
    errors.push_back("iterations: must be >= 1");
  }
  if (cfg.algorithm == Algorithm::plus_reduction && cfg.loss != "abs") {
    errors.push_back("algorithm: plus_reduction applies only to loss = abs");
  }
  if (cfg.algorithm == Algorithm::hinge && cfg.loss != "hinge") {
    errors.push_back("algorithm: hinge reconstruction applies only to loss = hinge");
  }

  if (!errors.empty()) {
    std::string msg = "invalid experiment config:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw std::invalid_argument(msg);
  }
}

ResolvedApprox resolve_approx(const ExperimentConfig& cfg) {
  ResolvedApprox r;
  if (cfg.alpha) {
    r.alpha = *cfg.alpha;
    r.beta = r.alpha / 4.0;
    r.degree = cfg.degree
                   ? *cfg.degree
                   : static_cast<int>(std::ceil(32.0 / std::pow(r.alpha, 3)));
  } else {
    r.degree = *cfg.degree;
    r.beta = std::pow(2.0 * r.degree, -1.0 / 3.0);
    r.alpha = 4.0 * r.beta;
  }
  return r;
}

bool NoninteractiveAudit::each_player_once(std::size_t n) const {
  if (randomize_order.size() != n) return false;
  std::vector<char> seen(n, 0);
  for (int id : randomize_order) {
    if (id < 0 || static_cast<std::size_t>(id) >= n || seen[id]) return false;
    seen[id] = 1;
  }
  return true;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);

  ExperimentResult result;
  result.config = cfg;
  result.approx = resolve_approx(cfg);

  const losses::GenLinLoss loss = losses::loss_by_name(cfg.loss);
  const DatasetSpec spec = parse_dataset_spec(cfg.dataset);

  Algorithm algo = cfg.algorithm;
  if (algo == Algorithm::automatic) {
    algo = cfg.loss == "hinge" ? Algorithm::hinge : Algorithm::genlin;
  }

  // Derivative polynomial: the hinge reconstruction consumes the smoothed
  // hinge derivative; every mixture path consumes the smoothed plus
  // derivative.  The plus reduction folds |t| = 2 max(0,t) - t into the
  // coefficients (2c - 1), doubling the approximation error bound.
  approx::SmoothingParams sp;
  sp.beta = result.approx.beta;
  sp.alpha = result.approx.alpha;
  sp.degree_override = result.approx.degree;
  const approx::DerivativeKind kind = algo == Algorithm::hinge
                                          ? approx::DerivativeKind::hinge
                                          : approx::DerivativeKind::plus;
  approx::DerivativePoly dp = approx::build_derivative_poly(kind, sp);
  const int d = dp.poly.degree();

  double sup_error = dp.sup_error;
  approx::BernsteinPoly poly = dp.poly;
  if (algo == Algorithm::plus_reduction) {
    std::vector<double> coeffs = poly.coeffs();
    for (double& c : coeffs) c = 2.0 * c - 1.0;
    poly = approx::BernsteinPoly(std::move(coeffs), poly.domain());
    sup_error *= 2.0;
  }

  privacy::NoisePlan plan = privacy::zero_noise_plan();
  if (cfg.mode != NoiseMode::zero_noise) {
    privacy::PrivacyBudget budget;
    budget.epsilon = *cfg.epsilon;
    budget.delta = *cfg.delta;
    budget.mode = cfg.mode == NoiseMode::paper_faithful
                      ? privacy::AccountingMode::paper_faithful
                      : privacy::AccountingMode::calibrated;
    plan = privacy::plan_noise(budget, d);
  }
  result.plan = plan;

  for (std::uint64_t seed : cfg.seeds) {
    const auto t0 = std::chrono::steady_clock::now();

    Dataset data = spec.is_file
                       ? load_dataset_csv_file(spec.path)
                       : generate_synthetic(spec.kind, cfg.n, cfg.p, spec.margin,
                                            seed);
    const std::size_t n = data.n;
    const std::size_t p = data.p;

    // Normalization pass; risk and baseline are scored on the same clipped
    // records the players randomize.
    for (std::size_t i = 0; i < n; ++i) {
      auto [xc, yc] = privacy::clip_record(data.row(i), data.ys[i]);
      std::copy(xc.begin(), xc.end(), data.xs.begin() + i * p);
      data.ys[i] = yc;
    }

    // Local randomization pass: each record is read exactly once, before any
    // solver step; the server below only ever touches the reports.
    NoninteractiveAudit audit;
    audit.randomize_order.reserve(n);
    std::vector<privacy::PlayerReport> reports;
    reports.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      SubstreamRng stream(seed, kTagPlayer, i);
      reports.push_back(privacy::randomize_player(data.row(i), data.ys[i], plan,
                                                  d, stream,
                                                  static_cast<int>(i)));
      audit.randomize_order.push_back(static_cast<int>(i));
    }
    audit.randomized_before_solver = true;

    // Server-side gradient source over the stored reports.
    SubstreamRng qdraws(seed, kTagQDraws);
    const std::size_t copies = static_cast<std::size_t>(d) * (d + 1);
    auto gradient_at = [&](std::span<const double> w,
                           int player) -> std::vector<double> {
      if (algo == Algorithm::genlin) {
        std::vector<losses::QSample> s(copies);
        for (auto& q : s) q = losses::sample_q(loss, qdraws.uniform());
        return oracle::genlin_gradient(w, reports[player], poly, loss, s)
            .gradient;
      }
      return oracle::hinge_gradient(w, reports[player], poly).gradient;
    };

    // Pilot certification at the start iterate (w = 0).
    SubstreamRng pilot(seed, kTagPilot);
    const std::vector<double> origin(p, 0.0);
    auto pilot_draw = [&]() {
      const int player = static_cast<int>(pilot.uniform_index(n));
      return gradient_at(origin, player);
    };
    const oracle::Certificate cert =
        oracle::certify(sup_error, result.approx.beta, pilot_draw);

    solver::SolverConfig sc;
    sc.iterations = cfg.iterations ? *cfg.iterations : static_cast<int>(n);
    sc.radius = 1.0;
    sc.step_rule = solver::StepRule::inv_sqrt;
    sc.step_scale = 1.0;
    sc.averaging = solver::Averaging::uniform_tail;
    sc.seed = stream_key(seed, kTagSolver);
    solver::SigmResult run = solver::run_sigm(
        gradient_at, static_cast<int>(n), static_cast<int>(p),
        cert.sigma_bound, sc);

    const BaselineResult baseline = baseline_optimum(loss, data, 1e-5);
    const double risk = eval_empirical_risk(loss, run.w_out, data);

    const auto t1 = std::chrono::steady_clock::now();

    SeedOutcome outcome;
    outcome.seed = seed;
    outcome.n = n;
    outcome.p = p;
    outcome.excess_risk = risk - baseline.value;
    outcome.baseline_value = baseline.value;
    outcome.wall_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    outcome.w_out = run.w_out;
    outcome.certificate = cert;
    outcome.baseline_converged = baseline.converged;
    result.outcomes.push_back(std::move(outcome));
    result.audits.push_back(std::move(audit));
  }

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream out(std::filesystem::path(cfg.out_dir) / "results.csv");
    write_results_csv(result, out);
  }
  return result;
}

void write_results_csv(const ExperimentResult& result, std::ostream& out) {
  out << "loss,epsilon,delta,degree,n,p,seed,excess_risk,baseline_value,"
         "wall_ms\n";
  const ExperimentConfig& cfg = result.config;
  const double eps = cfg.epsilon.value_or(0.0);
  const double delta = cfg.delta.value_or(0.0);
  char buf[256];
  for (const SeedOutcome& o : result.outcomes) {
    std::snprintf(buf, sizeof buf,
                  "%s,%.12g,%.12g,%d,%llu,%llu,%llu,%.12g,%.12g,%lld\n",
                  cfg.loss.c_str(), eps, delta, result.approx.degree,
                  static_cast<unsigned long long>(o.n),
                  static_cast<unsigned long long>(o.p),
                  static_cast<unsigned long long>(o.seed), o.excess_risk,
                  o.baseline_value, static_cast<long long>(o.wall_ms));
    out << buf;
  }
}

}  // namespace ldperm::harness
