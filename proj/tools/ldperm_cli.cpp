// Command-line front end: generate datasets, randomize them into reports,
// compute baselines, run experiments, and inspect approximation quality.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "ldperm/harness.hpp"
#include "ldperm/rng.hpp"
#include "ldperm/smoothing.hpp"

namespace {

using namespace ldperm;

int cmd_generate(const std::string& kind, std::size_t n, std::size_t p,
                 double margin, std::uint64_t seed, const std::string& out) {
  const Dataset data = harness::generate_synthetic(
      harness::data_kind_by_name(kind), n, p, margin, seed);
  std::ofstream os(out);
  if (!os) {
    std::cerr << "cannot open output file: " << out << "\n";
    return 1;
  }
  harness::write_dataset_csv(data, os);
  std::cout << "wrote " << data.n << " records (" << data.provenance << ") to "
            << out << "\n";
  return 0;
}

int cmd_randomize(const std::string& input, double epsilon, double delta,
                  int degree, const std::string& mode, std::uint64_t seed,
                  const std::string& out) {
  Dataset data = harness::load_dataset_csv_file(input);
  privacy::PrivacyBudget budget;
  budget.epsilon = epsilon;
  budget.delta = delta;
  budget.mode = mode == "paper" ? privacy::AccountingMode::paper_faithful
                                : privacy::AccountingMode::calibrated;
  const privacy::NoisePlan plan = privacy::plan_noise(budget, degree);
  if (plan.per_release_warning) {
    std::cerr << "warning: some single release spends epsilon >= 1\n";
  }

  std::vector<privacy::PlayerReport> reports;
  reports.reserve(data.n);
  for (std::size_t i = 0; i < data.n; ++i) {
    auto [xc, yc] = privacy::clip_record(data.row(i), data.ys[i]);
    SubstreamRng stream(seed, /*tag*/ 1, i);
    reports.push_back(privacy::randomize_player(xc, yc, plan, degree, stream,
                                                static_cast<int>(i)));
  }
  std::ofstream os(out);
  if (!os) {
    std::cerr << "cannot open output file: " << out << "\n";
    return 1;
  }
  privacy::write_reports_jsonl(reports, os);
  std::printf("wrote %zu reports; composed budget (%.6g, %.6g)\n", reports.size(),
              plan.composed_epsilon, plan.composed_delta);
  return 0;
}

int cmd_baseline(const std::string& input, const std::string& loss_name,
                 double tol, int max_iters) {
  const Dataset data = harness::load_dataset_csv_file(input);
  const losses::GenLinLoss loss = losses::loss_by_name(loss_name);
  const harness::BaselineResult base =
      harness::baseline_optimum(loss, data, tol, max_iters);
  std::printf("baseline_value %.12g\n", base.value);
  std::printf("converged %d\n", base.converged ? 1 : 0);
  if (!base.converged) {
    std::cerr << "warning: iteration ceiling reached before tolerance\n";
  }
  return 0;
}

int cmd_train(const std::string& config_path, bool theory) {
  harness::ExperimentConfig cfg = harness::parse_config_file(config_path);
  if (theory) {
    if (!cfg.alpha) {
      std::cerr << "--theory requires an alpha key in the config\n";
      return 1;
    }
    cfg.degree.reset();  // degree follows from alpha
  }
  const harness::ExperimentResult result = harness::run_experiment(cfg);
  const auto& ap = result.approx;
  std::fprintf(stderr, "degree %d, beta %.6g, implied sup error see approx-check\n",
               ap.degree, ap.beta);
  if (result.plan.per_release_warning) {
    std::cerr << "warning: some single release spends epsilon >= 1\n";
  }
  harness::write_results_csv(result, std::cout);
  return 0;
}

int cmd_approx_check(const std::string& kind, double beta, int degree,
                     double grid_step) {
  approx::SmoothingParams params;
  params.beta = beta;
  params.degree_override = degree;
  const approx::DerivativeKind dk = kind == "hinge"
                                        ? approx::DerivativeKind::hinge
                                        : approx::DerivativeKind::plus;
  const approx::DerivativePoly dp =
      approx::build_derivative_poly(dk, params, std::max(degree, 1024), grid_step);
  std::printf("%s,%.12g,%d,%.12g,%.12g\n", kind.c_str(), beta, degree,
              dp.sup_error, dp.mean_error);
  return 0;
}

int cmd_report(const std::string& input) {
  std::ifstream in(input);
  if (!in) {
    std::cerr << "cannot open results file: " << input << "\n";
    return 1;
  }
  std::string line;
  if (!std::getline(in, line)) {
    std::cerr << "empty results file\n";
    return 1;
  }
  // Group rows by (loss, epsilon, degree, n) and report the median excess risk.
  std::map<std::string, std::vector<double>> groups;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() < 10) continue;
    const std::string key =
        cells[0] + " eps=" + cells[1] + " d=" + cells[3] + " n=" + cells[4];
    groups[key].push_back(std::stod(cells[7]));
  }
  std::printf("%-48s %8s %14s\n", "group", "runs", "median_excess");
  for (auto& [key, values] : groups) {
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size();
    const double median = m % 2 == 1
                              ? values[m / 2]
                              : 0.5 * (values[m / 2 - 1] + values[m / 2]);
    std::printf("%-48s %8zu %14.6g\n", key.c_str(), m, median);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally private ERM for generalized linear losses"};
  app.require_subcommand(1);

  std::string kind = "separable_svm", input, out, loss_name = "hinge";
  std::string mode = "calibrated", config_path;
  std::size_t n = 1000, p = 5;
  double margin = 0.0, epsilon = 1.0, delta = 1e-5, tol = 1e-5;
  double beta = 0.25, grid_step = 1e-3;
  int degree = 2, max_iters = 5000;
  std::uint64_t seed = 0;
  bool theory = false;

  auto* gen = app.add_subcommand("generate", "synthesize a dataset CSV");
  gen->add_option("--kind", kind, "separable_svm | logistic_planted | uniform_ball");
  gen->add_option("--n", n, "record count")->required();
  gen->add_option("--p", p, "dimension")->required();
  gen->add_option("--margin", margin, "separation margin, [0, 0.5)");
  gen->add_option("--seed", seed, "master seed");
  gen->add_option("--out", out, "output CSV path")->required();

  auto* rnd = app.add_subcommand("randomize", "turn a dataset into player reports");
  rnd->add_option("--input", input, "dataset CSV")->required();
  rnd->add_option("--epsilon", epsilon, "privacy budget epsilon")->required();
  rnd->add_option("--delta", delta, "privacy budget delta")->required();
  rnd->add_option("--degree", degree, "polynomial degree")->required();
  rnd->add_option("--mode", mode, "paper | calibrated");
  rnd->add_option("--seed", seed, "master seed");
  rnd->add_option("--out", out, "output JSONL path")->required();

  auto* base = app.add_subcommand("baseline", "nonprivate reference optimum");
  base->add_option("--input", input, "dataset CSV")->required();
  base->add_option("--loss", loss_name, "hinge | plus | abs | logistic");
  base->add_option("--tol", tol, "stopping tolerance");
  base->add_option("--max-iters", max_iters, "iteration ceiling");

  auto* train = app.add_subcommand("train", "run the full private pipeline");
  train->add_option("--config", config_path, "flat key=value config file")
      ->required();
  train->add_flag("--theory", theory, "derive the degree from alpha");

  auto* ac = app.add_subcommand("approx-check", "derivative approximation error");
  ac->add_option("--kind", kind, "hinge | plus")->required();
  ac->add_option("--beta", beta, "smoothing width")->required();
  ac->add_option("--degree", degree, "polynomial degree")->required();
  ac->add_option("--grid-step", grid_step, "measurement grid step");

  auto* rep = app.add_subcommand("report", "summarize a results CSV");
  rep->add_option("--input", input, "results CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate(kind, n, p, margin, seed, out);
    if (rnd->parsed())
      return cmd_randomize(input, epsilon, delta, degree, mode, seed, out);
    if (base->parsed()) return cmd_baseline(input, loss_name, tol, max_iters);
    if (train->parsed()) return cmd_train(config_path, theory);
    if (ac->parsed()) return cmd_approx_check(kind, beta, degree, grid_step);
    if (rep->parsed()) return cmd_report(input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
