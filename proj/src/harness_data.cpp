#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ldperm/harness.hpp"
#include "ldperm/rng.hpp"
#include "ldperm/vec.hpp"

namespace ldperm::harness {

namespace {

std::vector<double> uniform_ball_point(SubstreamRng& rng, std::size_t p) {
  std::vector<double> x(p);
  double nrm = 0.0;
  do {
    for (double& v : x) v = rng.normal();
    nrm = norm2(x);
  } while (nrm == 0.0);
  const double radius = std::pow(rng.uniform_open(), 1.0 / static_cast<double>(p));
  for (double& v : x) v *= radius / nrm;
  return x;
}

std::vector<double> unit_direction(SubstreamRng& rng, std::size_t p) {
  std::vector<double> w(p);
  double nrm = 0.0;
  do {
    for (double& v : w) v = rng.normal();
    nrm = norm2(w);
  } while (nrm == 0.0);
  for (double& v : w) v /= nrm;
  return w;
}

}  // namespace

DataKind data_kind_by_name(const std::string& name) {
  if (name == "separable_svm") return DataKind::separable_svm;
  if (name == "logistic_planted") return DataKind::logistic_planted;
  if (name == "uniform_ball") return DataKind::uniform_ball;
  throw std::invalid_argument("unknown dataset kind: " + name);
}

Dataset generate_synthetic(DataKind kind, std::size_t n, std::size_t p,
                           double margin, std::uint64_t seed) {
  if (n == 0 || p == 0) {
    throw std::invalid_argument("generate_synthetic: need n >= 1 and p >= 1");
  }
  if (!(margin >= 0.0) || margin >= 0.5) {
    throw std::invalid_argument("generate_synthetic: margin must lie in [0, 0.5)");
  }

  SubstreamRng rng(seed, /*stream*/ 0xda7a);
  Dataset data;
  data.n = n;
  data.p = p;
  data.xs.reserve(n * p);
  data.ys.reserve(n);

  const std::vector<double> planted = unit_direction(rng, p);

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x;
    double y = 0.0;
    switch (kind) {
      case DataKind::separable_svm: {
        double t = 0.0;
        do {
          x = uniform_ball_point(rng, p);
          t = dot(planted, x);
        } while (std::abs(t) < margin);
        y = t >= 0.0 ? 1.0 : -1.0;
        break;
      }
      case DataKind::logistic_planted: {
        x = uniform_ball_point(rng, p);
        const double prob = 1.0 / (1.0 + std::exp(-dot(planted, x)));
        y = rng.uniform() < prob ? 1.0 : -1.0;
        break;
      }
      case DataKind::uniform_ball: {
        x = uniform_ball_point(rng, p);
        y = 2.0 * rng.uniform() - 1.0;
        break;
      }
    }
    data.xs.insert(data.xs.end(), x.begin(), x.end());
    data.ys.push_back(y);
  }

  char tag[96];
  const char* kind_name = kind == DataKind::separable_svm     ? "separable_svm"
                          : kind == DataKind::logistic_planted ? "logistic_planted"
                                                               : "uniform_ball";
  std::snprintf(tag, sizeof tag, "%s(margin=%g,seed=%llu)", kind_name, margin,
                static_cast<unsigned long long>(seed));
  data.provenance = tag;
  return data;
}

BaselineResult baseline_optimum(const losses::GenLinLoss& loss,
                                const Dataset& data, double tol,
                                int max_iters) {
  if (!(tol > 0.0)) throw std::invalid_argument("baseline_optimum: tol must be > 0");
  if (max_iters < 1) throw std::invalid_argument("baseline_optimum: no iterations");
  if (data.n == 0) throw std::invalid_argument("baseline_optimum: empty data");

  const std::size_t p = data.p;
  std::vector<double> w(p, 0.0);
  std::vector<double> avg_sum(p, 0.0);
  std::size_t avg_count = 0;

  BaselineResult best;
  best.w = w;
  best.value = eval_empirical_risk(loss, w, data);
  best.converged = false;

  constexpr int kWindow = 200;  // iterations per improvement check
  constexpr int kEvalStride = 10;
  double window_best = best.value;

  std::vector<double> grad(p);
  for (int t = 1; t <= max_iters; ++t) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < data.n; ++i) {
      const double y = data.ys[i];
      const double slope = loss.derivative(y * dot(w, data.row(i))) * y;
      axpy(slope / static_cast<double>(data.n), data.row(i), grad);
    }
    std::vector<double> next(w);
    axpy(-1.0 / std::sqrt(static_cast<double>(t)), grad, next);
    w = solver::project_ball(next, 1.0);

    axpy(1.0, w, avg_sum);
    ++avg_count;

    if (t % kEvalStride == 0) {
      const double vw = eval_empirical_risk(loss, w, data);
      if (vw < best.value) {
        best.value = vw;
        best.w = w;
      }
      const std::vector<double> avg = scaled(avg_sum, 1.0 / avg_count);
      const double va = eval_empirical_risk(loss, avg, data);
      if (va < best.value) {
        best.value = va;
        best.w = avg;
      }
    }
    if (t % kWindow == 0) {
      if (window_best - best.value < tol) {
        best.converged = true;
        break;
      }
      window_best = best.value;
    }
  }
  return best;
}

void write_dataset_csv(const Dataset& data, std::ostream& out) {
  char buf[64];
  for (std::size_t i = 0; i < data.n; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", data.ys[i]);
    out << buf;
    const auto row = data.row(i);
    for (double v : row) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out << buf;
    }
    out << '\n';
  }
}

Dataset load_dataset_csv(std::istream& in, const std::string& provenance) {
  Dataset data;
  data.provenance = provenance;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("dataset csv: bad cell '" + cell + "'");
      }
    }
    if (values.size() < 2) {
      throw std::runtime_error("dataset csv: row needs a label and features");
    }
    const std::size_t p = values.size() - 1;
    if (data.n == 0) {
      data.p = p;
    } else if (p != data.p) {
      throw std::runtime_error("dataset csv: inconsistent row width");
    }
    data.ys.push_back(values[0]);
    data.xs.insert(data.xs.end(), values.begin() + 1, values.end());
    ++data.n;
  }
  if (data.n == 0) throw std::runtime_error("dataset csv: no records");
  return data;
}

Dataset load_dataset_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  return load_dataset_csv(in, path);
}

}  // namespace ldperm::harness
