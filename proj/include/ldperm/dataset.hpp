#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ldperm {

// Feature rows in the unit ball, labels in [-1, 1], row-major storage.
struct Dataset {
  std::size_t n = 0;
  std::size_t p = 0;
  std::vector<double> xs;  // n * p, row-major
  std::vector<double> ys;  // n
  std::string provenance;  // generator name + seed, or source path

  std::span<const double> row(std::size_t i) const {
    return {xs.data() + i * p, p};
  }
};

}  // namespace ldperm
