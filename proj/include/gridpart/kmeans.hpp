#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gridpart/grid.hpp"

namespace gridpart {

struct KMeansConfig {
  int k = 1;
  int max_iters = 100;
  int restarts = 1;
  std::uint64_t seed = 0;
};

struct KMeansResult {
  Partition partition;
  double objective = 0.0;  // sum_v w(v) * |pos(v) - center(v)|^2
  std::vector<std::array<double, 2>> centers;
  // Objective after each assignment step of the winning restart.
  std::vector<double> objective_trace;
};

// Weighted Lloyd iterations on cell centres with weighted k-means++
// seeding; the best of `restarts` runs by objective. Parts need not be
// contiguous or balanced. Throws if k is not in [1, |V|].
KMeansResult weighted_kmeans(const GridGraph& g, const KMeansConfig& cfg);

}  // namespace gridpart
