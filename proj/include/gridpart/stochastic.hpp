#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridpart/distribution.hpp"
#include "gridpart/dp.hpp"
#include "gridpart/grid.hpp"

namespace gridpart {

// Cap on the transformed weight of every part.
inline constexpr double kStochasticPartCap = 18.0;
// With transformed weights in [0, 1], an infeasible cap-18 run implies a
// total transformed weight of at least (18 - 1) * k.
inline constexpr double kStochasticInfeasibleFloor = kStochasticPartCap - 1.0;

struct SplitDistribution {
  WeightDistribution normal;      // X * 1{X <= threshold}
  double exceptional_mean = 0.0;  // E[X * 1{X > threshold}]
  double threshold = 0.0;         // 2^i
};

// log_k E[k^X] for X supported in [0, 1]. Requires k >= 2.
double beta_transform(const WeightDistribution& d, int k);

SplitDistribution split_at(const WeightDistribution& d, int i);

// One halving step of the scan.
struct StochasticAttempt {
  int i = 0;
  double weight_sum = 0.0;       // sum of w_{v,i}
  double exceptional_sum = 0.0;  // sum of E[S_{v,i}] / 2^i
  double eps = 0.0;              // (18k - weight_sum) / weight_sum
  bool feasible = false;
  std::string reason;  // why this i was rejected; empty when accepted
};

struct StochasticResult {
  std::optional<Partition> partition;
  int i_star = -1;
  double eps_used = 0.0;
  std::int64_t cut = -1;
  std::vector<double> transformed;       // w_{v,i*}
  std::vector<double> part_transformed;  // per-part sums of w_{v,i*}
  std::vector<StochasticAttempt> attempts;

  bool feasible() const { return partition.has_value(); }
};

// Scans i = i_min..i_max and returns the first i whose exceptional sum is
// at most 1 and whose transformed instance admits an upper-balanced
// dynamic partition with per-part cap 18.
//
// With balance_eps set, every part's transformed weight must also lie in
// [(1 - balance_eps) A_w, (1 + min(balance_eps, eps_i)) A_w]; the cap of
// 18 still holds.
StochasticResult stochastic_partition(const GridGraph& g, std::span<const WeightDistribution> dists,
                                      const VertexOrdering& ord, int k, int i_min = 0, int i_max = 13,
                                      std::optional<double> balance_eps = std::nullopt);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
  int samples = 0;
};

struct VarianceCheck {
  MonteCarloEstimate lhs;  // (1/k) E[sum_i (W_i - A)^2]
  double lhs_exact = 0.0;  // (1/k) sum_i [Var W_i + (E W_i - A)^2]
  double bound = 0.0;      // (4 eps + eps^2) A^2 + c A
  double average = 0.0;    // A = (1/k) sum_v mean(X_v)
};

// Throws if some X_v has variance above c * mean or some part's expected
// weight is farther than eps * A from A.
VarianceCheck variance_bound_check(const GridGraph& g, std::span<const WeightDistribution> dists,
                                   const Partition& p, double eps, double c, int samples,
                                   std::uint64_t seed);

// E[max_i W_i] with independent X_v.
MonteCarloEstimate expected_max_estimate(const GridGraph& g, std::span<const WeightDistribution> dists,
                                         const Partition& p, int samples, std::uint64_t seed);

}  // namespace gridpart
