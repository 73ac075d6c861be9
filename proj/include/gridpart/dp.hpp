#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gridpart/grid.hpp"

namespace gridpart {

// TwoSided: |W_i - A| <= eps*A.  UpperOnly: W_i <= (1+eps)*A.
// Window: (1-lower_eps)*A <= W_i <= (1+eps)*A.
struct BalanceMode {
  enum class Kind { TwoSided, UpperOnly, Window };
  Kind kind = Kind::TwoSided;
  double eps = 0.0;
  double lower_eps = 0.0;

  static BalanceMode two_sided(double eps) { return {Kind::TwoSided, eps, eps}; }
  static BalanceMode upper_only(double eps) { return {Kind::UpperOnly, eps, 0.0}; }
  static BalanceMode window(double lower_eps, double upper_eps) {
    return {Kind::Window, upper_eps, lower_eps};
  }
};

struct DpResult {
  std::optional<Partition> partition;  // empty when infeasible
  std::int64_t cut = -1;
  // Part t (0-based) covers order positions [starts[t], starts[t+1]).
  std::vector<int> starts;
  // furthest_prefix[t]: longest prefix of the ordering that can be split
  // into t balanced parts (-1 if none). Entry 0 is always 0.
  std::vector<int> furthest_prefix;
  // Parts whose interval does not induce a connected subgraph.
  std::vector<int> disconnected_parts;

  bool feasible() const { return partition.has_value(); }
};

// Minimum-cut partition of g into k intervals of ord that satisfy the
// balance mode, with A = total weight / k. Throws if the total weight is
// zero, k is out of range or ord is not a permutation.
DpResult dynamic_partition(const GridGraph& g, const VertexOrdering& ord, int k, BalanceMode mode);

// Same optimum by enumerating all C(n-1, k-1) interval splits. Throws
// when that count exceeds 10^6.
DpResult brute_force_consistent(const GridGraph& g, const VertexOrdering& ord, int k,
                                BalanceMode mode);

// Edges between positions [0, begin) and [begin, end) of the ordering,
// accumulated by sweeping the window start from end-1 down to begin.
std::int64_t incremental_delta(const GridGraph& g, const VertexOrdering& ord, int begin, int end);

// True when positions [begin, end) of ord induce a connected subgraph.
bool interval_is_connected(const GridGraph& g, const VertexOrdering& ord, int begin, int end);

}  // namespace gridpart
