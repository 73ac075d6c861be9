#pragma once

#include <cstdint>
#include <vector>

#include "gridpart/grid.hpp"

namespace gridpart {

// Golden ratio; the striping stop window is [floor(a/phi), ceil(phi*a)].
inline constexpr double kPhi = 1.6180339887498948482;

// 2*ceil(2*sqrt(A)): least perimeter of an A-cell polyomino.
std::int64_t min_perimeter_square(std::int64_t cells);

// 2*ceil(sqrt(12A-3)): least perimeter of an A-cell polyhex.
std::int64_t min_perimeter_hex(std::int64_t cells);

// max(0, k*ceil(2*sqrt(A)) - 2(m+n)) with A = floor(mn/k): a lower bound on
// the interior cut of any balanced contiguous k-partition of an m x n grid.
std::int64_t cut_lower_bound(std::int64_t m, std::int64_t n, std::int64_t k);

// Integer ceil(sqrt(x)) and floor(sqrt(x)) for x >= 0.
std::int64_t isqrt_floor(std::int64_t x);
std::int64_t isqrt_ceil(std::int64_t x);

// A/h + h <= ceil(2*sqrt(A)) for a = floor(sqrt(A)), h in {a, a+1}.
// Throws for perfect squares or h outside {a, a+1}.
bool lemma_uniform_check(std::int64_t cells, std::int64_t h);

// Row layout chosen before any part is cut (requires n >= m).
struct StripePlan {
  std::int64_t part_size = 0;  // A = floor(mn/k)
  std::int64_t extras = 0;     // mn mod k parts receive A+1 cells
  int a = 0;                   // floor(sqrt(A))
  int d = 0;                   // m = d*a + r
  int r = 0;
  std::vector<int> strip_heights;  // S1 strips, top to bottom
  int s2_height = 0;               // 0 when S2 is empty
};

StripePlan stripe_plan(int m, int n, int k);

// Phi-cautious striping of the unweighted m x n grid into k contiguous parts
// of A or A+1 cells, exactly mn mod k of them with A+1. Inputs with m > n
// are solved transposed. The returned assignment is row-major over the
// m x n grid; pass any topology when wrapping it in a Partition.
std::vector<int> phi_cautious_striping(int m, int n, int k);

Partition phi_cautious_striping(const GridGraph& g, int k);

}  // namespace gridpart
