#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gridpart/grid.hpp"
#include "gridpart/rng.hpp"

namespace gridpart {

// Moves `vertices`, all currently in part `from`, to part `to`.
struct Move {
  std::vector<int> vertices;
  int from = 0;
  int to = 0;

  bool operator==(const Move&) const = default;
};

enum class Neighborhood { OneSwap, Combinatorial };

struct AnnealConfig {
  double temperature = 0.5;
  std::int64_t max_iters = 0;          // 0 selects 50 |V|
  std::int64_t no_improve_window = 0;  // 0 selects 5 |V|
  Neighborhood neighborhood = Neighborhood::Combinatorial;
  int max_run = 4;  // largest block moved by the combinatorial neighborhood
  double eps = 0.05;
  std::uint64_t seed = 0;
  double cooling = 1.0;  // temperature multiplier per iteration
  // Recheck contiguity, balance and cached metrics after every accepted move.
  bool validate_every_step = false;
};

struct TracePoint {
  std::int64_t iteration = 0;
  std::int64_t cut = 0;
};

struct AnnealResult {
  Partition best;
  std::int64_t initial_cut = 0;
  std::int64_t iterations = 0;
  std::int64_t accepted = 0;
  std::vector<TracePoint> trace;  // initial state, then every accepted move
};

// Single-vertex moves across part boundaries that keep both parts
// contiguous and within (1 +- eps) of the average weight. Sorted by
// vertex, then target part.
std::vector<Move> one_swap_candidates(const GridGraph& g, const Partition& p, double eps);

// Moves of a connected set of 1..max_run vertices of part i, each adjacent
// to part j, from i to j, with the same filters. Sorted by smallest
// vertex, then target part, then enumeration order.
std::vector<Move> combinatorial_candidates(const GridGraph& g, const Partition& p, double eps,
                                           int max_run);

// True when applying m keeps both parts contiguous and nonempty and their
// weights within (1 +- eps) of the average. Expects p to be contiguous.
bool move_is_valid(const GridGraph& g, const Partition& p, const Move& m, double eps);

// One move drawn uniformly from combinatorial_candidates(g, p, eps,
// max_run), or nothing when that list is empty.
std::optional<Move> draw_candidate(const GridGraph& g, const Partition& p, double eps, int max_run,
                                   Rng& rng);

// 1 if z_new < z_old, else exp(-(z_new - z_old) / T).
double acceptance_probability(double z_new, double z_old, double temperature);

// Metropolis search over the chosen neighborhood, drawing one candidate
// uniformly per iteration. Throws if p0 is not contiguous and balanced.
AnnealResult anneal(const GridGraph& g, const Partition& p0, const AnnealConfig& cfg);

}  // namespace gridpart
