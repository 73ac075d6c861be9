#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gridpart {

// Raised on precondition violations and malformed input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Topology { Square, Hex };

std::string_view to_string(Topology t);
Topology parse_topology(std::string_view s);

struct Cell {
  int row = 0;
  int col = 0;
  auto operator<=>(const Cell&) const = default;
};

// Square or hexagonal grid with nonnegative vertex weights. Vertices are
// addressed by (row, col) externally and by row-major index internally.
// Every edge has unit cost.
//
// Hex grids use the "odd-q" layout: flat-topped cells, odd columns shifted
// down by half a cell. Interior cells have six neighbours.
class GridGraph {
 public:
  GridGraph(Topology topology, int rows, int cols, std::vector<double> weights);

  static GridGraph uniform(Topology topology, int rows, int cols, double weight = 1.0);

  Topology topology() const { return topology_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int num_vertices() const { return rows_ * cols_; }
  int num_edges() const { return num_edges_; }

  bool contains(Cell c) const {
    return c.row >= 0 && c.row < rows_ && c.col >= 0 && c.col < cols_;
  }
  int index(Cell c) const;
  Cell cell(int v) const { return {v / cols_, v % cols_}; }

  // Adjacent vertices in ascending index order.
  std::span<const int> neighbors(int v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  int degree(int v) const { return offsets_[v + 1] - offsets_[v]; }

  // Checked variant for external callers; throws on out-of-range cells.
  std::vector<Cell> neighbors(Cell c) const;

  double weight(int v) const { return weights_[v]; }
  std::span<const double> weights() const { return weights_; }
  double total_weight() const { return total_weight_; }

  // Sides of one cell: 4 for squares, 6 for hexagons.
  int sides() const { return topology_ == Topology::Square ? 4 : 6; }

  // Number of cell sides on the outer border of the grid.
  int boundary_length() const;

  // Cell center in the plane with unit spacing between adjacent centers.
  std::array<double, 2> center(int v) const;

  GridGraph with_weights(std::vector<double> weights) const;

 private:
  Topology topology_;
  int rows_;
  int cols_;
  int num_edges_ = 0;
  std::vector<double> weights_;
  double total_weight_ = 0.0;
  std::vector<int> offsets_;
  std::vector<int> adjacency_;
};

// Assignment of every vertex to one of k parts, with cached part weights,
// part sizes and cut size. Part ids are 0-based in memory; files and
// reports use 1-based ids.
class Partition {
 public:
  // Throws if an id is out of range, a part is empty, or the assignment
  // length does not match the graph.
  Partition(const GridGraph& g, std::vector<int> assignment, int k);

  int k() const { return k_; }
  int part_of(int v) const { return assignment_[v]; }
  std::span<const int> assignment() const { return assignment_; }
  std::span<const double> part_weights() const { return part_weights_; }
  std::span<const int> part_sizes() const { return part_sizes_; }
  std::int64_t cut_edges() const { return cut_edges_; }

  // Change in cut size if `vertices` (all in one part) moved to part `to`.
  std::int64_t cut_delta(const GridGraph& g, std::span<const int> vertices, int to) const;

  // Moves `vertices` to part `to`, updating caches incrementally.
  void move(const GridGraph& g, std::span<const int> vertices, int to);

  // Recomputes every cache from scratch and throws on mismatch.
  void check_consistency(const GridGraph& g) const;

  bool operator==(const Partition& o) const {
    return k_ == o.k_ && assignment_ == o.assignment_;
  }

 private:
  int k_;
  std::vector<int> assignment_;
  std::vector<double> part_weights_;
  std::vector<int> part_sizes_;
  std::int64_t cut_edges_ = 0;
};

// A permutation of the vertices, consumed by the dynamic program.
struct VertexOrdering {
  std::vector<int> order;
  int stripe_height = 0;

  // Throws unless `order` is a permutation of the vertices of g.
  void validate(const GridGraph& g) const;
  // position[v] = index of v in order.
  std::vector<int> positions() const;
};

struct BalanceReport {
  double average = 0.0;    // total weight / k
  double max_dev = 0.0;    // max_i |W_i - A| / A
  bool within = false;     // max_dev <= eps
};

// Exhaustive edge scan; assignment values are part ids.
std::int64_t cut_count(const GridGraph& g, std::span<const int> assignment);
std::int64_t cut_count(const GridGraph& g, const Partition& p);

// Cut edges of part i plus the grid-border sides of its cells.
std::int64_t perimeter_of_part(const GridGraph& g, const Partition& p, int part);
std::vector<std::int64_t> part_perimeters(const GridGraph& g, const Partition& p);

bool part_is_connected(const GridGraph& g, std::span<const int> assignment, int part);
std::vector<bool> is_contiguous(const GridGraph& g, const Partition& p);
bool all_contiguous(const GridGraph& g, const Partition& p);

BalanceReport balance_report(const GridGraph& g, const Partition& p, double eps);

// Snake striping order: stripes of height s from the top; within a stripe,
// columns are visited in turn and each column top to bottom. Even stripes
// run left to right, odd stripes right to left, so the walk enters each new
// stripe straight down the column where the previous one ended. The last
// stripe may be shorter.
VertexOrdering snake_ordering(const GridGraph& g, int stripe_height);

}  // namespace gridpart
