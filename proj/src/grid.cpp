#include "gridpart/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gridpart {

std::string_view to_string(Topology t) { return t == Topology::Square ? "square" : "hex"; }

Topology parse_topology(std::string_view s) {
  if (s == "square") return Topology::Square;
  if (s == "hex") return Topology::Hex;
  throw Error("unknown topology '" + std::string(s) + "' (expected square or hex)");
}

namespace {

void raw_neighbors(Topology t, int rows, int cols, Cell c, std::vector<int>& out) {
  out.clear();
  auto push = [&](int r, int q) {
    if (r >= 0 && r < rows && q >= 0 && q < cols) out.push_back(r * cols + q);
  };
  push(c.row - 1, c.col);
  push(c.row + 1, c.col);
  if (t == Topology::Square) {
    push(c.row, c.col - 1);
    push(c.row, c.col + 1);
  } else if (c.col % 2 == 0) {
    push(c.row - 1, c.col - 1);
    push(c.row, c.col - 1);
    push(c.row - 1, c.col + 1);
    push(c.row, c.col + 1);
  } else {
    push(c.row, c.col - 1);
    push(c.row + 1, c.col - 1);
    push(c.row, c.col + 1);
    push(c.row + 1, c.col + 1);
  }
  std::sort(out.begin(), out.end());
}

}  // namespace

GridGraph::GridGraph(Topology topology, int rows, int cols, std::vector<double> weights)
    : topology_(topology), rows_(rows), cols_(cols), weights_(std::move(weights)) {
  if (rows < 1 || cols < 1) throw Error("grid dimensions must be positive");
  const int n = rows * cols;
  if (static_cast<int>(weights_.size()) != n) {
    throw Error("expected " + std::to_string(n) + " weights, got " +
                std::to_string(weights_.size()));
  }
  for (int v = 0; v < n; ++v) {
    if (!std::isfinite(weights_[v]) || weights_[v] < 0.0) {
      throw Error("weight of vertex " + std::to_string(v) + " is negative or not finite");
    }
  }
  total_weight_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);

  offsets_.assign(n + 1, 0);
  std::vector<int> scratch;
  for (int v = 0; v < n; ++v) {
    raw_neighbors(topology_, rows_, cols_, cell(v), scratch);
    offsets_[v + 1] = offsets_[v] + static_cast<int>(scratch.size());
    adjacency_.insert(adjacency_.end(), scratch.begin(), scratch.end());
  }
  num_edges_ = static_cast<int>(adjacency_.size() / 2);
}

GridGraph GridGraph::uniform(Topology topology, int rows, int cols, double weight) {
  if (rows < 1 || cols < 1) throw Error("grid dimensions must be positive");
  return GridGraph(topology, rows, cols,
                   std::vector<double>(static_cast<std::size_t>(rows) * cols, weight));
}

int GridGraph::index(Cell c) const {
  if (!contains(c)) {
    std::ostringstream os;
    os << "cell (" << c.row << "," << c.col << ") outside " << rows_ << "x" << cols_ << " grid";
    throw Error(os.str());
  }
  return c.row * cols_ + c.col;
}

std::vector<Cell> GridGraph::neighbors(Cell c) const {
  const int v = index(c);
  std::vector<Cell> out;
  for (int u : neighbors(v)) out.push_back(cell(u));
  return out;
}

int GridGraph::boundary_length() const {
  int total = 0;
  for (int v = 0; v < num_vertices(); ++v) total += sides() - degree(v);
  return total;
}

std::array<double, 2> GridGraph::center(int v) const {
  const Cell c = cell(v);
  if (topology_ == Topology::Square) return {double(c.col), double(c.row)};
  return {c.col * (std::sqrt(3.0) / 2.0), c.row + 0.5 * (c.col & 1)};
}

GridGraph GridGraph::with_weights(std::vector<double> weights) const {
  return GridGraph(topology_, rows_, cols_, std::move(weights));
}

// ---------------------------------------------------------------------------

Partition::Partition(const GridGraph& g, std::vector<int> assignment, int k)
    : k_(k), assignment_(std::move(assignment)) {
  if (k < 1) throw Error("number of parts must be positive");
  if (static_cast<int>(assignment_.size()) != g.num_vertices()) {
    throw Error("assignment covers " + std::to_string(assignment_.size()) +
                " vertices, graph has " + std::to_string(g.num_vertices()));
  }
  part_weights_.assign(k, 0.0);
  part_sizes_.assign(k, 0);
  for (int v = 0; v < g.num_vertices(); ++v) {
    const int id = assignment_[v];
    if (id < 0 || id >= k) {
      throw Error("vertex " + std::to_string(v) + " has part id " + std::to_string(id) +
                  " outside [0," + std::to_string(k) + ")");
    }
    part_weights_[id] += g.weight(v);
    ++part_sizes_[id];
  }
  for (int i = 0; i < k; ++i) {
    if (part_sizes_[i] == 0) throw Error("part " + std::to_string(i + 1) + " is empty");
  }
  cut_edges_ = cut_count(g, assignment_);
}

std::int64_t Partition::cut_delta(const GridGraph& g, std::span<const int> vertices,
                                  int to) const {
  if (vertices.empty()) return 0;
  const int from = assignment_[vertices.front()];
  auto moving = [&](int u) {
    return std::find(vertices.begin(), vertices.end(), u) != vertices.end();
  };
  std::int64_t delta = 0;
  for (int v : vertices) {
    for (int u : g.neighbors(v)) {
      if (moving(u)) continue;
      const int pu = assignment_[u];
      delta += (pu != to) - (pu != from);
    }
  }
  return delta;
}

void Partition::move(const GridGraph& g, std::span<const int> vertices, int to) {
  if (vertices.empty()) return;
  if (to < 0 || to >= k_) throw Error("target part out of range");
  const int from = assignment_[vertices.front()];
  for (int v : vertices) {
    if (assignment_[v] != from) throw Error("moved vertices must share one part");
  }
  if (from == to) return;
  if (part_sizes_[from] <= static_cast<int>(vertices.size())) {
    throw Error("move would empty part " + std::to_string(from + 1));
  }
  cut_edges_ += cut_delta(g, vertices, to);
  for (int v : vertices) {
    assignment_[v] = to;
    part_weights_[from] -= g.weight(v);
    part_weights_[to] += g.weight(v);
  }
  part_sizes_[from] -= static_cast<int>(vertices.size());
  part_sizes_[to] += static_cast<int>(vertices.size());
}

void Partition::check_consistency(const GridGraph& g) const {
  const Partition fresh(g, assignment_, k_);
  if (fresh.cut_edges_ != cut_edges_) {
    throw Error("cached cut " + std::to_string(cut_edges_) + " != recomputed " +
                std::to_string(fresh.cut_edges_));
  }
  for (int i = 0; i < k_; ++i) {
    const double tol = 1e-9 * std::max(1.0, std::abs(fresh.part_weights_[i]));
    if (std::abs(fresh.part_weights_[i] - part_weights_[i]) > tol ||
        fresh.part_sizes_[i] != part_sizes_[i]) {
      throw Error("cached weight or size of part " + std::to_string(i + 1) + " is stale");
    }
  }
}

// ---------------------------------------------------------------------------

void VertexOrdering::validate(const GridGraph& g) const {
  const int n = g.num_vertices();
  if (static_cast<int>(order.size()) != n) throw Error("ordering does not cover every vertex");
  std::vector<char> seen(n, 0);
  for (int v : order) {
    if (v < 0 || v >= n || seen[v]) throw Error("ordering is not a permutation");
    seen[v] = 1;
  }
}

std::vector<int> VertexOrdering::positions() const {
  std::vector<int> pos(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
  return pos;
}

std::int64_t cut_count(const GridGraph& g, std::span<const int> assignment) {
  std::int64_t cut = 0;
  for (int v = 0; v < g.num_vertices(); ++v) {
    for (int u : g.neighbors(v)) {
      if (u > v && assignment[u] != assignment[v]) ++cut;
    }
  }
  return cut;
}

std::int64_t cut_count(const GridGraph& g, const Partition& p) {
  return cut_count(g, p.assignment());
}

std::int64_t perimeter_of_part(const GridGraph& g, const Partition& p, int part) {
  if (part < 0 || part >= p.k()) throw Error("part id out of range");
  if (p.part_sizes()[part] == 0) throw Error("part " + std::to_string(part + 1) + " is empty");
  std::int64_t perimeter = 0;
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (p.part_of(v) != part) continue;
    perimeter += g.sides() - g.degree(v);
    for (int u : g.neighbors(v)) perimeter += p.part_of(u) != part;
  }
  return perimeter;
}

std::vector<std::int64_t> part_perimeters(const GridGraph& g, const Partition& p) {
  std::vector<std::int64_t> out(p.k(), 0);
  for (int v = 0; v < g.num_vertices(); ++v) {
    const int part = p.part_of(v);
    out[part] += g.sides() - g.degree(v);
    for (int u : g.neighbors(v)) out[part] += p.part_of(u) != part;
  }
  return out;
}

bool part_is_connected(const GridGraph& g, std::span<const int> assignment, int part) {
  int start = -1;
  int size = 0;
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (assignment[v] == part) {
      if (start < 0) start = v;
      ++size;
    }
  }
  if (start < 0) return false;
  std::vector<char> seen(g.num_vertices(), 0);
  std::vector<int> stack{start};
  seen[start] = 1;
  int reached = 0;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    ++reached;
    for (int u : g.neighbors(v)) {
      if (!seen[u] && assignment[u] == part) {
        seen[u] = 1;
        stack.push_back(u);
      }
    }
  }
  return reached == size;
}

std::vector<bool> is_contiguous(const GridGraph& g, const Partition& p) {
  // Label components of the "same part" subgraph once, then count per part.
  const int n = g.num_vertices();
  std::vector<int> component(n, -1);
  std::vector<int> components_per_part(p.k(), 0);
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (component[s] >= 0) continue;
    const int part = p.part_of(s);
    ++components_per_part[part];
    component[s] = s;
    stack.assign(1, s);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int u : g.neighbors(v)) {
        if (component[u] < 0 && p.part_of(u) == part) {
          component[u] = s;
          stack.push_back(u);
        }
      }
    }
  }
  std::vector<bool> out(p.k());
  for (int i = 0; i < p.k(); ++i) out[i] = components_per_part[i] == 1;
  return out;
}

bool all_contiguous(const GridGraph& g, const Partition& p) {
  const auto flags = is_contiguous(g, p);
  return std::all_of(flags.begin(), flags.end(), [](bool b) { return b; });
}

BalanceReport balance_report(const GridGraph& g, const Partition& p, double eps) {
  if (eps < 0.0) throw Error("balance parameter must be nonnegative");
  BalanceReport r;
  r.average = g.total_weight() / p.k();
  if (!(r.average > 0.0)) throw Error("average part weight is zero (degenerate instance)");
  for (double w : p.part_weights()) {
    r.max_dev = std::max(r.max_dev, std::abs(w - r.average) / r.average);
  }
  r.within = r.max_dev <= eps * (1.0 + 1e-12) + 1e-12;
  return r;
}

VertexOrdering snake_ordering(const GridGraph& g, int stripe_height) {
  if (stripe_height < 1 || stripe_height > g.rows()) {
    throw Error("stripe height " + std::to_string(stripe_height) + " outside [1," +
                std::to_string(g.rows()) + "]");
  }
  VertexOrdering ord;
  ord.stripe_height = stripe_height;
  ord.order.reserve(g.num_vertices());
  int stripe = 0;
  for (int top = 0; top < g.rows(); top += stripe_height, ++stripe) {
    const int bottom = std::min(g.rows(), top + stripe_height);
    for (int step = 0; step < g.cols(); ++step) {
      const int col = stripe % 2 == 0 ? step : g.cols() - 1 - step;
      for (int row = top; row < bottom; ++row) ord.order.push_back(row * g.cols() + col);
    }
  }
  return ord;
}

}  // namespace gridpart
