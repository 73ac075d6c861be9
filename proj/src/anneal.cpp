#include "gridpart/anneal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <unordered_map>

#include "gridpart/rng.hpp"

namespace gridpart {

namespace {

bool within_balance(double weight, double avg, double eps) {
  return std::abs(weight - avg) / avg <= eps * (1.0 + 1e-12) + 1e-12;
}

bool touches_part(const GridGraph& g, const Partition& p, int u, int part) {
  for (int x : g.neighbors(u)) {
    if (p.part_of(x) == part) return true;
  }
  return false;
}

// Distinct parts other than v's own among v's neighbours, ascending.
void adjacent_parts(const GridGraph& g, const Partition& p, int v, std::vector<int>& out) {
  out.clear();
  for (int u : g.neighbors(v)) {
    if (p.part_of(u) != p.part_of(v)) out.push_back(p.part_of(u));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

// Enumerates every connected vertex set of size <= max_run whose smallest
// vertex is `root` and whose members all satisfy `in_layer`, each exactly
// once (ESU scheme). The visitor returns false to stop early.
class RunEnumerator {
 public:
  using Visitor = std::function<bool(const std::vector<int>&)>;

  RunEnumerator(const GridGraph& g, std::function<bool(int)> in_layer, int max_run)
      : g_(g), in_layer_(std::move(in_layer)), max_run_(max_run) {}

  void run(int root, const Visitor& visit) {
    root_ = root;
    sub_.assign(1, root);
    std::vector<int> ext;
    for (int u : g_.neighbors(root)) {
      if (u > root && in_layer_(u)) ext.push_back(u);
    }
    extend(ext, visit);
  }

 private:
  bool adjacent_to_sub(int u) const {
    for (int s : sub_) {
      const auto nb = g_.neighbors(s);
      if (s == u || std::binary_search(nb.begin(), nb.end(), u)) return true;
    }
    return false;
  }

  bool extend(std::vector<int> ext, const Visitor& visit) {
    if (!visit(sub_)) return false;
    if (static_cast<int>(sub_.size()) == max_run_) return true;
    while (!ext.empty()) {
      const int w = ext.back();
      ext.pop_back();
      std::vector<int> next = ext;
      for (int u : g_.neighbors(w)) {
        if (u > root_ && in_layer_(u) && !adjacent_to_sub(u) &&
            std::find(next.begin(), next.end(), u) == next.end()) {
          next.push_back(u);
        }
      }
      sub_.push_back(w);
      const bool go_on = extend(std::move(next), visit);
      sub_.pop_back();
      if (!go_on) return false;
    }
    return true;
  }

  const GridGraph& g_;
  std::function<bool(int)> in_layer_;
  int max_run_;
  int root_ = 0;
  std::vector<int> sub_;
};

// Runs rooted at v moving from v's part to part j.
void for_each_run(const GridGraph& g, const Partition& p, int v, int j, int max_run,
                  const RunEnumerator::Visitor& visit) {
  const int i = p.part_of(v);
  RunEnumerator runs(g, [&](int u) { return p.part_of(u) == i && touches_part(g, p, u, j); },
                     max_run);
  runs.run(v, visit);
}

bool donor_stays_connected(const GridGraph& g, const Partition& p, const std::vector<int>& moving) {
  const int from = p.part_of(moving.front());
  auto is_moving = [&](int u) { return std::find(moving.begin(), moving.end(), u) != moving.end(); };
  // Every remaining vertex reaches one of these; they must reach each other.
  std::vector<int> targets;
  for (int v : moving) {
    for (int u : g.neighbors(v)) {
      if (p.part_of(u) == from && !is_moving(u)) targets.push_back(u);
    }
  }
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  if (targets.size() <= 1) return true;
  std::unordered_map<int, char> seen;
  std::vector<int> stack{targets.front()};
  seen[targets.front()] = 1;
  std::size_t found = 1;
  while (!stack.empty() && found < targets.size()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u : g.neighbors(v)) {
      if (p.part_of(u) != from || is_moving(u) || seen.count(u)) continue;
      seen[u] = 1;
      if (std::binary_search(targets.begin(), targets.end(), u)) ++found;
      stack.push_back(u);
    }
  }
  return found == targets.size();
}

std::vector<Move> list_candidates(const GridGraph& g, const Partition& p, double eps, int max_run) {
  std::vector<Move> out;
  std::vector<int> parts;
  for (int v = 0; v < g.num_vertices(); ++v) {
    adjacent_parts(g, p, v, parts);
    for (int j : parts) {
      for_each_run(g, p, v, j, max_run, [&](const std::vector<int>& run) {
        Move m{run, p.part_of(v), j};
        if (move_is_valid(g, p, m, eps)) out.push_back(std::move(m));
        return true;
      });
    }
  }
  return out;
}

// Connected sets of size <= max_run with a fixed smallest vertex, maximized
// over positions on an unbounded lattice: bounds the runs rooted anywhere.
std::int64_t lattice_run_bound(Topology topology, int max_run) {
  const int side = 2 * max_run + 3;
  const GridGraph lattice = GridGraph::uniform(topology, side, side + 1);
  std::int64_t best = 0;
  for (int col : {side / 2, side / 2 + 1}) {
    const int root = (side / 2) * lattice.cols() + col;
    std::int64_t count = 0;
    RunEnumerator runs(lattice, [](int) { return true; }, max_run);
    runs.run(root, [&](const std::vector<int>&) {
      ++count;
      return true;
    });
    best = std::max(best, count);
  }
  return best;
}

// Draws uniformly from the valid moves. Each (vertex v, adjacent part j)
// incidence roots a known number of runs; drawing an incidence uniformly
// and accepting it with probability count / bound makes every run equally
// likely, and rejecting invalid runs leaves the valid ones equally likely.
class MoveSampler {
 public:
  MoveSampler(const GridGraph& g, const Partition& p, double eps, int max_run)
      : g_(g), p_(p), eps_(eps), max_run_(max_run),
        bound_(max_run == 1 ? 1 : lattice_run_bound(g.topology(), max_run)),
        parts_of_(g.num_vertices()) {
    for (int v = 0; v < g.num_vertices(); ++v) add_vertex(v);
  }

  void refresh(const std::vector<int>& moved) {
    std::vector<int> touched = moved;
    for (int v : moved) {
      for (int u : g_.neighbors(v)) touched.push_back(u);
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (int v : touched) {
      remove_vertex(v);
      add_vertex(v);
    }
  }

  std::optional<Move> draw(Rng& rng) {
    constexpr int kTrials = 2000;
    for (int trial = 0; trial < kTrials && !incidences_.empty(); ++trial) {
      const std::int64_t key = incidences_[rng.below(incidences_.size())];
      const int v = static_cast<int>(key / p_.k());
      const int j = static_cast<int>(key % p_.k());
      std::int64_t count = 0;
      for_each_run(g_, p_, v, j, max_run_, [&](const std::vector<int>&) {
        ++count;
        return true;
      });
      if (rng.uniform01() * static_cast<double>(bound_) >= static_cast<double>(count)) continue;
      const std::int64_t pick = static_cast<std::int64_t>(rng.below(count));
      std::int64_t index = 0;
      Move m{{}, p_.part_of(v), j};
      for_each_run(g_, p_, v, j, max_run_, [&](const std::vector<int>& run) {
        if (index++ < pick) return true;
        m.vertices = run;
        return false;
      });
      if (move_is_valid(g_, p_, m, eps_)) return m;
    }
    // Rare: most runs are invalid. Enumerate and pick one directly.
    std::vector<Move> all = list_candidates(g_, p_, eps_, max_run_);
    if (all.empty()) return std::nullopt;
    return all[rng.below(all.size())];
  }

 private:
  void add_vertex(int v) {
    adjacent_parts(g_, p_, v, parts_of_[v]);
    for (int j : parts_of_[v]) {
      const std::int64_t key = static_cast<std::int64_t>(v) * p_.k() + j;
      where_[key] = incidences_.size();
      incidences_.push_back(key);
    }
  }

  void remove_vertex(int v) {
    for (int j : parts_of_[v]) {
      const std::int64_t key = static_cast<std::int64_t>(v) * p_.k() + j;
      const auto it = where_.find(key);
      const std::size_t slot = it->second;
      where_.erase(it);
      if (slot + 1 != incidences_.size()) {
        incidences_[slot] = incidences_.back();
        where_[incidences_[slot]] = slot;
      }
      incidences_.pop_back();
    }
    parts_of_[v].clear();
  }

  const GridGraph& g_;
  const Partition& p_;
  double eps_;
  int max_run_;
  std::int64_t bound_;
  std::vector<std::vector<int>> parts_of_;
  std::vector<std::int64_t> incidences_;
  std::unordered_map<std::int64_t, std::size_t> where_;
};

void require_valid_state(const GridGraph& g, const Partition& p, double eps) {
  if (!all_contiguous(g, p)) throw Error("partition has a non-contiguous part");
  if (!balance_report(g, p, eps).within) {
    throw Error("partition is not balanced within eps = " + std::to_string(eps));
  }
}

}  // namespace

bool move_is_valid(const GridGraph& g, const Partition& p, const Move& m, double eps) {
  if (m.vertices.empty() || m.from == m.to) return false;
  if (m.to < 0 || m.to >= p.k() || m.from < 0 || m.from >= p.k()) return false;
  double moved = 0.0;
  bool reaches_target = false;
  for (int v : m.vertices) {
    if (p.part_of(v) != m.from) return false;
    moved += g.weight(v);
    reaches_target = reaches_target || touches_part(g, p, v, m.to);
  }
  if (static_cast<int>(m.vertices.size()) >= p.part_sizes()[m.from]) return false;
  const double avg = g.total_weight() / p.k();
  if (!within_balance(p.part_weights()[m.from] - moved, avg, eps) ||
      !within_balance(p.part_weights()[m.to] + moved, avg, eps)) {
    return false;
  }
  // The block joins the receiving part through some edge and must itself
  // be connected for the receiver to stay connected.
  if (!reaches_target) return false;
  {
    std::vector<int> stack{m.vertices.front()};
    std::vector<int> seen{m.vertices.front()};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int u : g.neighbors(v)) {
        if (std::find(m.vertices.begin(), m.vertices.end(), u) != m.vertices.end() &&
            std::find(seen.begin(), seen.end(), u) == seen.end()) {
          seen.push_back(u);
          stack.push_back(u);
        }
      }
    }
    if (seen.size() != m.vertices.size()) return false;
  }
  return donor_stays_connected(g, p, m.vertices);
}

std::vector<Move> one_swap_candidates(const GridGraph& g, const Partition& p, double eps) {
  return list_candidates(g, p, eps, 1);
}

std::vector<Move> combinatorial_candidates(const GridGraph& g, const Partition& p, double eps,
                                           int max_run) {
  if (max_run < 1) throw Error("max_run must be >= 1");
  return list_candidates(g, p, eps, max_run);
}

std::optional<Move> draw_candidate(const GridGraph& g, const Partition& p, double eps, int max_run,
                                   Rng& rng) {
  if (max_run < 1) throw Error("max_run must be >= 1");
  MoveSampler sampler(g, p, eps, max_run);
  return sampler.draw(rng);
}

double acceptance_probability(double z_new, double z_old, double temperature) {
  if (!(temperature > 0.0)) throw Error("temperature must be positive");
  if (z_new < z_old) return 1.0;
  return std::exp(-(z_new - z_old) / temperature);
}

AnnealResult anneal(const GridGraph& g, const Partition& p0, const AnnealConfig& cfg) {
  if (!(cfg.temperature > 0.0)) throw Error("temperature must be positive");
  if (!(cfg.cooling > 0.0 && cfg.cooling <= 1.0)) throw Error("cooling factor must be in (0, 1]");
  if (cfg.max_run < 1) throw Error("max_run must be >= 1");
  if (cfg.eps < 0.0) throw Error("eps must be >= 0");
  require_valid_state(g, p0, cfg.eps);

  const std::int64_t n = g.num_vertices();
  const std::int64_t max_iters = cfg.max_iters > 0 ? cfg.max_iters : 50 * n;
  const std::int64_t window = cfg.no_improve_window > 0 ? cfg.no_improve_window : 5 * n;
  const int max_run = cfg.neighborhood == Neighborhood::OneSwap ? 1 : cfg.max_run;

  Partition current = p0;
  AnnealResult result{p0, p0.cut_edges(), 0, 0, {{0, p0.cut_edges()}}};
  MoveSampler sampler(g, current, cfg.eps, max_run);
  Rng rng(cfg.seed);
  double temperature = cfg.temperature;
  std::int64_t since_best = 0;
  for (std::int64_t it = 1; it <= max_iters && since_best < window; ++it) {
    result.iterations = it;
    ++since_best;
    const std::optional<Move> m = sampler.draw(rng);
    if (m) {
      const std::int64_t z_old = current.cut_edges();
      const std::int64_t z_new = z_old + current.cut_delta(g, m->vertices, m->to);
      const double prob = acceptance_probability(static_cast<double>(z_new),
                                                 static_cast<double>(z_old), temperature);
      if (prob >= rng.uniform01()) {
        current.move(g, m->vertices, m->to);
        sampler.refresh(m->vertices);
        ++result.accepted;
        result.trace.push_back({it, current.cut_edges()});
        if (cfg.validate_every_step) {
          current.check_consistency(g);
          require_valid_state(g, current, cfg.eps);
        }
        if (current.cut_edges() < result.best.cut_edges()) {
          result.best = current;
          since_best = 0;
        }
      }
    }
    temperature *= cfg.cooling;
    if (!(temperature > 0.0)) temperature = std::numeric_limits<double>::min();
  }
  return result;
}

}  // namespace gridpart
