#include "gridpart/dp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

namespace gridpart {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
constexpr std::int64_t kBruteForceLimit = 1'000'000;

struct BalanceWindow {
  long double lo;
  long double hi;
};

BalanceWindow balance_window(long double total, int k, BalanceMode mode) {
  if (!(mode.eps >= 0.0) || !std::isfinite(mode.eps)) throw Error("eps must be finite and >= 0");
  if (mode.kind == BalanceMode::Kind::Window && (!(mode.lower_eps >= 0.0) || !(mode.lower_eps <= 1.0))) {
    throw Error("lower eps must be in [0, 1]");
  }
  const long double avg = total / k;
  // Absorbs rounding in the prefix sums; half the slack balance_report allows.
  const long double tol = 0.5e-12L * avg;
  BalanceWindow w;
  w.hi = (1.0L + mode.eps) * avg + tol;
  switch (mode.kind) {
    case BalanceMode::Kind::TwoSided: w.lo = (1.0L - mode.eps) * avg - tol; break;
    case BalanceMode::Kind::Window: w.lo = (1.0L - mode.lower_eps) * avg - tol; break;
    case BalanceMode::Kind::UpperOnly: w.lo = -std::numeric_limits<long double>::infinity(); break;
  }
  return w;
}

std::vector<long double> prefix_weights(const GridGraph& g, const VertexOrdering& ord) {
  std::vector<long double> prefix(ord.order.size() + 1, 0.0L);
  for (std::size_t i = 0; i < ord.order.size(); ++i) prefix[i + 1] = prefix[i] + g.weight(ord.order[i]);
  return prefix;
}

void check_inputs(const GridGraph& g, const VertexOrdering& ord, int k) {
  ord.validate(g);
  if (k < 1 || k > g.num_vertices()) {
    throw Error("k must be in [1, " + std::to_string(g.num_vertices()) + "], got " + std::to_string(k));
  }
  if (!(g.total_weight() > 0.0)) throw Error("total weight is zero; the average part weight is undefined");
}

DpResult finish(const GridGraph& g, const VertexOrdering& ord, int k, std::vector<int> starts,
                std::int64_t cut) {
  DpResult result;
  const int n = g.num_vertices();
  std::vector<int> assignment(n);
  for (int t = 0; t < k; ++t) {
    for (int i = starts[t]; i < starts[t + 1]; ++i) assignment[ord.order[i]] = t;
    if (!interval_is_connected(g, ord, starts[t], starts[t + 1])) result.disconnected_parts.push_back(t);
  }
  result.partition.emplace(g, std::move(assignment), k);
  if (result.partition->cut_edges() != cut) {
    throw std::logic_error("dp cut " + std::to_string(cut) + " disagrees with recount " +
                           std::to_string(result.partition->cut_edges()));
  }
  result.cut = cut;
  result.starts = std::move(starts);
  return result;
}

}  // namespace

DpResult dynamic_partition(const GridGraph& g, const VertexOrdering& ord, int k, BalanceMode mode) {
  check_inputs(g, ord, k);
  const int n = g.num_vertices();
  const std::vector<int> pos = ord.positions();
  const std::vector<long double> prefix = prefix_weights(g, ord);
  const BalanceWindow bw = balance_window(prefix[n], k, mode);

  const std::size_t width = static_cast<std::size_t>(k) + 1;
  std::vector<std::int64_t> cut((n + 1) * width, kInf);
  std::vector<int> back((n + 1) * width, -1);
  cut[0] = 0;

  struct Candidate {
    int j;
    std::int64_t delta;
  };
  std::vector<Candidate> candidates;
  for (int s = 1; s <= n; ++s) {
    // Window [j, s) grows to the left; delta counts edges into [0, j).
    candidates.clear();
    std::int64_t delta = 0;
    for (int j = s - 1; j >= 0; --j) {
      for (int u : g.neighbors(ord.order[j])) {
        const int p = pos[u];
        if (p < j) {
          ++delta;
        } else if (p < s) {
          --delta;
        }
      }
      const long double w = prefix[s] - prefix[j];
      if (w > bw.hi) break;
      if (w >= bw.lo) candidates.push_back({j, delta});
    }
    const int t_max = std::min(k, s);
    for (int t = 1; t <= t_max; ++t) {
      std::int64_t best = kInf;
      int arg = -1;
      // Candidates arrive with j decreasing; strict < keeps the largest j.
      for (const Candidate& c : candidates) {
        const std::int64_t before = cut[c.j * width + t - 1];
        if (before == kInf) continue;
        if (before + c.delta < best) {
          best = before + c.delta;
          arg = c.j;
        }
      }
      cut[s * width + t] = best;
      back[s * width + t] = arg;
    }
  }

  std::vector<int> furthest(k + 1, -1);
  for (int t = 0; t <= k; ++t) {
    for (int s = n; s >= 0; --s) {
      if (cut[s * width + t] != kInf) {
        furthest[t] = s;
        break;
      }
    }
  }

  if (cut[n * width + k] == kInf) {
    DpResult infeasible;
    infeasible.furthest_prefix = std::move(furthest);
    return infeasible;
  }
  std::vector<int> starts(k + 1);
  starts[k] = n;
  for (int t = k, s = n; t >= 1; --t) {
    s = back[s * width + t];
    starts[t - 1] = s;
  }
  DpResult result = finish(g, ord, k, std::move(starts), cut[n * width + k]);
  result.furthest_prefix = std::move(furthest);
  return result;
}

DpResult brute_force_consistent(const GridGraph& g, const VertexOrdering& ord, int k,
                                BalanceMode mode) {
  check_inputs(g, ord, k);
  const int n = g.num_vertices();
  // C(n-1, k-1), stopping as soon as it passes the limit.
  std::int64_t count = 1;
  for (int i = 1; i <= k - 1; ++i) {
    count = count * (n - 1 - (k - 1) + i) / i;
    if (count > kBruteForceLimit) throw Error("brute force would enumerate more than 10^6 splits");
  }
  const std::vector<long double> prefix = prefix_weights(g, ord);
  const BalanceWindow bw = balance_window(prefix[n], k, mode);

  std::vector<int> starts(k + 1);
  for (int t = 0; t < k; ++t) starts[t] = t;
  starts[k] = n;
  std::vector<int> assignment(n);
  std::int64_t best = kInf;
  std::vector<int> best_starts;
  while (true) {
    bool balanced = true;
    for (int t = 0; t < k && balanced; ++t) {
      const long double w = prefix[starts[t + 1]] - prefix[starts[t]];
      balanced = w >= bw.lo && w <= bw.hi;
    }
    if (balanced) {
      for (int t = 0; t < k; ++t) {
        for (int i = starts[t]; i < starts[t + 1]; ++i) assignment[ord.order[i]] = t;
      }
      const std::int64_t c = cut_count(g, assignment);
      if (c < best) {
        best = c;
        best_starts = starts;
      }
    }
    // Next strictly increasing sequence starts[1..k-1] in [1, n-1].
    int t = k - 1;
    while (t >= 1 && starts[t] == n - k + t) --t;
    if (t < 1) break;
    ++starts[t];
    for (int u = t + 1; u < k; ++u) starts[u] = starts[u - 1] + 1;
  }
  if (best == kInf) return {};
  return finish(g, ord, k, std::move(best_starts), best);
}

std::int64_t incremental_delta(const GridGraph& g, const VertexOrdering& ord, int begin, int end) {
  const int n = g.num_vertices();
  if (begin < 0 || begin > end || end > n) throw Error("window out of range");
  const std::vector<int> pos = ord.positions();
  std::int64_t delta = 0;
  for (int j = end - 1; j >= begin; --j) {
    for (int u : g.neighbors(ord.order[j])) {
      const int p = pos[u];
      if (p < j) {
        ++delta;
      } else if (p < end) {
        --delta;
      }
    }
  }
  return delta;
}

bool interval_is_connected(const GridGraph& g, const VertexOrdering& ord, int begin, int end) {
  if (begin >= end) return false;
  const std::vector<int> pos = ord.positions();
  std::vector<char> seen(end - begin, 0);
  std::deque<int> queue{ord.order[begin]};
  seen[0] = 1;
  int reached = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int u : g.neighbors(v)) {
      const int p = pos[u];
      if (p < begin || p >= end || seen[p - begin]) continue;
      seen[p - begin] = 1;
      ++reached;
      queue.push_back(u);
    }
  }
  return reached == end - begin;
}

}  // namespace gridpart
