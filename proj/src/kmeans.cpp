#include "gridpart/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include "gridpart/rng.hpp"

namespace gridpart {

namespace {

using Point = std::array<double, 2>;

double dist2(const Point& a, const Point& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  return dx * dx + dy * dy;
}

// Index drawn with probability proportional to mass; uniform when all
// masses are zero.
int draw_proportional(const std::vector<double>& mass, Rng& rng) {
  double total = 0.0;
  for (double m : mass) total += m;
  if (!(total > 0.0)) return static_cast<int>(rng.below(mass.size()));
  double x = rng.uniform01() * total;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (x < mass[i]) return static_cast<int>(i);
    x -= mass[i];
  }
  for (std::size_t i = mass.size(); i-- > 0;) {
    if (mass[i] > 0.0) return static_cast<int>(i);
  }
  return 0;
}

struct Run {
  std::vector<int> assignment;
  std::vector<Point> centers;
  std::vector<double> trace;
  double objective = 0.0;
};

Run lloyd(const GridGraph& g, const std::vector<Point>& pos, const KMeansConfig& cfg, Rng& rng) {
  const int n = g.num_vertices();
  const int k = cfg.k;
  std::vector<Point> centers;
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<double> mass(n);
  std::vector<char> chosen(n, 0);
  for (int c = 0; c < k; ++c) {
    for (int v = 0; v < n; ++v) mass[v] = chosen[v] ? 0.0 : g.weight(v) * (c == 0 ? 1.0 : nearest[v]);
    int pick = draw_proportional(mass, rng);
    if (chosen[pick]) {
      // Remaining mass is zero: fall back to an unused vertex.
      std::vector<double> unused(n);
      for (int v = 0; v < n; ++v) unused[v] = chosen[v] ? 0.0 : 1.0;
      pick = draw_proportional(unused, rng);
    }
    chosen[pick] = 1;
    centers.push_back(pos[pick]);
    for (int v = 0; v < n; ++v) nearest[v] = std::min(nearest[v], dist2(pos[v], pos[pick]));
  }

  Run run;
  run.assignment.assign(n, -1);
  std::vector<int> previous;
  std::vector<int> sizes(k);
  std::vector<double> d2(n);
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    std::fill(sizes.begin(), sizes.end(), 0);
    for (int v = 0; v < n; ++v) {
      int best = 0;
      double best_d = dist2(pos[v], centers[0]);
      for (int c = 1; c < k; ++c) {
        const double d = dist2(pos[v], centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      run.assignment[v] = best;
      d2[v] = best_d;
      ++sizes[best];
    }
    // Empty clusters restart at the costliest vertex of a cluster that can
    // spare one; that vertex then sits on its new centre.
    for (int c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      int far = -1;
      for (int v = 0; v < n; ++v) {
        if (sizes[run.assignment[v]] < 2 || !(d2[v] > 0.0)) continue;
        if (far < 0 || g.weight(v) * d2[v] > g.weight(far) * d2[far] ||
            (g.weight(v) * d2[v] == g.weight(far) * d2[far] && d2[v] > d2[far])) {
          far = v;
        }
      }
      --sizes[run.assignment[far]];
      run.assignment[far] = c;
      ++sizes[c];
      centers[c] = pos[far];
      d2[far] = 0.0;
    }
    double objective = 0.0;
    for (int v = 0; v < n; ++v) objective += g.weight(v) * d2[v];
    run.trace.push_back(objective);
    run.objective = objective;
    if (run.assignment == previous) break;
    previous = run.assignment;

    std::vector<Point> sum(k, Point{0.0, 0.0}), plain(k, Point{0.0, 0.0});
    std::vector<double> weight(k, 0.0);
    for (int v = 0; v < n; ++v) {
      const int c = run.assignment[v];
      sum[c][0] += g.weight(v) * pos[v][0];
      sum[c][1] += g.weight(v) * pos[v][1];
      plain[c][0] += pos[v][0];
      plain[c][1] += pos[v][1];
      weight[c] += g.weight(v);
    }
    for (int c = 0; c < k; ++c) {
      if (weight[c] > 0.0) {
        centers[c] = {sum[c][0] / weight[c], sum[c][1] / weight[c]};
      } else {
        centers[c] = {plain[c][0] / sizes[c], plain[c][1] / sizes[c]};
      }
    }
  }
  run.centers = centers;
  return run;
}

}  // namespace

KMeansResult weighted_kmeans(const GridGraph& g, const KMeansConfig& cfg) {
  const int n = g.num_vertices();
  if (cfg.k < 1 || cfg.k > n) {
    throw Error("k must be in [1, " + std::to_string(n) + "], got " + std::to_string(cfg.k));
  }
  if (cfg.max_iters < 1) throw Error("max_iters must be >= 1");
  if (cfg.restarts < 1) throw Error("restarts must be >= 1");
  std::vector<Point> pos(n);
  for (int v = 0; v < n; ++v) pos[v] = g.center(v);
  Rng rng(cfg.seed);
  std::optional<Run> best;
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng local = rng.split();
    Run run = lloyd(g, pos, cfg, local);
    if (!best || run.objective < best->objective) best = std::move(run);
  }
  return {Partition(g, best->assignment, cfg.k), best->objective, best->centers, best->trace};
}

}  // namespace gridpart
