#include "gridpart/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gridpart {

namespace {

void check_dists(const GridGraph& g, std::span<const WeightDistribution> dists) {
  if (static_cast<int>(dists.size()) != g.num_vertices()) {
    throw Error("expected " + std::to_string(g.num_vertices()) + " distributions, got " +
                std::to_string(dists.size()));
  }
}

std::string describe(double x) {
  std::ostringstream out;
  out << x;
  return out.str();
}

// Mean and standard error of a running sum of samples.
MonteCarloEstimate summarize(double sum, double sum_sq, int samples) {
  MonteCarloEstimate e;
  e.samples = samples;
  e.value = sum / samples;
  if (samples > 1) {
    const double var = std::max(0.0, (sum_sq - samples * e.value * e.value) / (samples - 1));
    e.std_error = std::sqrt(var / samples);
  }
  return e;
}

}  // namespace

double beta_transform(const WeightDistribution& d, int k) {
  if (k < 2) throw Error("beta transform needs k >= 2");
  const double log_k = std::log(static_cast<double>(k));
  for (const Atom& a : d.support()) {
    if (a.value > 1.0 + 1e-12) {
      throw Error("beta transform needs values in [0, 1], got " + describe(a.value));
    }
  }
  // Factored around the largest value so a point mass maps to itself exactly.
  const double top = d.max_value();
  double total = 0.0;
  for (const Atom& a : d.support()) total += a.prob * std::exp((a.value - top) * log_k);
  return top + std::log(total) / log_k;
}

SplitDistribution split_at(const WeightDistribution& d, int i) {
  if (i < 0) throw Error("halving step must be >= 0");
  const double threshold = std::ldexp(1.0, i);
  std::vector<Atom> normal;
  double exceptional = 0.0;
  for (const Atom& a : d.support()) {
    if (a.value > threshold) {
      exceptional += a.prob * a.value;
      normal.push_back({0.0, a.prob});
    } else {
      normal.push_back(a);
    }
  }
  return {WeightDistribution(std::move(normal)), exceptional, threshold};
}

StochasticResult stochastic_partition(const GridGraph& g, std::span<const WeightDistribution> dists,
                                      const VertexOrdering& ord, int k, int i_min, int i_max,
                                      std::optional<double> balance_eps) {
  check_dists(g, dists);
  if (k < 2) throw Error("stochastic partition needs k >= 2");
  if (balance_eps && !(*balance_eps >= 0.0 && *balance_eps <= 1.0)) {
    throw Error("balance eps must be in [0, 1]");
  }
  if (i_min < 0 || i_min > i_max) throw Error("halving range must be nonempty with i_min >= 0");
  const int n = g.num_vertices();
  StochasticResult result;
  std::vector<double> w(n);
  for (int i = i_min; i <= i_max; ++i) {
    StochasticAttempt attempt;
    attempt.i = i;
    const double theta = std::ldexp(1.0, i);
    for (int v = 0; v < n; ++v) {
      const SplitDistribution split = split_at(dists[v], i);
      attempt.exceptional_sum += split.exceptional_mean / theta;
      w[v] = beta_transform(split.normal.scaled(1.0 / theta), k);
      attempt.weight_sum += w[v];
    }
    attempt.eps = (kStochasticPartCap * k - attempt.weight_sum) / attempt.weight_sum;
    if (attempt.exceptional_sum > 1.0) {
      attempt.reason = "exceptional sum " + describe(attempt.exceptional_sum) + " > 1";
    } else if (!(attempt.weight_sum > 0.0)) {
      attempt.reason = "transformed weights sum to zero";
    } else if (attempt.eps < 0.0) {
      attempt.reason = "transformed weight " + describe(attempt.weight_sum) + " exceeds 18k";
    } else {
      const GridGraph transformed = g.with_weights(w);
      const BalanceMode mode =
          balance_eps ? BalanceMode::window(*balance_eps, std::min(*balance_eps, attempt.eps))
                      : BalanceMode::upper_only(attempt.eps);
      DpResult dp = dynamic_partition(transformed, ord, k, mode);
      if (!dp.feasible()) {
        attempt.reason = "dynamic partition infeasible";
      } else {
        attempt.feasible = true;
        result.i_star = i;
        result.eps_used = attempt.eps;
        result.cut = dp.cut;
        result.transformed = w;
        const auto pw = dp.partition->part_weights();
        result.part_transformed.assign(pw.begin(), pw.end());
        result.partition.emplace(g, std::vector<int>(dp.partition->assignment().begin(),
                                                     dp.partition->assignment().end()),
                                 k);
        result.attempts.push_back(attempt);
        return result;
      }
    }
    result.attempts.push_back(attempt);
  }
  return result;
}

VarianceCheck variance_bound_check(const GridGraph& g, std::span<const WeightDistribution> dists,
                                   const Partition& p, double eps, double c, int samples,
                                   std::uint64_t seed) {
  check_dists(g, dists);
  if (samples < 1) throw Error("need at least one sample");
  const int n = g.num_vertices();
  const int k = p.k();
  std::vector<double> mean(k, 0.0), var(k, 0.0);
  double total = 0.0;
  for (int v = 0; v < n; ++v) {
    const WeightDistribution& d = dists[v];
    if (d.variance() > c * d.mean() + 1e-9) {
      throw Error("vertex " + std::to_string(v) + " has variance " + describe(d.variance()) +
                  " > c * mean = " + describe(c * d.mean()));
    }
    mean[p.part_of(v)] += d.mean();
    var[p.part_of(v)] += d.variance();
    total += d.mean();
  }
  VarianceCheck check;
  check.average = total / k;
  const double a = check.average;
  for (int i = 0; i < k; ++i) {
    if (std::abs(mean[i] - a) > eps * a + 1e-9) {
      throw Error("part " + std::to_string(i + 1) + " has expected weight " + describe(mean[i]) +
                  ", outside (1 +- eps) * " + describe(a));
    }
    check.lhs_exact += (var[i] + (mean[i] - a) * (mean[i] - a)) / k;
  }
  check.bound = (4.0 * eps + eps * eps) * a * a + c * a;

  std::vector<AliasSampler> samplers;
  samplers.reserve(n);
  for (const WeightDistribution& d : dists) samplers.emplace_back(d);
  Rng rng(seed);
  std::vector<double> part(k);
  double sum = 0.0, sum_sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    std::fill(part.begin(), part.end(), 0.0);
    for (int v = 0; v < n; ++v) part[p.part_of(v)] += dists[v].support()[samplers[v].sample(rng)].value;
    double x = 0.0;
    for (double w : part) x += (w - a) * (w - a);
    x /= k;
    sum += x;
    sum_sq += x * x;
  }
  check.lhs = summarize(sum, sum_sq, samples);
  return check;
}

MonteCarloEstimate expected_max_estimate(const GridGraph& g, std::span<const WeightDistribution> dists,
                                         const Partition& p, int samples, std::uint64_t seed) {
  check_dists(g, dists);
  if (samples < 1) throw Error("need at least one sample");
  const int n = g.num_vertices();
  std::vector<AliasSampler> samplers;
  samplers.reserve(n);
  for (const WeightDistribution& d : dists) samplers.emplace_back(d);
  Rng rng(seed);
  std::vector<double> part(p.k());
  double sum = 0.0, sum_sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    std::fill(part.begin(), part.end(), 0.0);
    for (int v = 0; v < n; ++v) part[p.part_of(v)] += dists[v].support()[samplers[v].sample(rng)].value;
    const double x = *std::max_element(part.begin(), part.end());
    sum += x;
    sum_sq += x * x;
  }
  return summarize(sum, sum_sq, samples);
}

}  // namespace gridpart
