#include <cmath>

#include "doctest.h"
#include "gridpart/stochastic.hpp"
#include "gridpart/synth.hpp"

using namespace gridpart;

namespace {

double beta_by_summation(const WeightDistribution& d, int k) {
  long double total = 0.0L;
  for (const Atom& a : d.support()) total += a.prob * std::pow(static_cast<long double>(k), a.value);
  return static_cast<double>(std::log(total) / std::log(static_cast<long double>(k)));
}

WeightDistribution random_unit_distribution(Rng& rng) {
  const int atoms = 1 + static_cast<int>(rng.below(6));
  std::vector<Atom> support;
  double total = 0.0;
  for (int j = 0; j < atoms; ++j) {
    support.push_back({rng.uniform01(), rng.uniform(0.05, 1.0)});
    total += support.back().prob;
  }
  for (Atom& a : support) a.prob /= total;
  return WeightDistribution(support);
}

std::vector<WeightDistribution> small_gev(int m, int n, std::uint64_t seed) {
  GevRanges r;
  r.mu_lo = 4, r.mu_hi = 12;
  r.sigma_lo = 1, r.sigma_hi = 4;
  r.xi_lo = 0.0, r.xi_hi = 0.3;
  r.scale_lo = 0.5, r.scale_hi = 2.0;
  return random_gev_instance(m, n, seed, 40, r);
}

}  // namespace

TEST_SUITE("stochastic") {

TEST_CASE("beta transform examples") {
  for (double c : {0.0, 0.25, 0.5, 1.0}) CHECK(beta_transform(WeightDistribution::point(c), 7) == c);
  const WeightDistribution u({{0.0, 1.0 / 3}, {0.5, 1.0 / 3}, {1.0, 1.0 / 3}});
  CHECK(beta_transform(u, 4) == doctest::Approx(std::log(7.0 / 3.0) / std::log(4.0)).epsilon(1e-12));
  CHECK(beta_transform(u, 4) == doctest::Approx(0.6112).epsilon(1e-4));
  for (int k : {2, 3, 10, 75}) {
    for (double p : {0.01, 0.3, 0.5, 0.99}) {
      const WeightDistribution b({{0.0, 1 - p}, {1.0, p}});
      const double closed = std::log(1 - p + p * k) / std::log(static_cast<double>(k));
      CHECK(std::abs(beta_transform(b, k) - closed) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(beta_transform(WeightDistribution::point(1.5), 4), Error);
  CHECK_THROWS_AS(beta_transform(WeightDistribution::point(0.5), 1), Error);
}

TEST_CASE("beta transform lies between mean and max") {
  Rng rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto d = random_unit_distribution(rng);
    const int k = 2 + static_cast<int>(rng.below(100));
    const double b = beta_transform(d, k);
    CHECK(b >= d.mean() - 1e-12);
    CHECK(b <= d.max_value() + 1e-12);
    CHECK(std::abs(b - beta_by_summation(d, k)) <= 1e-12);
  }
}

TEST_CASE("split at a threshold") {
  const WeightDistribution d({{1.0, 0.5}, {3.0, 0.5}});
  const SplitDistribution s = split_at(d, 0);
  CHECK(s.threshold == 1.0);
  CHECK(s.exceptional_mean == doctest::Approx(1.5));
  CHECK(s.normal.mean() == doctest::Approx(0.5));
  CHECK(s.normal.support()[0].value == 1.0);
  CHECK(s.normal.support()[1].value == 0.0);
  const SplitDistribution all = split_at(d, 2);
  CHECK(all.exceptional_mean == 0.0);
  CHECK(all.normal.mean() == d.mean());
  const SplitDistribution none = split_at(WeightDistribution({{5.0, 0.4}, {9.0, 0.6}}), 1);
  CHECK(none.exceptional_mean == doctest::Approx(7.4));
  CHECK(none.normal.max_value() == 0.0);
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = random_unit_distribution(rng).scaled(rng.uniform(0.1, 50.0));
    const auto sp = split_at(x, static_cast<int>(rng.below(7)));
    CHECK(std::abs(sp.normal.mean() + sp.exceptional_mean - x.mean()) <= 1e-9);
  }
}

TEST_CASE("one unit vertex among zeros") {
  const auto g = GridGraph::uniform(Topology::Square, 3, 3);
  std::vector<WeightDistribution> dists(9, WeightDistribution::point(0.0));
  dists[4] = WeightDistribution::point(1.0);
  const StochasticResult r = stochastic_partition(g, dists, snake_ordering(g, 1), 2, 0, 0);
  REQUIRE(r.feasible());
  CHECK(r.i_star == 0);
  CHECK(r.attempts.front().exceptional_sum == 0.0);
  for (double w : r.part_transformed) CHECK(w <= kStochasticPartCap);
}

TEST_CASE("all-zero weights are skipped with a reason") {
  const auto g = GridGraph::uniform(Topology::Square, 2, 2);
  std::vector<WeightDistribution> dists(4, WeightDistribution::point(0.0));
  const StochasticResult r = stochastic_partition(g, dists, snake_ordering(g, 1), 2, 0, 2);
  CHECK_FALSE(r.feasible());
  REQUIRE(r.attempts.size() == 3);
  for (const auto& a : r.attempts) CHECK_FALSE(a.reason.empty());
}

TEST_CASE("contract and minimality of i*") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto g = GridGraph::uniform(Topology::Hex, 8, 8);
    const auto dists = small_gev(8, 8, seed);
    const auto ord = snake_ordering(g, 2);
    const int k = 4;
    const StochasticResult r = stochastic_partition(g, dists, ord, k);
    REQUIRE(r.feasible());
    const double theta = std::ldexp(1.0, r.i_star);
    // recompute the accepted step's conditions from scratch
    double exceptional = 0.0, total = 0.0;
    std::vector<double> part(k, 0.0);
    for (int v = 0; v < g.num_vertices(); ++v) {
      std::vector<Atom> normal;
      for (const Atom& a : dists[v].support()) {
        if (a.value > theta) {
          exceptional += a.prob * a.value / theta;
          normal.push_back({0.0, a.prob});
        } else {
          normal.push_back({a.value / theta, a.prob});
        }
      }
      const double w = beta_by_summation(WeightDistribution(normal), k);
      CHECK(std::abs(w - r.transformed[v]) <= 1e-12);
      total += w;
      part[r.partition->part_of(v)] += w;
    }
    CHECK(exceptional <= 1.0);
    for (double w : part) CHECK(w <= kStochasticPartCap + 1e-9);
    CHECK((1 + r.eps_used) * total / k == doctest::Approx(kStochasticPartCap).epsilon(1e-12));
    // every earlier step fails a condition
    REQUIRE(r.attempts.size() == static_cast<std::size_t>(r.i_star + 1));
    for (int i = 0; i < r.i_star; ++i) {
      const StochasticAttempt& a = r.attempts[i];
      CHECK_FALSE(a.feasible);
      if (a.exceptional_sum <= 1.0 && a.eps >= 0.0) {
        std::vector<double> w(g.num_vertices());
        for (int v = 0; v < g.num_vertices(); ++v) {
          w[v] = beta_transform(split_at(dists[v], i).normal.scaled(std::ldexp(1.0, -i)), k);
        }
        CHECK_FALSE(dynamic_partition(g.with_weights(w), ord, k, BalanceMode::upper_only(a.eps)).feasible());
      }
    }
    CHECK(r.attempts.back().feasible);
  }
}

TEST_CASE("balanced variant keeps the cap and adds a floor") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto g = GridGraph::uniform(Topology::Square, 8, 8);
    const auto dists = small_gev(8, 8, seed);
    const auto ord = snake_ordering(g, 2);
    const int k = 4;
    const StochasticResult strict = stochastic_partition(g, dists, ord, k);
    const StochasticResult r = stochastic_partition(g, dists, ord, k, 0, 13, 0.1);
    REQUIRE(r.feasible());
    CHECK(r.i_star >= strict.i_star);
    CHECK(r.attempts.back().exceptional_sum <= 1.0);
    double total = 0.0;
    for (double w : r.transformed) total += w;
    const double avg = total / k;
    for (double w : r.part_transformed) {
      CHECK(w <= kStochasticPartCap + 1e-9);
      CHECK(w <= 1.1 * avg * (1 + 1e-12));
      CHECK(w >= 0.9 * avg * (1 - 1e-12));
    }
    for (int i = 0; i < r.i_star; ++i) {
      const StochasticAttempt& a = r.attempts[i];
      CHECK_FALSE(a.feasible);
      if (a.exceptional_sum <= 1.0 && a.eps >= 0.0) {
        std::vector<double> w(g.num_vertices());
        for (int v = 0; v < g.num_vertices(); ++v) {
          w[v] = beta_transform(split_at(dists[v], i).normal.scaled(std::ldexp(1.0, -i)), k);
        }
        const BalanceMode mode = BalanceMode::window(0.1, std::min(0.1, a.eps));
        CHECK_FALSE(dynamic_partition(g.with_weights(w), ord, k, mode).feasible());
      }
    }
  }
  const auto g = GridGraph::uniform(Topology::Square, 2, 2);
  CHECK_THROWS_AS(stochastic_partition(g, std::vector<WeightDistribution>(4, WeightDistribution::point(1)),
                                       snake_ordering(g, 1), 2, 0, 3, 1.5),
                  Error);
}

TEST_CASE("variance bound on Poisson weights") {
  Rng rng(12);
  const auto g = GridGraph::uniform(Topology::Square, 6, 6);
  std::vector<WeightDistribution> dists;
  std::vector<double> means;
  for (int v = 0; v < 36; ++v) {
    const double lambda = rng.uniform(0.5, 4.0);
    dists.push_back(poisson_truncated(lambda, static_cast<int>(std::ceil(lambda + 10 * std::sqrt(lambda)))));
    means.push_back(dists.back().mean());
  }
  const DpResult dp = dynamic_partition(g.with_weights(means), snake_ordering(g, 2), 4, BalanceMode::two_sided(0.1));
  REQUIRE(dp.feasible());
  const VarianceCheck check = variance_bound_check(g, dists, *dp.partition, 0.1, 1 + 1e-3, 100000, 3);
  CHECK(std::abs(check.lhs.value - check.lhs_exact) <= 3 * check.lhs.std_error);
  CHECK(check.lhs.value <= check.bound + 3 * check.lhs.std_error);
  CHECK(check.lhs_exact <= check.bound);
  // hypothesis violations
  CHECK_THROWS_AS(variance_bound_check(g, dists, *dp.partition, 0.1, 0.5, 10, 3), Error);
  CHECK_THROWS_AS(variance_bound_check(g, dists, *dp.partition, 0.0, 1.01, 10, 3), Error);
}

TEST_CASE("deterministic weights have zero variance") {
  const auto g = GridGraph::uniform(Topology::Square, 2, 4);
  std::vector<WeightDistribution> dists(8, WeightDistribution::point(2.0));
  const Partition p(g, {0, 0, 1, 1, 0, 0, 1, 1}, 2);
  const VarianceCheck check = variance_bound_check(g, dists, p, 0.0, 0.0, 100, 1);
  CHECK(check.lhs.value == 0.0);
  CHECK(check.lhs_exact == 0.0);
  CHECK(check.bound == 0.0);
  const MonteCarloEstimate m = expected_max_estimate(g, dists, p, 3, 1);
  CHECK(m.value == 8.0);
}

TEST_CASE("expected maximum matches joint enumeration") {
  const auto g = GridGraph::uniform(Topology::Square, 1, 3);
  const std::vector<WeightDistribution> dists{
      WeightDistribution({{0.0, 0.2}, {1.0, 0.5}, {4.0, 0.3}}),
      WeightDistribution({{1.0, 0.6}, {2.0, 0.4}}),
      WeightDistribution({{0.0, 0.1}, {3.0, 0.6}, {5.0, 0.3}})};
  const Partition p(g, {0, 0, 1}, 2);
  double exact = 0.0;
  for (const Atom& a : dists[0].support())
    for (const Atom& b : dists[1].support())
      for (const Atom& c : dists[2].support()) exact += a.prob * b.prob * c.prob * std::max(a.value + b.value, c.value);
  const MonteCarloEstimate m = expected_max_estimate(g, dists, p, 200000, 9);
  CHECK(std::abs(m.value - exact) <= 3 * m.std_error);
  // k = 1 gives the expected total
  const Partition one(g, {0, 0, 0}, 1);
  const MonteCarloEstimate t = expected_max_estimate(g, dists, one, 200000, 9);
  CHECK(std::abs(t.value - (dists[0].mean() + dists[1].mean() + dists[2].mean())) <= 3 * t.std_error);
}

}  // TEST_SUITE
