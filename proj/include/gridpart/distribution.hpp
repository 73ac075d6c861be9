#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gridpart/rng.hpp"

namespace gridpart {

struct Atom {
  double value = 0.0;
  double prob = 0.0;
};

// Finite discrete distribution of a nonnegative random weight.
class WeightDistribution {
 public:
  // Requires a nonempty support, finite values >= 0, probabilities > 0
  // summing to 1 within 1e-9.
  explicit WeightDistribution(std::vector<Atom> support);

  static WeightDistribution point(double value);

  std::span<const Atom> support() const { return support_; }
  double mean() const { return mean_; }
  double variance() const { return variance_; }
  double min_value() const;
  double max_value() const;

  // Distribution of factor * X.
  WeightDistribution scaled(double factor) const;

 private:
  std::vector<Atom> support_;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

// Vose alias table: O(1) draws from a fixed discrete distribution.
class AliasSampler {
 public:
  explicit AliasSampler(std::span<const double> probs);
  explicit AliasSampler(const WeightDistribution& d);

  std::size_t sample(Rng& rng) const;
  std::size_t size() const { return prob_.size(); }

 private:
  void build(std::span<const double> probs);

  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

// Poisson(lambda) pmf on {0..cap}, renormalized.
WeightDistribution poisson_truncated(double lambda, int cap);

}  // namespace gridpart
