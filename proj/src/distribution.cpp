#include "gridpart/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gridpart/grid.hpp"

namespace gridpart {

WeightDistribution::WeightDistribution(std::vector<Atom> support) : support_(std::move(support)) {
  if (support_.empty()) throw Error("distribution support is empty");
  double total = 0.0;
  for (const Atom& a : support_) {
    if (!std::isfinite(a.value) || a.value < 0.0) {
      throw Error("distribution value must be finite and >= 0, got " + std::to_string(a.value));
    }
    if (!(a.prob > 0.0) || !std::isfinite(a.prob)) {
      throw Error("distribution probability must be > 0, got " + std::to_string(a.prob));
    }
    total += a.prob;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error("distribution probabilities sum to " + std::to_string(total) + ", not 1");
  }
  for (const Atom& a : support_) mean_ += a.prob * a.value;
  for (const Atom& a : support_) variance_ += a.prob * (a.value - mean_) * (a.value - mean_);
}

WeightDistribution WeightDistribution::point(double value) { return WeightDistribution({{value, 1.0}}); }

double WeightDistribution::min_value() const {
  return std::min_element(support_.begin(), support_.end(),
                          [](const Atom& a, const Atom& b) { return a.value < b.value; })
      ->value;
}

double WeightDistribution::max_value() const {
  return std::max_element(support_.begin(), support_.end(),
                          [](const Atom& a, const Atom& b) { return a.value < b.value; })
      ->value;
}

WeightDistribution WeightDistribution::scaled(double factor) const {
  std::vector<Atom> atoms = support_;
  for (Atom& a : atoms) a.value *= factor;
  return WeightDistribution(std::move(atoms));
}

AliasSampler::AliasSampler(std::span<const double> probs) { build(probs); }

AliasSampler::AliasSampler(const WeightDistribution& d) {
  std::vector<double> probs;
  for (const Atom& a : d.support()) probs.push_back(a.prob);
  build(probs);
}

void AliasSampler::build(std::span<const double> probs) {
  const std::size_t n = probs.size();
  if (n == 0) throw Error("alias table needs at least one outcome");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw Error("alias table probabilities must be >= 0");
    total += p;
  }
  if (!(total > 0.0)) throw Error("alias table probabilities sum to zero");
  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = probs[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back();
    small.pop_back();
    const std::size_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::size_t i : large) prob_[i] = 1.0;
  for (std::size_t i : small) prob_[i] = 1.0;
}

std::size_t AliasSampler::sample(Rng& rng) const {
  const std::size_t column = rng.below(prob_.size());
  return rng.uniform01() < prob_[column] ? column : alias_[column];
}

WeightDistribution poisson_truncated(double lambda, int cap) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error("Poisson rate must be > 0");
  if (cap < 1) throw Error("Poisson truncation cap must be >= 1");
  std::vector<double> logp(cap + 1);
  for (int x = 0; x <= cap; ++x) logp[x] = x * std::log(lambda) - lambda - std::lgamma(x + 1.0);
  const double top = *std::max_element(logp.begin(), logp.end());
  double total = 0.0;
  for (double& l : logp) {
    l = std::exp(l - top);
    total += l;
  }
  std::vector<Atom> atoms;
  for (int x = 0; x <= cap; ++x) {
    const double p = logp[x] / total;
    if (p > 0.0) atoms.push_back({static_cast<double>(x), p});
  }
  // Drop the rounding drift left by underflowed atoms.
  double sum = 0.0;
  for (const Atom& a : atoms) sum += a.prob;
  for (Atom& a : atoms) a.prob /= sum;
  return WeightDistribution(std::move(atoms));
}

}  // namespace gridpart
