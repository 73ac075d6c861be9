#include "gridpart/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gridpart/grid.hpp"

namespace gridpart {

std::vector<double> sparse_smoothed_field(int m, int n, double bernoulli_p, int iters,
                                          std::uint64_t seed) {
  if (m < 1 || n < 1) throw Error("field dimensions must be positive");
  if (!(bernoulli_p > 0.0 && bernoulli_p <= 1.0)) throw Error("Bernoulli parameter must be in (0, 1]");
  Rng rng(seed);
  std::vector<double> field(static_cast<std::size_t>(m) * n);
  for (double& w : field) {
    const double u = rng.uniform01();
    w = rng.bernoulli(bernoulli_p) ? u : 0.0;
  }
  return smooth_field(m, n, std::move(field), iters);
}

std::vector<double> smooth_field(int m, int n, std::vector<double> field, int iters) {
  if (iters < 0) throw Error("iteration count must be >= 0");
  if (field.size() != static_cast<std::size_t>(m) * n) throw Error("field size does not match m x n");
  constexpr int kRadius = 3;
  double kernel[2 * kRadius + 1][2 * kRadius + 1];
  for (int di = -kRadius; di <= kRadius; ++di) {
    for (int dj = -kRadius; dj <= kRadius; ++dj) {
      kernel[di + kRadius][dj + kRadius] = std::exp(-std::sqrt(double(di * di + dj * dj)));
    }
  }
  std::vector<double> next(field.size());
  for (int it = 0; it < iters; ++it) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        double num = 0.0, den = 0.0;
        for (int k = std::max(0, i - kRadius); k <= std::min(m - 1, i + kRadius); ++k) {
          for (int l = std::max(0, j - kRadius); l <= std::min(n - 1, j + kRadius); ++l) {
            const double w = kernel[k - i + kRadius][l - j + kRadius];
            num += w * field[k * n + l];
            den += w;
          }
        }
        next[i * n + j] = num / den;
      }
    }
    field.swap(next);
  }
  return field;
}

double gev_pdf(double x, double mu, double sigma, double xi) {
  if (!(sigma > 0.0)) throw Error("GEV scale must be positive");
  const double z = (x - mu) / sigma;
  double t;
  if (xi == 0.0) {
    t = std::exp(-z);
  } else {
    const double base = 1.0 + xi * z;
    if (!(base > 0.0)) return 0.0;
    t = std::pow(base, -1.0 / xi);
  }
  const double f = std::pow(t, xi + 1.0) * std::exp(-t) / sigma;
  return std::isfinite(f) ? f : 0.0;
}

WeightDistribution gev_discretized(const GevParams& p, int support_cap) {
  if (support_cap < 1) throw Error("support cap must be >= 1");
  if (!(p.scale > 0.0)) throw Error("GEV support scale must be positive");
  std::vector<double> f(support_cap + 1, 0.0);
  double total = 0.0;
  for (int i = 1; i <= support_cap; ++i) {
    f[i] = gev_pdf(i, p.mu, p.sigma, p.xi);
    total += f[i];
  }
  if (!(total > 0.0)) throw Error("GEV density vanishes on the whole discrete support");
  std::vector<Atom> atoms;
  for (int i = 1; i <= support_cap; ++i) {
    if (f[i] > 0.0) atoms.push_back({i * p.scale, f[i] / total});
  }
  return WeightDistribution(std::move(atoms));
}

GevParams random_gev_params(Rng& rng, const GevRanges& r) {
  GevParams p;
  p.mu = rng.uniform(r.mu_lo, r.mu_hi);
  p.sigma = rng.uniform(r.sigma_lo, r.sigma_hi);
  p.xi = rng.uniform(r.xi_lo, r.xi_hi);
  p.scale = rng.uniform(r.scale_lo, r.scale_hi);
  return p;
}

std::vector<WeightDistribution> random_gev_instance(int m, int n, std::uint64_t seed, int support_cap,
                                                    const GevRanges& ranges) {
  if (m < 1 || n < 1) throw Error("instance dimensions must be positive");
  Rng rng(seed);
  std::vector<WeightDistribution> out;
  out.reserve(static_cast<std::size_t>(m) * n);
  for (int v = 0; v < m * n; ++v) out.push_back(gev_discretized(random_gev_params(rng, ranges), support_cap));
  return out;
}

std::vector<WeightDistribution> workload_gev_instance(std::span<const double> workload,
                                                      std::uint64_t seed, int support_cap,
                                                      const GevRanges& ranges) {
  if (workload.empty()) throw Error("workload is empty");
  const double mean = std::accumulate(workload.begin(), workload.end(), 0.0) / workload.size();
  if (!(mean > 0.0)) throw Error("workload sums to zero");
  Rng rng(seed);
  std::vector<WeightDistribution> out;
  out.reserve(workload.size());
  for (double w : workload) {
    if (w < 0.0 || !std::isfinite(w)) throw Error("workload must be finite and >= 0");
    GevParams p = random_gev_params(rng, ranges);
    if (w == 0.0) {
      out.push_back(WeightDistribution::point(0.0));
      continue;
    }
    p.scale = w / mean;
    out.push_back(gev_discretized(p, support_cap));
  }
  return out;
}

}  // namespace gridpart
