#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gridpart/distribution.hpp"

namespace gridpart {

// Row-major m x n field: U[0,1] * Bernoulli(p) per cell, then `iters`
// rounds of smooth_field.
std::vector<double> sparse_smoothed_field(int m, int n, double bernoulli_p = 0.02, int iters = 40,
                                          std::uint64_t seed = 0);

// Replaces every cell by the exp(-distance) weighted mean over the 7 x 7
// window around it, clipped to the grid.
std::vector<double> smooth_field(int m, int n, std::vector<double> field, int iters);

struct GevParams {
  double mu = 0.0;
  double sigma = 1.0;
  double xi = 0.0;
  double scale = 1.0;  // s_v: support values are i * scale
};

// GEV density; 0 outside the support.
double gev_pdf(double x, double mu, double sigma, double xi);

// Pr[X = i * scale] proportional to gev_pdf(i) for i = 1..support_cap.
// Atoms whose density underflows to zero are left out.
WeightDistribution gev_discretized(const GevParams& p, int support_cap = 250);

struct GevRanges {
  double mu_lo = 50.0, mu_hi = 200.0;
  double sigma_lo = 5.0, sigma_hi = 50.0;
  double xi_lo = -0.2, xi_hi = 0.4;
  double scale_lo = 0.5, scale_hi = 2.0;
};

GevParams random_gev_params(Rng& rng, const GevRanges& ranges);

// One discretized GEV per vertex with parameters drawn from `ranges`.
std::vector<WeightDistribution> random_gev_instance(int m, int n, std::uint64_t seed,
                                                    int support_cap = 250,
                                                    const GevRanges& ranges = {});

// As random_gev_instance, but s_v = workload[v] / mean(workload). Vertices
// with zero workload get a point mass at 0.
std::vector<WeightDistribution> workload_gev_instance(std::span<const double> workload,
                                                      std::uint64_t seed, int support_cap = 250,
                                                      const GevRanges& ranges = {});

}  // namespace gridpart
