#include "gridpart/report.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>

#include "gridpart/stochastic.hpp"

namespace gridpart {

SolveReport evaluate_partition(const Instance& inst, const Partition& p, double eps, int samples,
                               std::optional<std::uint64_t> seed) {
  const GridGraph& g = inst.graph;
  SolveReport r;
  r.k = p.k();
  r.eps = eps;
  r.cut_edges = cut_count(g, p);
  r.perimeters = part_perimeters(g, p);
  const BalanceReport b = balance_report(g, p, eps);
  r.max_dev = b.max_dev;
  r.balanced = b.within;
  r.contiguous = all_contiguous(g, p);
  r.seed = seed;
  if (inst.dists.empty() || samples <= 0) {
    const auto w = p.part_weights();
    r.normalized_max_part_weight = p.k() * *std::max_element(w.begin(), w.end()) / g.total_weight();
  } else {
    if (!seed) throw Error("sampling the maximum part weight needs a seed");
    double expected_total = 0.0;
    for (const WeightDistribution& d : inst.dists) expected_total += d.mean();
    const MonteCarloEstimate e = expected_max_estimate(g, inst.dists, p, samples, *seed);
    r.normalized_max_part_weight = p.k() * e.value / expected_total;
    r.normalized_max_std_error = p.k() * e.std_error / expected_total;
    r.samples = samples;
  }
  return r;
}

namespace {

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", fraction * 100.0);
  return buf;
}

}  // namespace

void write_report(std::ostream& out, const SolveReport& r) {
  out << "algorithm: " << r.algorithm << '\n'
      << "parts: " << r.k << '\n'
      << "cut edges: " << r.cut_edges << '\n'
      << "max deviation from mean: " << percent(r.max_dev) << " (eps "
      << format_double(r.eps) << ", " << (r.balanced ? "balanced" : "NOT balanced") << ")\n"
      << "contiguous: " << (r.contiguous ? "yes" : "NO") << '\n'
      << "normalized max part weight: " << format_double(r.normalized_max_part_weight);
  if (r.samples > 0) out << " +- " << format_double(r.normalized_max_std_error) << " (" << r.samples << " samples)";
  out << '\n';
  if (r.wall_ms > 0.0) out << "run time: " << format_double(r.wall_ms) << " ms\n";
  for (const auto& [key, value] : r.extra) out << key << ": " << value << '\n';

  out << "[metrics]\n"
      << "algorithm=" << r.algorithm << '\n'
      << "k=" << r.k << '\n'
      << "eps=" << format_double(r.eps) << '\n'
      << "cut_edges=" << r.cut_edges << '\n'
      << "perimeters=";
  for (std::size_t i = 0; i < r.perimeters.size(); ++i) out << (i ? "," : "") << r.perimeters[i];
  out << '\n'
      << "max_dev=" << format_double(r.max_dev) << '\n'
      << "balanced=" << (r.balanced ? 1 : 0) << '\n'
      << "contiguous=" << (r.contiguous ? 1 : 0) << '\n'
      << "normalized_max_part_weight=" << format_double(r.normalized_max_part_weight) << '\n'
      << "normalized_max_std_error=" << format_double(r.normalized_max_std_error) << '\n'
      << "samples=" << r.samples << '\n'
      << "wall_ms=" << format_double(r.wall_ms) << '\n'
      << "seed=" << (r.seed ? std::to_string(*r.seed) : "none") << '\n';
  for (const auto& [key, value] : r.extra) out << key << '=' << value << '\n';
}

std::map<std::string, std::string> parse_report_block(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  bool inside = false;
  while (std::getline(in, line)) {
    if (line == "[metrics]") {
      inside = true;
      continue;
    }
    if (!inside) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  if (!inside) throw Error("report has no [metrics] block");
  return out;
}

}  // namespace gridpart
