#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gridpart/io.hpp"

namespace gridpart {

struct SolveReport {
  std::string algorithm;
  int k = 0;
  double eps = 0.0;
  std::int64_t cut_edges = 0;
  std::vector<std::int64_t> perimeters;
  double max_dev = 0.0;
  bool balanced = false;
  bool contiguous = false;
  // k * E[max_i W_i] / sum_v E[X_v]; exact for deterministic weights,
  // a Monte-Carlo mean when the instance carries distributions.
  double normalized_max_part_weight = 0.0;
  double normalized_max_std_error = 0.0;
  int samples = 0;
  double wall_ms = 0.0;
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, std::string>> extra;
};

// Recomputes every metric of p from scratch. `samples` joint draws
// (seeded by `seed`) are used only when the instance has distributions.
SolveReport evaluate_partition(const Instance& inst, const Partition& p, double eps,
                               int samples = 0, std::optional<std::uint64_t> seed = std::nullopt);

// Human-readable summary followed by a "[metrics]" key=value block.
void write_report(std::ostream& out, const SolveReport& r);

// Reads the key=value block written by write_report.
std::map<std::string, std::string> parse_report_block(std::istream& in);

}  // namespace gridpart
