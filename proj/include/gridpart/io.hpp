#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridpart/distribution.hpp"
#include "gridpart/grid.hpp"

namespace gridpart {

// Instance file:
//   GRID <square|hex> <m> <n> [k <k>] [eps <eps>]
//   m lines of n weights
//   [DISTS
//    v <row> <col>
//    atom <value> <prob>   (repeated)
//    ...one block per vertex]
// Blank lines and lines starting with '#' are ignored.
struct Instance {
  GridGraph graph;
  std::optional<int> k;
  std::optional<double> eps;
  std::vector<WeightDistribution> dists;  // empty, or one per vertex

  bool operator==(const Instance& o) const;
};

// Shortest decimal form that reads back to the same double.
std::string format_double(double x);
double parse_double(std::string_view s);

void write_instance(std::ostream& out, const Instance& inst);
Instance read_instance(std::istream& in);
Instance load_instance(const std::string& path);
void save_instance(const std::string& path, const Instance& inst);

// Partition file: m lines of n part ids, 1-based. k is the largest id.
void write_partition(std::ostream& out, const GridGraph& g, const Partition& p);
Partition read_partition(std::istream& in, const GridGraph& g);
Partition load_partition(const std::string& path, const GridGraph& g);
void save_partition(const std::string& path, const GridGraph& g, const Partition& p);

}  // namespace gridpart
