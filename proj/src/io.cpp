#include "gridpart/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace gridpart {

namespace {

// Reads the next meaningful line, splitting it into tokens.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      std::istringstream ss(line);
      tokens.clear();
      for (std::string t; ss >> t;) tokens.push_back(t);
      if (tokens.empty() || tokens.front().front() == '#') continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error("line " + std::to_string(line_no_) + ": " + what);
  }

  int line_no() const { return line_no_; }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

int parse_int(std::string_view s) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error("expected an integer, got '" + std::string(s) + "'");
  }
  return value;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return in;
}

}  // namespace

bool Instance::operator==(const Instance& o) const {
  const GridGraph& a = graph;
  const GridGraph& b = o.graph;
  if (a.topology() != b.topology() || a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (!std::equal(a.weights().begin(), a.weights().end(), b.weights().begin())) return false;
  if (k != o.k || eps != o.eps || dists.size() != o.dists.size()) return false;
  for (std::size_t v = 0; v < dists.size(); ++v) {
    const auto x = dists[v].support();
    const auto y = o.dists[v].support();
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].value != y[i].value || x[i].prob != y[i].prob) return false;
    }
  }
  return true;
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, ptr);
}

double parse_double(std::string_view s) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    throw Error("expected a finite number, got '" + std::string(s) + "'");
  }
  return value;
}

void write_instance(std::ostream& out, const Instance& inst) {
  const GridGraph& g = inst.graph;
  out << "GRID " << to_string(g.topology()) << ' ' << g.rows() << ' ' << g.cols();
  if (inst.k) out << " k " << *inst.k;
  if (inst.eps) out << " eps " << format_double(*inst.eps);
  out << '\n';
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      if (c > 0) out << ' ';
      out << format_double(g.weight(r * g.cols() + c));
    }
    out << '\n';
  }
  if (!inst.dists.empty()) {
    out << "DISTS\n";
    for (int v = 0; v < g.num_vertices(); ++v) {
      const Cell c = g.cell(v);
      out << "v " << c.row << ' ' << c.col << '\n';
      for (const Atom& a : inst.dists[v].support()) {
        out << "atom " << format_double(a.value) << ' ' << format_double(a.prob) << '\n';
      }
    }
  }
}

Instance read_instance(std::istream& in) {
  LineReader reader(in);
  std::vector<std::string> tok;
  if (!reader.next(tok)) throw Error("empty instance file");
  if (tok.size() < 4 || tok[0] != "GRID") reader.fail("expected 'GRID <square|hex> <m> <n>'");
  Topology topology;
  int m = 0, n = 0;
  std::optional<int> k;
  std::optional<double> eps;
  try {
    topology = parse_topology(tok[1]);
    m = parse_int(tok[2]);
    n = parse_int(tok[3]);
    if (m < 1 || n < 1) throw Error("grid dimensions must be positive");
    if (tok.size() % 2 != 0) throw Error("header options come in key/value pairs");
    for (std::size_t i = 4; i < tok.size(); i += 2) {
      if (tok[i] == "k") {
        k = parse_int(tok[i + 1]);
      } else if (tok[i] == "eps") {
        eps = parse_double(tok[i + 1]);
      } else {
        throw Error("unknown header option '" + tok[i] + "'");
      }
    }
  } catch (const Error& e) {
    reader.fail(e.what());
  }

  std::vector<double> weights;
  weights.reserve(static_cast<std::size_t>(m) * n);
  for (int r = 0; r < m; ++r) {
    if (!reader.next(tok)) reader.fail("expected " + std::to_string(m) + " weight rows, got " + std::to_string(r));
    if (static_cast<int>(tok.size()) != n) {
      reader.fail("expected " + std::to_string(n) + " weights, got " + std::to_string(tok.size()));
    }
    try {
      for (const std::string& t : tok) weights.push_back(parse_double(t));
    } catch (const Error& e) {
      reader.fail(e.what());
    }
  }
  Instance inst{GridGraph(topology, m, n, std::move(weights)), k, eps, {}};

  if (!reader.next(tok)) return inst;
  if (tok.size() != 1 || tok[0] != "DISTS") reader.fail("expected 'DISTS' or end of file");
  std::vector<std::vector<Atom>> atoms(static_cast<std::size_t>(m) * n);
  std::vector<char> seen(atoms.size(), 0);
  int current = -1;
  try {
    while (reader.next(tok)) {
      if (tok[0] == "v" && tok.size() == 3) {
        current = inst.graph.index({parse_int(tok[1]), parse_int(tok[2])});
        if (seen[current]) throw Error("vertex listed twice in DISTS");
        seen[current] = 1;
      } else if (tok[0] == "atom" && tok.size() == 3) {
        if (current < 0) throw Error("atom before any 'v' line");
        atoms[current].push_back({parse_double(tok[1]), parse_double(tok[2])});
      } else {
        throw Error("expected 'v <row> <col>' or 'atom <value> <prob>'");
      }
    }
  } catch (const Error& e) {
    reader.fail(e.what());
  }
  for (std::size_t v = 0; v < atoms.size(); ++v) {
    if (!seen[v]) throw Error("DISTS has no entry for vertex " + std::to_string(v));
    inst.dists.emplace_back(std::move(atoms[v]));
  }
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in = open_in(path);
  return read_instance(in);
}

void save_instance(const std::string& path, const Instance& inst) {
  std::ofstream out = open_out(path);
  write_instance(out, inst);
  if (!out) throw Error("write to '" + path + "' failed");
}

void write_partition(std::ostream& out, const GridGraph& g, const Partition& p) {
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      if (c > 0) out << ' ';
      out << p.part_of(r * g.cols() + c) + 1;
    }
    out << '\n';
  }
}

Partition read_partition(std::istream& in, const GridGraph& g) {
  LineReader reader(in);
  std::vector<std::string> tok;
  std::vector<int> assignment;
  assignment.reserve(g.num_vertices());
  int k = 0;
  for (int r = 0; r < g.rows(); ++r) {
    if (!reader.next(tok)) reader.fail("partition has fewer than " + std::to_string(g.rows()) + " rows");
    if (static_cast<int>(tok.size()) != g.cols()) {
      reader.fail("expected " + std::to_string(g.cols()) + " part ids, got " + std::to_string(tok.size()));
    }
    for (const std::string& t : tok) {
      int id = 0;
      try {
        id = parse_int(t);
      } catch (const Error& e) {
        reader.fail(e.what());
      }
      if (id < 1) reader.fail("part ids start at 1");
      k = std::max(k, id);
      assignment.push_back(id - 1);
    }
  }
  if (reader.next(tok)) reader.fail("partition has more than " + std::to_string(g.rows()) + " rows");
  return Partition(g, std::move(assignment), k);
}

Partition load_partition(const std::string& path, const GridGraph& g) {
  std::ifstream in = open_in(path);
  return read_partition(in, g);
}

void save_partition(const std::string& path, const GridGraph& g, const Partition& p) {
  std::ofstream out = open_out(path);
  write_partition(out, g, p);
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace gridpart
