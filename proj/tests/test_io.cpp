#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gridpart/io.hpp"
#include "gridpart/render.hpp"
#include "gridpart/report.hpp"
#include "gridpart/striping.hpp"

using namespace gridpart;

namespace {

Instance random_instance(Rng& rng) {
  const int m = 1 + static_cast<int>(rng.below(6)), n = 1 + static_cast<int>(rng.below(6));
  std::vector<double> w(m * n);
  for (double& x : w) {
    switch (rng.below(4)) {
      case 0: x = 0.0; break;
      case 1: x = static_cast<double>(rng.below(100)); break;
      case 2: x = rng.uniform01() * std::pow(10.0, rng.uniform(-8, 8)); break;
      default: x = rng.uniform01();
    }
  }
  Instance inst{GridGraph(rng.bernoulli(0.5) ? Topology::Hex : Topology::Square, m, n, w), {}, {}, {}};
  if (rng.bernoulli(0.5)) inst.k = 1 + static_cast<int>(rng.below(m * n));
  if (rng.bernoulli(0.5)) inst.eps = rng.uniform01();
  if (rng.bernoulli(0.3)) {
    for (int v = 0; v < m * n; ++v) {
      const int atoms = 1 + static_cast<int>(rng.below(4));
      std::vector<Atom> s;
      double total = 0.0;
      for (int j = 0; j < atoms; ++j) {
        s.push_back({rng.uniform(0, 300), rng.uniform(0.01, 1)});
        total += s.back().prob;
      }
      for (Atom& a : s) a.prob /= total;
      inst.dists.emplace_back(s);
    }
  }
  return inst;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void check_golden(const std::string& name, const std::string& actual) {
  const std::string path = std::string(GRIDPART_GOLDEN_DIR) + "/" + name;
  if (std::getenv("GRIDPART_UPDATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << actual;
  }
  const std::string expected = read_file(path);
  REQUIRE_MESSAGE(!expected.empty(), "missing golden file " << path);
  CHECK(actual == expected);
}

Instance parse(const std::string& text) {
  std::istringstream in(text);
  return read_instance(in);
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("numbers round-trip bit for bit") {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.uniform01() * std::pow(10.0, rng.uniform(-300, 300));
    CHECK(parse_double(format_double(x)) == x);
  }
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.1");
  CHECK_THROWS_AS(parse_double("abc"), Error);
  CHECK_THROWS_AS(parse_double("1.5x"), Error);
  CHECK_THROWS_AS(parse_double("inf"), Error);
}

TEST_CASE("instance files round-trip") {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const Instance inst = random_instance(rng);
    std::ostringstream out;
    write_instance(out, inst);
    const Instance back = parse(out.str());
    CHECK(back == inst);
    std::ostringstream again;
    write_instance(again, back);
    CHECK(again.str() == out.str());
  }
}

TEST_CASE("instance parsing") {
  const Instance a = parse("# comment\n\nGRID hex 2 3 k 2 eps 0.1\n1 2 3\n\n4 5 6\n");
  CHECK(a.graph.topology() == Topology::Hex);
  CHECK(a.graph.rows() == 2);
  CHECK(a.graph.cols() == 3);
  CHECK(a.k == 2);
  CHECK(a.eps == 0.1);
  CHECK(a.graph.weight(5) == 6.0);
  CHECK(a.dists.empty());
  const Instance d = parse("GRID square 1 2\n1 2\nDISTS\nv 0 0\natom 1 1\nv 0 1\natom 0 0.5\natom 4 0.5\n");
  REQUIRE(d.dists.size() == 2);
  CHECK(d.dists[1].mean() == 2.0);
  for (const char* bad : {"", "GRID tri 1 1\n1\n", "GRID square 0 2\n", "GRID square 2 2\n1 2\n3\n",
                          "GRID square 1 2\n1 2\n3 4\n", "GRID square 1 1\n-1\n", "GRID square 1 1\nx\n",
                          "GRID square 1 1 k\n1\n", "GRID square 1 1 q 3\n1\n",
                          "GRID square 1 1\n1\nDISTS\natom 1 1\n",
                          "GRID square 1 1\n1\nDISTS\nv 0 0\natom 1 0.5\n",
                          "GRID square 1 2\n1 1\nDISTS\nv 0 0\natom 1 1\n",
                          "GRID square 1 1\n1\nDISTS\nv 0 0\natom 1 1\nv 0 0\natom 1 1\n",
                          "GRID square 1 1\n1\nDISTS\nv 3 0\natom 1 1\n"}) {
    CHECK_THROWS_AS(parse(bad), Error);
  }
}

TEST_CASE("partition files") {
  const auto g = GridGraph::uniform(Topology::Square, 2, 3);
  const Partition p(g, {0, 0, 1, 2, 2, 1}, 3);
  std::ostringstream out;
  write_partition(out, g, p);
  CHECK(out.str() == "1 1 2\n3 3 2\n");
  std::istringstream in(out.str());
  const Partition back = read_partition(in, g);
  CHECK(back.k() == 3);
  CHECK(std::vector<int>(back.assignment().begin(), back.assignment().end()) ==
        std::vector<int>{0, 0, 1, 2, 2, 1});
  for (const char* bad : {"1 1 2\n", "1 1 2\n3 3\n", "0 1 1\n1 1 1\n", "1 1 3\n3 3 3\n", "1 a 1\n1 1 1\n",
                          "1 1 1\n1 1 1\n1 1 1\n"}) {
    std::istringstream b(bad);
    CHECK_THROWS_AS(read_partition(b, g), Error);
  }
}

TEST_CASE("evaluation recomputes the metrics") {
  const Instance inst{GridGraph::uniform(Topology::Square, 4, 15), 4, 0.0, {}};
  const Partition p = phi_cautious_striping(inst.graph, 4);
  const SolveReport r = evaluate_partition(inst, p, 0.0);
  CHECK(r.k == 4);
  CHECK(r.cut_edges == (16 + 18 + 18 + 16 - 2 * (4 + 15)) / 2);
  CHECK(r.perimeters == std::vector<std::int64_t>{16, 18, 18, 16});
  CHECK(r.max_dev == 0.0);
  CHECK(r.balanced);
  CHECK(r.contiguous);
  CHECK(r.normalized_max_part_weight == 1.0);
  const Partition one(inst.graph, std::vector<int>(60, 0), 1);
  CHECK(evaluate_partition(inst, one, 0.0).normalized_max_part_weight == 1.0);
  // unequal parts: normalized max = 1 + max deviation
  const Instance w{GridGraph(Topology::Square, 1, 4, {1, 2, 3, 2}), {}, {}, {}};
  const SolveReport u = evaluate_partition(w, Partition(w.graph, {0, 0, 1, 1}, 2), 0.5);
  CHECK(u.normalized_max_part_weight == doctest::Approx(1 + u.max_dev));
  CHECK(u.max_dev == doctest::Approx(0.25));
  // distributions need a seed
  Instance s = w;
  for (int v = 0; v < 4; ++v) s.dists.push_back(WeightDistribution::point(w.graph.weight(v)));
  CHECK_THROWS_AS(evaluate_partition(s, Partition(w.graph, {0, 0, 1, 1}, 2), 0.5, 10), Error);
  const SolveReport sampled = evaluate_partition(s, Partition(w.graph, {0, 0, 1, 1}, 2), 0.5, 10, 1);
  CHECK(sampled.normalized_max_part_weight == doctest::Approx(1.25));
  CHECK(sampled.samples == 10);
}

TEST_CASE("report block round-trips") {
  SolveReport r;
  r.algorithm = "dp";
  r.k = 3;
  r.eps = 0.05;
  r.cut_edges = 17;
  r.perimeters = {10, 12, 14};
  r.max_dev = 0.0123456789;
  r.balanced = true;
  r.contiguous = true;
  r.normalized_max_part_weight = 1.0123456789;
  r.seed = 42;
  r.extra = {{"stripe_height", "3"}};
  std::ostringstream out;
  write_report(out, r);
  CHECK(out.str().find("max deviation from mean: 1.23% (eps 0.05, balanced)") != std::string::npos);
  std::istringstream in(out.str());
  const auto kv = parse_report_block(in);
  CHECK(kv.at("algorithm") == "dp");
  CHECK(kv.at("k") == "3");
  CHECK(kv.at("cut_edges") == "17");
  CHECK(kv.at("perimeters") == "10,12,14");
  CHECK(parse_double(kv.at("max_dev")) == r.max_dev);
  CHECK(parse_double(kv.at("normalized_max_part_weight")) == r.normalized_max_part_weight);
  CHECK(kv.at("seed") == "42");
  CHECK(kv.at("contiguous") == "1");
}

TEST_CASE("svg golden files") {
  const auto single = GridGraph::uniform(Topology::Square, 1, 1);
  const std::string one = render_svg(single, Partition(single, {0}, 1));
  CHECK(one.find("<line") == std::string::npos);
  CHECK(one.find("<polygon") == one.rfind("<polygon"));
  check_golden("single.svg", one);

  const auto strip = GridGraph::uniform(Topology::Square, 4, 15);
  check_golden("stripe_4x15.svg", render_svg(strip, phi_cautious_striping(strip, 4)));

  const GridGraph hex(Topology::Hex, 3, 4, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
  const Partition hp(hex, {0, 0, 1, 1, 0, 0, 1, 1, 2, 2, 2, 2}, 3);
  check_golden("hex_3x4.svg", render_svg(hex, hp, {12.0, true}));
  CHECK(render_svg(hex, hp, {12.0, true}) == render_svg(hex, hp, {12.0, true}));
}

TEST_CASE("hexagon geometry") {
  const auto g = GridGraph::uniform(Topology::Hex, 2, 3);
  const std::string svg = render_svg(g, Partition(g, {0, 0, 0, 1, 1, 1}, 2), {10.0, false});
  std::vector<std::vector<std::array<double, 2>>> polys;
  for (std::size_t pos = svg.find("points=\""); pos != std::string::npos; pos = svg.find("points=\"", pos + 1)) {
    const std::size_t end = svg.find('"', pos + 8);
    std::istringstream pts(svg.substr(pos + 8, end - pos - 8));
    std::string pair;
    polys.emplace_back();
    while (pts >> pair) {
      const auto comma = pair.find(',');
      polys.back().push_back({std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1))});
    }
  }
  REQUIRE(polys.size() == 6);
  const double h = std::sqrt(3.0) * 10.0;
  for (int v = 0; v < 6; ++v) {
    REQUIRE(polys[v].size() == 6);
    double cx = 0, cy = 0;
    for (auto& p : polys[v]) cx += p[0] / 6, cy += p[1] / 6;
    const int r = v / 3, c = v % 3;
    CHECK(cx == doctest::Approx(10.0 + 15.0 * c).epsilon(1e-3));
    CHECK(cy == doctest::Approx(h / 2 + r * h + (c % 2 ? h / 2 : 0)).epsilon(1e-3));
    for (auto& p : polys[v]) CHECK(std::hypot(p[0] - cx, p[1] - cy) == doctest::Approx(10.0).epsilon(1e-3));
  }
  // three boundary sides between the rows, counted once each
  std::size_t lines = 0;
  for (std::size_t pos = svg.find("<line"); pos != std::string::npos; pos = svg.find("<line", pos + 1)) ++lines;
  CHECK(lines == static_cast<std::size_t>(cut_count(g, Partition(g, {0, 0, 0, 1, 1, 1}, 2))));
}

}  // TEST_SUITE
