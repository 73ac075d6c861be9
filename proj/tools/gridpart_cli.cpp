// gridpart: generate, partition, evaluate and render grid instances.
// Exit codes: 0 success, 1 error, 2 infeasible.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gridpart/anneal.hpp"
#include "gridpart/dp.hpp"
#include "gridpart/io.hpp"
#include "gridpart/kmeans.hpp"
#include "gridpart/render.hpp"
#include "gridpart/report.hpp"
#include "gridpart/stochastic.hpp"
#include "gridpart/striping.hpp"
#include "gridpart/synth.hpp"

using namespace gridpart;

namespace {

constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

struct Infeasible : Error {
  using Error::Error;
};

struct GenerateArgs {
  std::string kind = "uniform";
  std::string topology = "square";
  int rows = 0;
  int cols = 0;
  std::optional<std::uint64_t> seed;
  double bernoulli_p = 0.02;
  int iters = 40;
  int support_cap = 250;
  std::optional<int> k;
  std::optional<double> eps;
  std::string out;
};

struct PartitionArgs {
  std::string instance;
  std::string algo;
  std::optional<int> k;
  std::optional<double> eps;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string report;
  int stripe_height = 0;
  std::string init;
  double temperature = 0.5;
  double cooling = 1.0;
  std::int64_t max_iters = 0;
  std::int64_t no_improve = 0;
  std::string neighborhood = "combinatorial";
  int max_run = 4;
  int restarts = 10;
  int i_min = 0;
  int i_max = 13;
  bool balanced_stochastic = false;
  int samples = 0;
};

struct EvaluateArgs {
  std::string instance;
  std::string partition;
  std::optional<double> eps;
  int samples = 0;
  std::optional<std::uint64_t> seed;
  std::string report;
};

struct RenderArgs {
  std::string instance;
  std::string partition;
  std::string out;
  double cell_size = 20.0;
  bool shade = false;
};

int default_stripe_height(const GridGraph& g, int k) {
  const int s = static_cast<int>(std::lround(std::sqrt(double(g.num_vertices()) / k)));
  return std::clamp(s, 1, g.rows());
}

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed, const std::string& what) {
  if (!seed) throw Error(what + " is randomized; pass --seed");
  return *seed;
}

void emit_report(const SolveReport& r, const std::string& path) {
  if (path.empty() || path == "-") {
    write_report(std::cout, r);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_report(out, r);
}

int run_generate(const GenerateArgs& a) {
  const Topology topology = parse_topology(a.topology);
  if (a.rows < 1 || a.cols < 1) throw Error("--rows and --cols must be positive");
  std::vector<double> weights;
  std::vector<WeightDistribution> dists;
  if (a.kind == "uniform") {
    weights.assign(static_cast<std::size_t>(a.rows) * a.cols, 1.0);
  } else if (a.kind == "smoothed") {
    weights = sparse_smoothed_field(a.rows, a.cols, a.bernoulli_p, a.iters, require_seed(a.seed, "smoothed"));
  } else if (a.kind == "gev") {
    dists = random_gev_instance(a.rows, a.cols, require_seed(a.seed, "gev"), a.support_cap);
    for (const WeightDistribution& d : dists) weights.push_back(d.mean());
  } else if (a.kind == "gev-workload") {
    const std::uint64_t seed = require_seed(a.seed, "gev-workload");
    const std::vector<double> field = sparse_smoothed_field(a.rows, a.cols, a.bernoulli_p, a.iters, seed);
    dists = workload_gev_instance(field, seed + 1, a.support_cap);
    for (const WeightDistribution& d : dists) weights.push_back(d.mean());
  } else {
    throw Error("unknown --kind '" + a.kind + "' (uniform, smoothed, gev, gev-workload)");
  }
  const Instance inst{GridGraph(topology, a.rows, a.cols, std::move(weights)), a.k, a.eps, std::move(dists)};
  if (a.out.empty() || a.out == "-") {
    write_instance(std::cout, inst);
  } else {
    save_instance(a.out, inst);
  }
  return 0;
}

Partition solve_dp(const GridGraph& g, int k, double eps, int stripe_height, SolveReport& r) {
  const int s = stripe_height > 0 ? stripe_height : default_stripe_height(g, k);
  const VertexOrdering ord = snake_ordering(g, s);
  DpResult dp = dynamic_partition(g, ord, k, BalanceMode::two_sided(eps));
  r.extra.push_back({"stripe_height", std::to_string(s)});
  if (!dp.feasible()) {
    int t = 0;
    while (t + 1 <= k && dp.furthest_prefix[t + 1] >= 0) ++t;
    throw Infeasible("no balanced partition consistent with the ordering: at most " + std::to_string(t) +
                     " of " + std::to_string(k) + " parts fit, covering the first " +
                     std::to_string(dp.furthest_prefix[t]) + " of " + std::to_string(g.num_vertices()) +
                     " vertices");
  }
  if (!dp.disconnected_parts.empty()) {
    r.extra.push_back({"disconnected_intervals", std::to_string(dp.disconnected_parts.size())});
  }
  return *dp.partition;
}

int run_partition(const PartitionArgs& a) {
  const Instance inst = load_instance(a.instance);
  const GridGraph& g = inst.graph;
  const int k = a.k ? *a.k : inst.k ? *inst.k : throw Error("pass --k or set k in the instance header");
  const double eps = a.eps ? *a.eps : inst.eps ? *inst.eps : 0.05;
  SolveReport meta;
  const auto start = std::chrono::steady_clock::now();
  std::optional<Partition> result;

  if (a.algo == "stripe") {
    for (double w : g.weights()) {
      if (w != g.weight(0)) throw Error("stripe needs uniform weights");
    }
    result = phi_cautious_striping(g, k);
  } else if (a.algo == "dp") {
    result = solve_dp(g, k, eps, a.stripe_height, meta);
  } else if (a.algo == "stochastic") {
    if (inst.dists.empty()) throw Error("stochastic needs an instance with a DISTS section");
    const int s = a.stripe_height > 0 ? a.stripe_height : default_stripe_height(g, k);
    const StochasticResult sr = stochastic_partition(g, inst.dists, snake_ordering(g, s), k, a.i_min, a.i_max,
                                                     a.balanced_stochastic ? std::optional<double>(eps) : std::nullopt);
    if (!sr.feasible()) {
      std::string why;
      for (const StochasticAttempt& at : sr.attempts) why += "\n  i=" + std::to_string(at.i) + ": " + at.reason;
      throw Infeasible("no halving step in [" + std::to_string(a.i_min) + ", " + std::to_string(a.i_max) +
                       "] succeeded:" + why);
    }
    meta.extra.push_back({"stripe_height", std::to_string(s)});
    meta.extra.push_back({"i_star", std::to_string(sr.i_star)});
    meta.extra.push_back({"eps_used", format_double(sr.eps_used)});
    result = *sr.partition;
  } else if (a.algo == "anneal") {
    AnnealConfig cfg;
    cfg.temperature = a.temperature;
    cfg.cooling = a.cooling;
    cfg.max_iters = a.max_iters;
    cfg.no_improve_window = a.no_improve;
    cfg.max_run = a.max_run;
    cfg.eps = eps;
    cfg.seed = require_seed(a.seed, "anneal");
    if (a.neighborhood == "one-swap") {
      cfg.neighborhood = Neighborhood::OneSwap;
    } else if (a.neighborhood == "combinatorial") {
      cfg.neighborhood = Neighborhood::Combinatorial;
    } else {
      throw Error("unknown --neighborhood '" + a.neighborhood + "' (one-swap, combinatorial)");
    }
    const Partition init = a.init.empty() ? solve_dp(g, k, eps, a.stripe_height, meta) : load_partition(a.init, g);
    if (init.k() != k) throw Error("--init has " + std::to_string(init.k()) + " parts, expected " + std::to_string(k));
    const AnnealResult ar = anneal(g, init, cfg);
    meta.extra.push_back({"initial_cut", std::to_string(ar.initial_cut)});
    meta.extra.push_back({"iterations", std::to_string(ar.iterations)});
    meta.extra.push_back({"accepted", std::to_string(ar.accepted)});
    result = ar.best;
  } else if (a.algo == "kmeans") {
    KMeansConfig cfg;
    cfg.k = k;
    cfg.restarts = a.restarts;
    cfg.seed = require_seed(a.seed, "kmeans");
    result = weighted_kmeans(g, cfg).partition;
  } else {
    throw Error("unknown --algo '" + a.algo + "' (stripe, dp, stochastic, anneal, kmeans)");
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  if (!a.out.empty()) save_partition(a.out, g, *result);
  std::optional<std::uint64_t> eval_seed = a.seed;
  if (a.samples > 0 && !inst.dists.empty()) eval_seed = require_seed(a.seed, "sampling");
  SolveReport r = evaluate_partition(inst, *result, eps, a.samples, eval_seed);
  r.algorithm = a.algo;
  r.wall_ms = ms;
  r.extra = meta.extra;
  emit_report(r, a.report);
  return 0;
}

int run_evaluate(const EvaluateArgs& a) {
  const Instance inst = load_instance(a.instance);
  const Partition p = load_partition(a.partition, inst.graph);
  const double eps = a.eps ? *a.eps : inst.eps ? *inst.eps : 0.05;
  std::optional<std::uint64_t> seed = a.seed;
  if (a.samples > 0 && !inst.dists.empty()) seed = require_seed(a.seed, "sampling");
  SolveReport r = evaluate_partition(inst, p, eps, a.samples, seed);
  r.algorithm = "evaluate";
  emit_report(r, a.report);
  return 0;
}

int run_render(const RenderArgs& a) {
  const Instance inst = load_instance(a.instance);
  const Partition p = load_partition(a.partition, inst.graph);
  RenderOptions opts;
  opts.cell_size = a.cell_size;
  opts.shade_weights = a.shade;
  const std::string svg = render_svg(inst.graph, p, opts);
  if (a.out.empty() || a.out == "-") {
    std::cout << svg;
  } else {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw Error("cannot open '" + a.out + "' for writing");
    out << svg;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balanced contiguous min-cut partitioning of square and hexagonal grids"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic instance file");
  generate->add_option("--kind", gen.kind, "uniform, smoothed, gev or gev-workload")->capture_default_str();
  generate->add_option("--topology", gen.topology, "square or hex")->capture_default_str();
  generate->add_option("--rows,-m", gen.rows, "Grid rows")->required();
  generate->add_option("--cols,-n", gen.cols, "Grid columns")->required();
  generate->add_option("--seed", gen.seed, "Random seed (required for random kinds)");
  generate->add_option("--bernoulli-p", gen.bernoulli_p, "Density of the sparse field")->capture_default_str();
  generate->add_option("--smooth-iters", gen.iters, "Smoothing rounds")->capture_default_str();
  generate->add_option("--support-cap", gen.support_cap, "Atoms per GEV distribution")->capture_default_str();
  generate->add_option("--k", gen.k, "Default k stored in the header");
  generate->add_option("--eps", gen.eps, "Default eps stored in the header");
  generate->add_option("--out,-o", gen.out, "Output path (default stdout)");

  PartitionArgs part;
  auto* partition = app.add_subcommand("partition", "Partition an instance");
  partition->add_option("--instance,-i", part.instance, "Instance file")->required();
  partition->add_option("--algo,-a", part.algo, "stripe, dp, stochastic, anneal or kmeans")->required();
  partition->add_option("--k", part.k, "Number of parts");
  partition->add_option("--eps", part.eps, "Balance tolerance");
  partition->add_option("--seed", part.seed, "Random seed (anneal, kmeans, sampling)");
  partition->add_option("--out,-o", part.out, "Partition output path");
  partition->add_option("--report,-r", part.report, "Report path (default stdout)");
  partition->add_option("--stripe-height", part.stripe_height, "Snake stripe height (default round(sqrt(mn/k)))");
  partition->add_option("--init", part.init, "Warm start partition for anneal (default: dp)");
  partition->add_option("--temperature", part.temperature, "Anneal temperature")->capture_default_str();
  partition->add_option("--cooling", part.cooling, "Temperature factor per iteration")->capture_default_str();
  partition->add_option("--max-iters", part.max_iters, "Anneal iterations (default 50|V|)");
  partition->add_option("--no-improve", part.no_improve, "Stop after this many iterations without improvement (default 5|V|)");
  partition->add_option("--neighborhood", part.neighborhood, "one-swap or combinatorial")->capture_default_str();
  partition->add_option("--max-run", part.max_run, "Largest block moved at once")->capture_default_str();
  partition->add_option("--restarts", part.restarts, "k-means restarts")->capture_default_str();
  partition->add_option("--i-min", part.i_min, "First halving step")->capture_default_str();
  partition->add_option("--i-max", part.i_max, "Last halving step")->capture_default_str();
  partition->add_flag("--balanced-stochastic", part.balanced_stochastic,
                      "Also keep transformed part weights within (1 +- eps) of their mean");
  partition->add_option("--samples", part.samples, "Joint draws for the normalized max part weight")->capture_default_str();

  EvaluateArgs eval;
  auto* evaluate = app.add_subcommand("evaluate", "Recompute the metrics of a partition");
  evaluate->add_option("--instance,-i", eval.instance, "Instance file")->required();
  evaluate->add_option("--partition,-p", eval.partition, "Partition file")->required();
  evaluate->add_option("--eps", eval.eps, "Balance tolerance");
  evaluate->add_option("--samples", eval.samples, "Joint draws for the normalized max part weight")->capture_default_str();
  evaluate->add_option("--seed", eval.seed, "Random seed for sampling");
  evaluate->add_option("--report,-r", eval.report, "Report path (default stdout)");

  RenderArgs ren;
  auto* render = app.add_subcommand("render", "Draw a partition as SVG");
  render->add_option("--instance,-i", ren.instance, "Instance file")->required();
  render->add_option("--partition,-p", ren.partition, "Partition file")->required();
  render->add_option("--out,-o", ren.out, "SVG path (default stdout)");
  render->add_option("--cell-size", ren.cell_size, "Cell size in px")->capture_default_str();
  render->add_flag("--shade", ren.shade, "Shade cells by weight");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*partition) return run_partition(part);
    if (*evaluate) return run_evaluate(eval);
    if (*render) return run_render(ren);
  } catch (const Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
