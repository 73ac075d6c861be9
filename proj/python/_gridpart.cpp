#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gridpart/anneal.hpp"
#include "gridpart/distribution.hpp"
#include "gridpart/dp.hpp"
#include "gridpart/grid.hpp"
#include "gridpart/io.hpp"
#include "gridpart/kmeans.hpp"
#include "gridpart/render.hpp"
#include "gridpart/report.hpp"
#include "gridpart/stochastic.hpp"
#include "gridpart/striping.hpp"
#include "gridpart/synth.hpp"

namespace py = pybind11;
using namespace gridpart;

namespace {

template <class T>
std::vector<T> to_vector(std::span<const T> s) {
  return {s.begin(), s.end()};
}

Topology topology_arg(const std::string& s) { return parse_topology(s); }

}  // namespace

PYBIND11_MODULE(_gridpart, m) {
  m.doc() = "Balanced contiguous min-cut partitioning of weighted grid graphs";

  py::register_exception<Error>(m, "GridpartError", PyExc_ValueError);

  py::class_<GridGraph>(m, "GridGraph")
      .def(py::init([](const std::string& topology, int rows, int cols, std::vector<double> weights) {
             return GridGraph(topology_arg(topology), rows, cols, std::move(weights));
           }),
           py::arg("topology"), py::arg("rows"), py::arg("cols"), py::arg("weights"))
      .def_static(
          "uniform",
          [](const std::string& topology, int rows, int cols, double weight) {
            return GridGraph::uniform(topology_arg(topology), rows, cols, weight);
          },
          py::arg("topology"), py::arg("rows"), py::arg("cols"), py::arg("weight") = 1.0)
      .def_property_readonly("topology", [](const GridGraph& g) { return std::string(to_string(g.topology())); })
      .def_property_readonly("rows", &GridGraph::rows)
      .def_property_readonly("cols", &GridGraph::cols)
      .def_property_readonly("num_vertices", &GridGraph::num_vertices)
      .def_property_readonly("num_edges", &GridGraph::num_edges)
      .def_property_readonly("total_weight", &GridGraph::total_weight)
      .def_property_readonly("weights", [](const GridGraph& g) { return to_vector(g.weights()); })
      .def("index", [](const GridGraph& g, int row, int col) { return g.index({row, col}); })
      .def("cell", [](const GridGraph& g, int v) {
        const Cell c = g.cell(v);
        return py::make_tuple(c.row, c.col);
      })
      .def("neighbors", [](const GridGraph& g, int v) {
        if (v < 0 || v >= g.num_vertices()) throw Error("vertex out of range");
        return to_vector(g.neighbors(v));
      })
      .def("center", &GridGraph::center)
      .def("boundary_length", &GridGraph::boundary_length)
      .def("with_weights", &GridGraph::with_weights)
      .def("__repr__", [](const GridGraph& g) {
        std::ostringstream s;
        s << "GridGraph('" << to_string(g.topology()) << "', " << g.rows() << ", " << g.cols() << ")";
        return s.str();
      });

  py::class_<Partition>(m, "Partition")
      .def(py::init<const GridGraph&, std::vector<int>, int>(), py::arg("graph"), py::arg("assignment"),
           py::arg("k"))
      .def_property_readonly("k", &Partition::k)
      .def_property_readonly("assignment", [](const Partition& p) { return to_vector(p.assignment()); })
      .def_property_readonly("part_weights", [](const Partition& p) { return to_vector(p.part_weights()); })
      .def_property_readonly("part_sizes", [](const Partition& p) { return to_vector(p.part_sizes()); })
      .def_property_readonly("cut_edges", &Partition::cut_edges)
      .def("part_of", &Partition::part_of)
      .def("cut_delta", [](const Partition& p, const GridGraph& g, std::vector<int> vertices,
                           int to) { return p.cut_delta(g, vertices, to); })
      .def("move", [](Partition& p, const GridGraph& g, std::vector<int> vertices, int to) {
        p.move(g, vertices, to);
      })
      .def("check_consistency", &Partition::check_consistency)
      .def(py::self == py::self);

  py::class_<VertexOrdering>(m, "VertexOrdering")
      .def(py::init([](std::vector<int> order, int stripe_height) {
             return VertexOrdering{std::move(order), stripe_height};
           }),
           py::arg("order"), py::arg("stripe_height") = 0)
      .def_readwrite("order", &VertexOrdering::order)
      .def_readwrite("stripe_height", &VertexOrdering::stripe_height)
      .def("positions", &VertexOrdering::positions);

  py::class_<BalanceReport>(m, "BalanceReport")
      .def_readonly("average", &BalanceReport::average)
      .def_readonly("max_dev", &BalanceReport::max_dev)
      .def_readonly("within", &BalanceReport::within);

  m.def("cut_count", [](const GridGraph& g, std::vector<int> a) { return cut_count(g, a); });
  m.def("part_perimeters", &part_perimeters);
  m.def("is_contiguous", &is_contiguous);
  m.def("all_contiguous", &all_contiguous);
  m.def("balance_report", &balance_report, py::arg("graph"), py::arg("partition"), py::arg("eps"));
  m.def("snake_ordering", &snake_ordering, py::arg("graph"), py::arg("stripe_height"));

  py::class_<StripePlan>(m, "StripePlan")
      .def_readonly("part_size", &StripePlan::part_size)
      .def_readonly("extras", &StripePlan::extras)
      .def_readonly("a", &StripePlan::a)
      .def_readonly("d", &StripePlan::d)
      .def_readonly("r", &StripePlan::r)
      .def_readonly("strip_heights", &StripePlan::strip_heights)
      .def_readonly("s2_height", &StripePlan::s2_height);
  m.def("stripe_plan", &stripe_plan, py::arg("m"), py::arg("n"), py::arg("k"));
  m.def("phi_cautious_striping", py::overload_cast<const GridGraph&, int>(&phi_cautious_striping),
        py::arg("graph"), py::arg("k"));
  m.def("cut_lower_bound", &cut_lower_bound, py::arg("m"), py::arg("n"), py::arg("k"));
  m.def("min_perimeter_square", &min_perimeter_square);
  m.def("min_perimeter_hex", &min_perimeter_hex);

  py::class_<DpResult>(m, "DpResult")
      .def_readonly("partition", &DpResult::partition)
      .def_readonly("cut", &DpResult::cut)
      .def_readonly("starts", &DpResult::starts)
      .def_readonly("furthest_prefix", &DpResult::furthest_prefix)
      .def_readonly("disconnected_parts", &DpResult::disconnected_parts)
      .def_property_readonly("feasible", &DpResult::feasible);
  m.def(
      "dynamic_partition",
      [](const GridGraph& g, const VertexOrdering& ord, int k, double eps, const std::string& balance,
         std::optional<double> lower_eps) {
        BalanceMode mode;
        if (balance == "two_sided") {
          mode = BalanceMode::two_sided(eps);
        } else if (balance == "upper_only") {
          mode = BalanceMode::upper_only(eps);
        } else if (balance == "window") {
          mode = BalanceMode::window(lower_eps.value_or(eps), eps);
        } else {
          throw Error("balance must be two_sided, upper_only or window");
        }
        return dynamic_partition(g, ord, k, mode);
      },
      py::arg("graph"), py::arg("ordering"), py::arg("k"), py::arg("eps"), py::arg("balance") = "two_sided",
      py::arg("lower_eps") = py::none());

  py::class_<WeightDistribution>(m, "WeightDistribution")
      .def(py::init([](const std::vector<std::pair<double, double>>& atoms) {
             std::vector<Atom> support;
             for (const auto& [value, prob] : atoms) support.push_back({value, prob});
             return WeightDistribution(std::move(support));
           }),
           py::arg("atoms"))
      .def_static("point", &WeightDistribution::point)
      .def_property_readonly("support", [](const WeightDistribution& d) {
        std::vector<std::pair<double, double>> out;
        for (const Atom& a : d.support()) out.emplace_back(a.value, a.prob);
        return out;
      })
      .def_property_readonly("mean", &WeightDistribution::mean)
      .def_property_readonly("variance", &WeightDistribution::variance)
      .def("scaled", &WeightDistribution::scaled);
  m.def("poisson_truncated", &poisson_truncated, py::arg("lam"), py::arg("cap"));
  m.def("beta_transform", &beta_transform, py::arg("dist"), py::arg("k"));

  py::class_<StochasticAttempt>(m, "StochasticAttempt")
      .def_readonly("i", &StochasticAttempt::i)
      .def_readonly("weight_sum", &StochasticAttempt::weight_sum)
      .def_readonly("exceptional_sum", &StochasticAttempt::exceptional_sum)
      .def_readonly("eps", &StochasticAttempt::eps)
      .def_readonly("feasible", &StochasticAttempt::feasible)
      .def_readonly("reason", &StochasticAttempt::reason);
  py::class_<StochasticResult>(m, "StochasticResult")
      .def_readonly("partition", &StochasticResult::partition)
      .def_readonly("i_star", &StochasticResult::i_star)
      .def_readonly("eps_used", &StochasticResult::eps_used)
      .def_readonly("cut", &StochasticResult::cut)
      .def_readonly("transformed", &StochasticResult::transformed)
      .def_readonly("part_transformed", &StochasticResult::part_transformed)
      .def_readonly("attempts", &StochasticResult::attempts)
      .def_property_readonly("feasible", &StochasticResult::feasible);
  m.def(
      "stochastic_partition",
      [](const GridGraph& g, const std::vector<WeightDistribution>& dists, const VertexOrdering& ord, int k,
         int i_min, int i_max, std::optional<double> balance_eps) {
        return stochastic_partition(g, dists, ord, k, i_min, i_max, balance_eps);
      },
      py::arg("graph"), py::arg("dists"), py::arg("ordering"), py::arg("k"), py::arg("i_min") = 0,
      py::arg("i_max") = 13, py::arg("balance_eps") = py::none());

  py::class_<MonteCarloEstimate>(m, "MonteCarloEstimate")
      .def_readonly("value", &MonteCarloEstimate::value)
      .def_readonly("std_error", &MonteCarloEstimate::std_error)
      .def_readonly("samples", &MonteCarloEstimate::samples);
  m.def(
      "expected_max_estimate",
      [](const GridGraph& g, const std::vector<WeightDistribution>& dists, const Partition& p, int samples,
         std::uint64_t seed) { return expected_max_estimate(g, dists, p, samples, seed); },
      py::arg("graph"), py::arg("dists"), py::arg("partition"), py::arg("samples"), py::arg("seed") = 0);

  py::class_<Move>(m, "Move")
      .def(py::init([](std::vector<int> vertices, int from, int to) { return Move{std::move(vertices), from, to}; }),
           py::arg("vertices"), py::arg("from_part"), py::arg("to_part"))
      .def_readonly("vertices", &Move::vertices)
      .def_readonly("from_part", &Move::from)
      .def_readonly("to_part", &Move::to)
      .def(py::self == py::self);
  m.def("one_swap_candidates", &one_swap_candidates, py::arg("graph"), py::arg("partition"), py::arg("eps"));
  m.def("combinatorial_candidates", &combinatorial_candidates, py::arg("graph"), py::arg("partition"),
        py::arg("eps"), py::arg("max_run"));
  m.def("move_is_valid", &move_is_valid, py::arg("graph"), py::arg("partition"), py::arg("move"),
        py::arg("eps"));
  m.def("acceptance_probability", &acceptance_probability, py::arg("z_new"), py::arg("z_old"),
        py::arg("temperature"));

  py::class_<AnnealResult>(m, "AnnealResult")
      .def_readonly("best", &AnnealResult::best)
      .def_readonly("initial_cut", &AnnealResult::initial_cut)
      .def_readonly("iterations", &AnnealResult::iterations)
      .def_readonly("accepted", &AnnealResult::accepted)
      .def_property_readonly("trace", [](const AnnealResult& r) {
        std::vector<std::pair<std::int64_t, std::int64_t>> out;
        for (const TracePoint& t : r.trace) out.emplace_back(t.iteration, t.cut);
        return out;
      });
  m.def(
      "anneal",
      [](const GridGraph& g, const Partition& p0, double eps, double temperature, std::int64_t max_iters,
         std::int64_t no_improve_window, const std::string& neighborhood, int max_run, std::uint64_t seed,
         double cooling) {
        AnnealConfig cfg;
        cfg.eps = eps;
        cfg.temperature = temperature;
        cfg.max_iters = max_iters;
        cfg.no_improve_window = no_improve_window;
        if (neighborhood == "one_swap") {
          cfg.neighborhood = Neighborhood::OneSwap;
        } else if (neighborhood == "combinatorial") {
          cfg.neighborhood = Neighborhood::Combinatorial;
        } else {
          throw Error("neighborhood must be one_swap or combinatorial");
        }
        cfg.max_run = max_run;
        cfg.seed = seed;
        cfg.cooling = cooling;
        py::gil_scoped_release release;
        return anneal(g, p0, cfg);
      },
      py::arg("graph"), py::arg("initial"), py::arg("eps") = 0.05, py::arg("temperature") = 0.5,
      py::arg("max_iters") = 0, py::arg("no_improve_window") = 0, py::arg("neighborhood") = "combinatorial",
      py::arg("max_run") = 4, py::arg("seed") = 0, py::arg("cooling") = 1.0);

  py::class_<KMeansResult>(m, "KMeansResult")
      .def_readonly("partition", &KMeansResult::partition)
      .def_readonly("objective", &KMeansResult::objective)
      .def_readonly("centers", &KMeansResult::centers)
      .def_readonly("objective_trace", &KMeansResult::objective_trace);
  m.def(
      "weighted_kmeans",
      [](const GridGraph& g, int k, int max_iters, int restarts, std::uint64_t seed) {
        return weighted_kmeans(g, KMeansConfig{k, max_iters, restarts, seed});
      },
      py::arg("graph"), py::arg("k"), py::arg("max_iters") = 100, py::arg("restarts") = 1, py::arg("seed") = 0);

  m.def("sparse_smoothed_field", &sparse_smoothed_field, py::arg("m"), py::arg("n"), py::arg("bernoulli_p") = 0.02,
        py::arg("iters") = 40, py::arg("seed") = 0);
  m.def("gev_pdf", &gev_pdf, py::arg("x"), py::arg("mu"), py::arg("sigma"), py::arg("xi"));
  m.def(
      "gev_discretized",
      [](double mu, double sigma, double xi, double scale, int support_cap) {
        return gev_discretized(GevParams{mu, sigma, xi, scale}, support_cap);
      },
      py::arg("mu"), py::arg("sigma"), py::arg("xi"), py::arg("scale") = 1.0, py::arg("support_cap") = 250);
  m.def(
      "random_gev_instance", [](int rows, int cols, std::uint64_t seed, int support_cap) {
        return random_gev_instance(rows, cols, seed, support_cap);
      },
      py::arg("rows"), py::arg("cols"), py::arg("seed"), py::arg("support_cap") = 250);
  m.def(
      "workload_gev_instance",
      [](const std::vector<double>& workload, std::uint64_t seed, int support_cap) {
        return workload_gev_instance(workload, seed, support_cap);
      },
      py::arg("workload"), py::arg("seed"), py::arg("support_cap") = 250);

  py::class_<Instance>(m, "Instance")
      .def(py::init([](const GridGraph& g, std::optional<int> k, std::optional<double> eps,
                       std::vector<WeightDistribution> dists) { return Instance{g, k, eps, std::move(dists)}; }),
           py::arg("graph"), py::arg("k") = py::none(), py::arg("eps") = py::none(),
           py::arg("dists") = std::vector<WeightDistribution>{})
      .def_readonly("graph", &Instance::graph)
      .def_readonly("k", &Instance::k)
      .def_readonly("eps", &Instance::eps)
      .def_readonly("dists", &Instance::dists)
      .def(py::self == py::self);
  m.def("load_instance", &load_instance, py::arg("path"));
  m.def("save_instance", &save_instance, py::arg("path"), py::arg("instance"));
  m.def("dumps_instance", [](const Instance& inst) {
    std::ostringstream s;
    write_instance(s, inst);
    return s.str();
  });
  m.def("loads_instance", [](const std::string& text) {
    std::istringstream s(text);
    return read_instance(s);
  });
  m.def("load_partition", &load_partition, py::arg("path"), py::arg("graph"));
  m.def("save_partition", &save_partition, py::arg("path"), py::arg("graph"), py::arg("partition"));

  m.def(
      "render_svg",
      [](const GridGraph& g, const Partition& p, double cell_size, bool shade_weights) {
        return render_svg(g, p, RenderOptions{cell_size, shade_weights});
      },
      py::arg("graph"), py::arg("partition"), py::arg("cell_size") = 20.0, py::arg("shade_weights") = false);

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("k", &SolveReport::k)
      .def_readonly("eps", &SolveReport::eps)
      .def_readonly("cut_edges", &SolveReport::cut_edges)
      .def_readonly("perimeters", &SolveReport::perimeters)
      .def_readonly("max_dev", &SolveReport::max_dev)
      .def_readonly("balanced", &SolveReport::balanced)
      .def_readonly("contiguous", &SolveReport::contiguous)
      .def_readonly("normalized_max_part_weight", &SolveReport::normalized_max_part_weight)
      .def_readonly("normalized_max_std_error", &SolveReport::normalized_max_std_error);
  m.def("evaluate_partition", &evaluate_partition, py::arg("instance"), py::arg("partition"), py::arg("eps"),
        py::arg("samples") = 0, py::arg("seed") = py::none());
}
