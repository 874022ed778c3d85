#include <optional>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cpsparse/baseline.hpp"
#include "cpsparse/cut_pursuit.hpp"
#include "cpsparse/errors.hpp"
#include "cpsparse/graph_build.hpp"
#include "cpsparse/io.hpp"
#include "cpsparse/operators.hpp"
#include "cpsparse/solver.hpp"

namespace py = pybind11;
using namespace cpsparse;

namespace {

PointCloud as_cloud(const Field& points) {
  PointCloud c;
  c.points = points;
  return c;
}

CutMode parse_cut(const std::string& s) {
  if (s == "aniso") return CutMode::kAniso;
  if (s == "iso") return CutMode::kIso;
  if (s == "threshold") return CutMode::kThreshold;
  throw DomainError("unknown cut mode '" + s + "'");
}

DirectionMode parse_direction(const std::string& s) {
  if (s == "kmeans2") return DirectionMode::kKmeans2;
  if (s == "pca") return DirectionMode::kPca;
  if (s == "random") return DirectionMode::kRandom;
  throw DomainError("unknown direction mode '" + s + "'");
}

py::dict to_dict(const RunResult& res) {
  py::dict out;
  out["labels"] = res.partition.assignment();
  out["values"] = res.c;
  out["f"] = res.f;
  std::vector<double> energies;
  std::vector<Index> subsets;
  for (const auto& r : res.trace.records) {
    energies.push_back(r.energy);
    subsets.push_back(r.subsets);
  }
  out["energy"] = energies;
  out["subsets"] = subsets;
  out["stop_reason"] = res.trace.stop_reason;
  return out;
}

CutPursuitConfig make_config(RegularizerSpec spec, const std::string& cut, const std::string& direction,
                             bool debias, int max_outer_iters, unsigned threads, std::uint64_t seed) {
  CutPursuitConfig cfg;
  cfg.spec = spec;
  cfg.cut_mode = parse_cut(cut);
  cfg.direction_mode = parse_direction(direction);
  cfg.debias = debias;
  cfg.max_outer_iters = max_outer_iters;
  cfg.threads = threads;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

// RunResult crosses into Python as a plain dict
namespace pybind11::detail {
template <>
struct type_caster<RunResult> {
  PYBIND11_TYPE_CASTER(RunResult, const_name("dict"));
  static handle cast(const RunResult& res, return_value_policy, handle) { return to_dict(res).release(); }
  bool load(handle, bool) { return false; }
};
}  // namespace pybind11::detail

PYBIND11_MODULE(_core, m) {
  m.doc() = "Point cloud sparsification by cut pursuit";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<ConformanceError>(m, "ConformanceError", error.ptr());
  py::register_exception<CapabilityError>(m, "CapabilityError", error.ptr());
  py::register_exception<StepSizeError>(m, "StepSizeError", error.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", error.ptr());
  py::register_exception<SingularEdgeError>(m, "SingularEdgeError", error.ptr());
  auto io = py::register_exception<IoError>(m, "IoError", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", io.ptr());

  py::class_<Graph>(m, "Graph")
      .def(py::init([](Index n, const std::vector<std::tuple<Index, Index, double>>& edges) {
             std::vector<WeightedEdge> list;
             list.reserve(edges.size());
             for (const auto& [u, v, w] : edges) list.push_back({u, v, w});
             return Graph(n, list);
           }),
           py::arg("num_vertices"), py::arg("edges"))
      .def_property_readonly("num_vertices", &Graph::num_vertices)
      .def_property_readonly("num_edges", &Graph::num_edges, "number of directed edges")
      .def("edges", [](const Graph& g) {
        std::vector<std::tuple<Index, Index, double>> out;
        for (Index e = 0; e < g.num_edges(); ++e) out.emplace_back(g.source(e), g.target(e), g.weight(e));
        return out;
      });

  m.def(
      "knn_graph",
      [](const Field& points, Index k, unsigned threads) {
        auto knn = knn_graph(as_cloud(points), k, threads);
        return py::make_tuple(std::move(knn.graph), std::move(knn.cloud.points), std::move(knn.merge_map));
      },
      py::arg("points"), py::arg("k") = 8, py::arg("threads") = 1,
      "Symmetrized k-NN graph with inverse squared distance weights. Returns (graph, merged points, merge map).");

  m.def("make_grid", [](Index side, int d) { return make_grid(side, d).points; }, py::arg("side"), py::arg("d") = 2);
  m.def("make_cube_shell", [](Index n, std::uint64_t seed) { return make_cube_shell(n, seed).points; },
        py::arg("n"), py::arg("seed") = 0);
  m.def(
      "make_sphere_shell",
      [](Index n, std::uint64_t seed, double radius) { return make_sphere_shell(n, seed, radius).points; },
      py::arg("n"), py::arg("seed") = 0, py::arg("radius") = 1.0);
  m.def(
      "add_gaussian_noise",
      [](const Field& points, double sigma, std::uint64_t seed) {
        return add_gaussian_noise(as_cloud(points), sigma, seed).points;
      },
      py::arg("points"), py::arg("sigma"), py::arg("seed") = 0);

  m.def(
      "energy",
      [](const Graph& g, const Field& f, const Field& data, double p, double q, double beta) {
        return energy(g, f, data, RegularizerSpec::pq(p, q, beta, beta));
      },
      py::arg("graph"), py::arg("f"), py::arg("g"), py::arg("p") = 1.0, py::arg("q") = 1.0, py::arg("beta"));
  m.def(
      "energy_l0",
      [](const Graph& g, const Field& f, const Field& data, double alpha) {
        return energy(g, f, data, RegularizerSpec::l0(alpha), equality_tolerance(data));
      },
      py::arg("graph"), py::arg("f"), py::arg("g"), py::arg("alpha"));

  m.def(
      "cut_pursuit",
      [](const Graph& g, const Field& data, double alpha, std::optional<double> beta, double p, double q,
         const std::string& cut, const std::string& direction, bool debias, int max_outer_iters, unsigned threads,
         std::uint64_t seed) {
        const std::string mode = cut != "auto" ? cut : p > 1.0 && q > 1.0 ? "threshold" : q == 1.0 ? "aniso" : "iso";
        const auto cfg = make_config(RegularizerSpec::pq(p, q, alpha, beta.value_or(alpha)), mode, direction, debias,
                                     max_outer_iters, threads, seed);
        py::gil_scoped_release release;
        return run(g, data, cfg);
      },
      py::arg("graph"), py::arg("g"), py::arg("alpha"), py::arg("beta") = py::none(), py::arg("p") = 1.0,
      py::arg("q") = 1.0, py::arg("cut") = "auto", py::arg("direction") = "kmeans2", py::arg("debias") = false,
      py::arg("max_outer_iters") = 100, py::arg("threads") = 1, py::arg("seed") = 0);

  m.def(
      "cut_pursuit_l0",
      [](const Graph& g, const Field& data, double alpha, const std::string& cut, const std::string& direction,
         int max_outer_iters, unsigned threads, std::uint64_t seed) {
        auto cfg = make_config(RegularizerSpec::l0(alpha), cut, direction, false, max_outer_iters, threads, seed);
        cfg.l0_aniso = cfg.cut_mode == CutMode::kAniso;
        py::gil_scoped_release release;
        return run_l0(g, data, cfg);
      },
      py::arg("graph"), py::arg("g"), py::arg("alpha"), py::arg("cut") = "iso", py::arg("direction") = "kmeans2",
      py::arg("max_outer_iters") = 100, py::arg("threads") = 1, py::arg("seed") = 0);

  m.def(
      "octree",
      [](const Graph& g, const Field& data, int iters, unsigned threads) {
        py::gil_scoped_release release;
        return run_octree(g, data, iters, threads);
      },
      py::arg("graph"), py::arg("g"), py::arg("iters"), py::arg("threads") = 1);

  m.def(
      "primal_dual",
      [](const Graph& g, const Field& data, double beta, double p, double q, bool precondition, double rel_tol,
         int max_iters) {
        PDConfig pd;
        pd.precondition = precondition;
        pd.rel_tol = rel_tol;
        pd.max_iters = max_iters;
        PDResult res;
        {
          py::gil_scoped_release release;
          res = primal_dual_full(g, data, RegularizerSpec::pq(p, q, beta, beta), pd);
        }
        py::dict out;
        out["f"] = res.f;
        out["energy"] = res.energy;
        out["iterations"] = res.iterations;
        out["converged"] = res.converged;
        return out;
      },
      py::arg("graph"), py::arg("g"), py::arg("beta"), py::arg("p") = 1.0, py::arg("q") = 1.0,
      py::arg("precondition") = true, py::arg("rel_tol") = 1e-5, py::arg("max_iters") = 10000);

  m.def(
      "direct_sparsify",
      [](const Graph& g, const Field& data, double beta, double p, double q, double epsilon) {
        PDConfig pd;
        pd.precondition = true;
        py::gil_scoped_release release;
        return direct_sparsify(g, data, RegularizerSpec::pq(p, q, beta, beta), pd, FilterConfig{epsilon}).cloud.points;
      },
      py::arg("graph"), py::arg("g"), py::arg("beta"), py::arg("p") = 1.0, py::arg("q") = 1.0,
      py::arg("epsilon") = 1e-3);

  m.def(
      "cluster_filter",
      [](const Field& points, double epsilon) { return cluster_filter(as_cloud(points), FilterConfig{epsilon}).points; },
      py::arg("points"), py::arg("epsilon") = 1e-3);

  m.def(
      "debias",
      [](const std::vector<Index>& labels, const Field& data) { return debias(Partition::from_labels(labels), data); },
      py::arg("labels"), py::arg("g"));

  m.def("read_cloud", [](const std::string& path) { return read_cloud(path).points; }, py::arg("path"));
  m.def(
      "write_cloud", [](const Field& points, const std::string& path) { write_cloud(as_cloud(points), path); },
      py::arg("points"), py::arg("path"));
}
