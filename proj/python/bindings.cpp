#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "obsmap/errors.hpp"
#include "obsmap/graph.hpp"
#include "obsmap/harness.hpp"
#include "obsmap/spectral.hpp"
#include "obsmap/theory.hpp"

namespace py = pybind11;
using namespace obsmap;

namespace {

py::object optional_float(const std::optional<double>& x) {
  return x ? py::object(py::float_(*x)) : py::object(py::none());
}

py::dict record_dict(const TrialRecord& r) {
  py::dict d;
  d["n"] = r.point.n;
  d["r"] = r.point.r;
  d["k"] = r.point.k;
  d["m"] = r.point.m;
  d["eta"] = r.point.eta.text;
  d["quantizer"] = std::string(to_string(r.point.quantizer));
  d["scaled"] = r.point.scaled;
  d["feature"] = std::string(to_string(r.point.feature));
  d["anchor_strategy"] = std::string(to_string(r.point.strategy));
  d["trial"] = r.trial;
  d["resample"] = r.resample;
  d["seed"] = r.seed;
  if (r.failure) {
    d["failure"] = *r.failure;
    return d;
  }
  d["error"] = r.error;
  d["image_frac"] = r.image_frac;
  d["mean_preimage"] = r.mean_preimage;
  d["singleton_frac"] = r.singleton_frac;
  d["image_size"] = r.image_size;
  d["codebook_size"] = r.codebook_size;
  d["profile_count"] = r.profile_count;
  d["singleton_bucket_frac"] = r.singleton_bucket_frac;
  d["weighted_collision"] = optional_float(r.weighted_collision);
  d["median_code_ratio"] = optional_float(r.median_code_ratio);
  d["q90_balance"] = optional_float(r.q90_balance);
  d["generic_bound"] = r.generic_bound;
  d["refined_bound"] = optional_float(r.refined_bound);
  d["bounds_ok"] = r.bounds_ok;
  return d;
}

Graph graph_from_edges(VertexId n, const std::vector<std::pair<VertexId, VertexId>>& edges) {
  std::vector<Edge> list(edges.begin(), edges.end());
  return Graph::from_edges(n, list);
}

ConfigPoint make_point(VertexId n, int r, int k, int m, const std::string& eta,
                       const std::string& quantizer, bool scaled, const std::string& feature,
                       const std::string& strategy) {
  ConfigPoint p;
  p.n = n;
  p.r = r;
  p.k = k;
  p.m = m;
  p.eta = Eta::parse(eta);
  p.quantizer = parse_quantizer(quantizer);
  p.scaled = scaled;
  p.feature = parse_feature(feature);
  p.strategy = parse_strategy(strategy);
  return p;
}

}  // namespace

PYBIND11_MODULE(_obsmap, m) {
  m.doc() = "Anchor-distance and spectral observation maps on graphs";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConnectivityError>(m, "ConnectivityError", PyExc_RuntimeError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

  m.def(
      "random_regular",
      [](VertexId n, int r, std::uint64_t seed) { return random_regular(n, r, seed).edges(); },
      py::arg("n"), py::arg("r") = 3, py::arg("seed") = 0,
      "Edges (u, v), u < v, of a connected simple r-regular graph.");

  m.def(
      "graph_stats",
      [](VertexId n, const std::vector<std::pair<VertexId, VertexId>>& edges) {
        const auto s = structural_stats(graph_from_edges(n, edges));
        py::dict d;
        d["n"] = s.n;
        d["edge_count"] = s.edge_count;
        d["avg_degree"] = s.avg_degree;
        d["density"] = s.density;
        d["diameter"] = s.diameter;
        d["avg_shortest_path_length"] = s.avg_shortest_path_length;
        d["avg_clustering"] = s.avg_clustering;
        d["transitivity"] = s.transitivity;
        d["degree_variance"] = s.degree_variance;
        d["degree_gini"] = s.degree_gini;
        return d;
      },
      py::arg("n"), py::arg("edges"));

  m.def(
      "energy_embedding",
      [](VertexId n, const std::vector<std::pair<VertexId, VertexId>>& edges, int dims,
         bool scaled) {
        const Graph g = graph_from_edges(n, edges);
        const auto basis = low_frequency_basis(normalized_laplacian(g), dims);
        return Eigen::MatrixXd(energy_embedding(basis, dims, scaled).values);
      },
      py::arg("n"), py::arg("edges"), py::arg("m"), py::arg("scaled") = true,
      "n x m matrix of squared low-frequency eigenvector entries.");

  m.def(
      "rho_eng",
      [](double n, double k, double dims, double eta, double c_ent, double C_ent) {
        return rho_eng({n, k, dims, eta, c_ent, C_ent});
      },
      py::arg("n"), py::arg("k"), py::arg("m"), py::arg("eta"), py::arg("c_ent") = 1.0,
      py::arg("C_ent") = 2.0);

  m.def(
      "subcritical",
      [](double n, double k, double dims, double eta, double epsilon0) {
        return subcritical_check({n, k, dims, eta}, epsilon0);
      },
      py::arg("n"), py::arg("k"), py::arg("m"), py::arg("eta"), py::arg("epsilon0"));

  m.def(
      "run_trial",
      [](VertexId n, int k, int dims, const std::string& eta, int trial, int resample,
         std::uint64_t seed, int r, const std::string& quantizer, bool scaled,
         const std::string& feature, const std::string& strategy) {
        const auto p = make_point(n, r, k, dims, eta, quantizer, scaled, feature, strategy);
        return record_dict(run_trial(p, trial, resample, seed));
      },
      py::arg("n"), py::arg("k"), py::arg("m") = 0, py::arg("eta") = "0.1",
      py::arg("trial") = 0, py::arg("resample") = 0, py::arg("seed") = 0, py::arg("r") = 3,
      py::arg("quantizer") = "relative", py::arg("scaled") = true, py::arg("feature") = "full",
      py::arg("strategy") = "random");

  m.def(
      "analyze_graph",
      [](VertexId n, const std::vector<std::pair<VertexId, VertexId>>& edges, int k, int dims,
         const std::string& eta, int resamples, std::uint64_t seed, const std::string& quantizer,
         bool scaled, const std::string& strategy) {
        if (resamples < 1) throw ParameterError("resamples must be at least 1");
        Graph g = graph_from_edges(n, edges);
        if (!is_connected(g)) g = largest_connected_component(g).graph;
        const VertexId size = g.n();
        const PreparedGraph pg = prepare_graph(std::move(g), dims, seed);
        const auto p = make_point(size, 0, k, dims, eta, quantizer, scaled, "full", strategy);
        py::list rows;
        for (int s = 0; s < resamples; ++s) rows.append(record_dict(evaluate_point(pg, p, 0, s)));
        return rows;
      },
      py::arg("n"), py::arg("edges"), py::arg("k"), py::arg("m") = 0, py::arg("eta") = "0.1",
      py::arg("resamples") = 1, py::arg("seed") = 0, py::arg("quantizer") = "relative",
      py::arg("scaled") = true, py::arg("strategy") = "random",
      "Per-resample records on the largest connected component of a given graph.");

  m.def(
      "sweep_csv",
      [](const std::string& config, unsigned jobs) {
        std::istringstream in(config);
        SweepConfig cfg = parse_sweep_config(in);
        cfg.jobs = jobs;
        SweepResult result;
        {
          py::gil_scoped_release release;
          result = run_sweep(cfg);
        }
        std::ostringstream out;
        write_csv(result.records, out);
        return out.str();
      },
      py::arg("config"), py::arg("jobs") = 0,
      "Runs a sweep given as key = value text and returns the trial CSV.");

  m.def(
      "k_emp",
      [](const std::string& csv, VertexId n, int dims, const std::string& eta, double threshold) {
        std::istringstream in(csv);
        const auto records = read_csv(in);
        const auto k = k_emp(records, n, dims, eta, threshold);
        return k ? py::object(py::int_(*k)) : py::object(py::none());
      },
      py::arg("csv"), py::arg("n"), py::arg("m"), py::arg("eta"), py::arg("threshold") = 0.1);

  m.def("csv_columns", &csv_columns);
}
