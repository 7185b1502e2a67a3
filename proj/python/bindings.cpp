// Python bindings. Big integers cross as Python ints (via decimal strings),
// rationals as (numerator, denominator) pairs; the dimerlab package wraps
// them in fractions.Fraction.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "dimerlab/error.hpp"
#include "dimerlab/graph.hpp"
#include "dimerlab/matchings.hpp"
#include "dimerlab/positivity.hpp"
#include "dimerlab/series.hpp"
#include "dimerlab/sources.hpp"

namespace py = pybind11;
using namespace dimerlab;

namespace {

py::int_ to_pyint(const mpz_class& z) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(z.get_str().c_str(), nullptr, 10));
}

py::tuple to_pyfrac(const mpq_class& q) {
  return py::make_tuple(to_pyint(q.get_num()), to_pyint(q.get_den()));
}

LatticeFamily to_family(const std::string& lattice) {
  if (lattice == "chain") return LatticeFamily::Chain;
  if (lattice == "square") return LatticeFamily::SquareTorus;
  fail(ErrorCode::InvalidArgument, "unknown lattice " + lattice + " (chain or square)");
}

KRange to_range(int k_min) {
  if (k_min == 0) return KRange::FromZero;
  if (k_min == 2) return KRange::FromTwo;
  fail(ErrorCode::InvalidArgument, "k_min must be 0 or 2");
}

}  // namespace

PYBIND11_MODULE(_dimerlab, m) {
  m.doc() = "exact positivity tests and lattice series for monomer-dimer systems";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def(
      "matching_counts",
      [](const std::string& graph6) {
        const MatchingVector mv = count_matchings(parse_graph6(graph6));
        py::list out;
        for (const mpz_class& z : mv.counts) out.append(to_pyint(z));
        return out;
      },
      py::arg("graph6"), "Exact i-matching counts m_0..m_n of a graph6-encoded graph.");

  m.def(
      "graph_positivity_violations",
      [](const std::string& graph6, int k_min) {
        const Graph g = parse_graph6(graph6);
        return test_graph_positivity(count_matchings(g), g.r, to_range(k_min), graph6).violations;
      },
      py::arg("graph6"), py::arg("k_min") = 0,
      "Violating (k, i) pairs of the graph-positivity test; empty means satisfied.");

  m.def(
      "virial_positivity_violations",
      [](const std::string& graph6) {
        const Graph g = parse_graph6(graph6);
        return test_virial_positivity(count_matchings(g), graph6).violations;
      },
      py::arg("graph6"),
      "Violating (k, i) pairs of the virial-positivity test; empty means satisfied.");

  m.def(
      "enumerate_graph6",
      [](int r, int v, bool connected_only) {
        SourceSpec spec;
        spec.kind = SourceKind::Enumerate;
        spec.r = r;
        spec.v = v;
        spec.connected_only = connected_only;
        std::vector<std::string> out;
        enumerate_graphs(spec, [&](const Graph& g) {
          out.push_back(emit_graph6(g));
          return true;
        });
        return out;
      },
      py::arg("r"), py::arg("v"), py::arg("connected_only") = true,
      "All r-regular bipartite graphs on v vertices, one graph6 string per class.");

  m.def(
      "sample_graph6",
      [](int r, int v, long long count, std::uint64_t seed) {
        SourceSpec spec;
        spec.kind = SourceKind::Sample;
        spec.r = r;
        spec.v = v;
        spec.count = count;
        spec.seed = seed;
        std::vector<std::string> out;
        sample_graphs(spec, [&](const Graph& g) {
          out.push_back(emit_graph6(g));
          return true;
        });
        return out;
      },
      py::arg("r"), py::arg("v"), py::arg("count"), py::arg("seed") = 0,
      "Random r-regular bipartite graphs, deterministic per seed.");

  m.def(
      "free_energy",
      [](const std::string& lattice, int order) {
        const RationalSeries f = free_energy_series(to_family(lattice), order);
        py::list out;
        for (const mpq_class& q : f.c) out.append(to_pyfrac(q));
        return out;
      },
      py::arg("lattice"), py::arg("order"),
      "Coefficients of the free energy per site f(z) through the given order.");

  m.def(
      "entropy_coefficients",
      [](const std::string& lattice, int order) {
        const LatticeFamily family = to_family(lattice);
        const RationalSeries f = free_energy_series(family, order);
        const EntropyExpansion e =
            entropy_coefficients(f, family == LatticeFamily::Chain ? 2 : 4);
        py::list out;
        for (const mpq_class& q : e.a) out.append(to_pyfrac(q));
        return out;
      },
      py::arg("lattice"), py::arg("order"),
      "Entropy-series coefficients a_2..a_order as (numerator, denominator) pairs.");

  m.def(
      "virial_coefficients",
      [](const std::string& lattice, int order) {
        const RationalSeries f = free_energy_series(to_family(lattice), order);
        py::list out;
        for (const mpq_class& q : virial_coefficients(f)) out.append(to_pyfrac(q));
        return out;
      },
      py::arg("lattice"), py::arg("order"),
      "Virial coefficients B_2..B_order as (numerator, denominator) pairs.");
}
