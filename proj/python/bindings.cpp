#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <set>
#include <string>
#include <utility>

#include "ifds/baselines.hpp"
#include "ifds/generators.hpp"
#include "ifds/index_io.hpp"
#include "ifds/instance.hpp"
#include "ifds/mini_program.hpp"
#include "ifds/query_index.hpp"

namespace py = pybind11;
using namespace ifds;

namespace {

using Fact = std::pair<std::string, std::string>;

FactIndex fact_of(const Instance& inst, const std::string& name) { return inst.domain.index_of(name); }

std::set<Fact> named(const Instance& inst, const SourceAnswer& a) {
  std::set<Fact> out;
  for (auto v : a.legend())
    for (FactIndex d = 0; d < inst.fact_count(); ++d)
      if (a.test(v, d)) out.emplace(inst.vertex_names[v], inst.domain.name(d));
  return out;
}

py::dict stats_dict(const PreprocessStats& st) {
  py::dict d;
  d["summaries"] = st.summaries;
  d["max_width"] = st.max_width;
  d["max_height"] = st.max_height;
  d["bags"] = st.bags;
  d["index_words"] = st.index_words;
  d["ms_total"] = st.ms_total;
  d["warnings"] = st.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Same-context IFDS reachability queries";

  py::register_exception<InstanceError>(m, "InstanceError", PyExc_ValueError);
  py::register_exception<RelationError>(m, "RelationError", PyExc_ValueError);
  py::register_exception<QueryError>(m, "QueryError", PyExc_ValueError);
  py::register_exception<IndexFormatError>(m, "IndexFormatError", PyExc_ValueError);

  py::class_<Instance, std::shared_ptr<Instance>>(m, "Instance")
      .def_property_readonly("vertex_names", [](const Instance& i) { return i.vertex_names; })
      .def_property_readonly("facts", [](const Instance& i) { return i.domain.names(); })
      .def_property_readonly("procedures",
                             [](const Instance& i) {
                               std::vector<std::string> out;
                               for (const auto& p : i.procedures) out.push_back(p.name);
                               return out;
                             })
      .def("vertex_count", &Instance::vertex_count)
      .def("procedure_of", [](const Instance& i, const std::string& v) { return i.procedure_of(i.vertex(v)).name; })
      .def("to_json", [](const Instance& i, int indent) { return to_json(i, indent); }, py::arg("indent") = -1)
      .def("save", [](const Instance& i, const std::string& path) { save_instance(i, path); })
      .def("__eq__", [](const Instance& a, const Instance& b) { return a == b; });

  m.def("parse_instance", [](const std::string& text) { return std::make_shared<Instance>(parse_instance(text)); });
  m.def("load_instance", [](const std::string& path) { return std::make_shared<Instance>(load_instance(path)); });

  m.def(
      "gen_random",
      [](std::uint64_t seed, std::size_t n, std::size_t domain, std::size_t width_bound, std::size_t proc_size,
         double call_density) {
        RandomOptions o;
        o.seed = seed;
        o.n = n;
        o.domain = domain;
        o.width_bound = width_bound;
        o.proc_size = proc_size;
        o.call_density = call_density;
        return std::make_shared<Instance>(gen_random(o));
      },
      py::arg("seed") = 1, py::arg("n") = 100, py::arg("domain") = 2, py::arg("width_bound") = 4,
      py::arg("proc_size") = 60, py::arg("call_density") = 0.05);
  m.def(
      "gen_analysis",
      [](const std::string& kind, std::uint64_t seed, std::size_t n, std::size_t domain) {
        return std::make_shared<Instance>(gen_random_analysis(parse_analysis_kind(kind), seed, n, domain));
      },
      py::arg("kind"), py::arg("seed") = 1, py::arg("n") = 100, py::arg("domain") = 3);
  m.def("pointer_example",
        [] { return std::make_shared<Instance>(gen_analysis(pointer_example(), AnalysisKind::PossUninit)); });

  py::class_<QueryIndex>(m, "Index")
      .def_static(
          "build",
          [](const std::shared_ptr<Instance>& inst, std::size_t width_cap, std::size_t bandwidth) {
            PreprocessOptions o;
            o.width_cap = width_cap;
            o.bandwidth = bandwidth;
            PreprocessStats st;
            QueryIndex ix;
            {
              py::gil_scoped_release nogil;
              ix = QueryIndex::build(std::make_shared<const Instance>(*inst), o, &st);
            }
            return std::make_pair(std::move(ix), stats_dict(st));
          },
          py::arg("instance"), py::arg("width_cap") = 10, py::arg("bandwidth") = 3,
          "Preprocess an instance; returns (index, stats).")
      .def_static("load", &load_index)
      .def("save", [](const QueryIndex& ix, const std::string& path) { save_index(ix, path); })
      .def_property_readonly("instance",
                             [](const QueryIndex& ix) { return std::make_shared<Instance>(ix.instance()); })
      .def("pair",
           [](const QueryIndex& ix, const std::string& u, const std::string& d1, const std::string& v,
              const std::string& d2) {
             const auto& inst = ix.instance();
             return ix.pair(inst.vertex(u), fact_of(inst, d1), inst.vertex(v), fact_of(inst, d2));
           })
      .def(
          "source",
          [](const QueryIndex& ix, const std::string& u, const std::string& d1) {
            const auto& inst = ix.instance();
            return named(inst, ix.source(inst.vertex(u), fact_of(inst, d1)));
          },
          "Set of (vertex, fact) reachable from (u, d1).")
      .def("word_count", &QueryIndex::word_count);

  m.def(
      "nopp_pair",
      [](const Instance& inst, const std::string& u, const std::string& d1, const std::string& v,
         const std::string& d2) {
        return nopp_pair(inst, inst.vertex(u), fact_of(inst, d1), inst.vertex(v), fact_of(inst, d2));
      },
      "Pair query answered by a fresh analysis, without any index.");
}
