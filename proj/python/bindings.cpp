// Python bindings: topology loading, scenario runs, and a step-wise simulator.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "irsim/fixtures.hpp"
#include "irsim/generator.hpp"
#include "irsim/report.hpp"
#include "irsim/scenario.hpp"

namespace py = pybind11;
using namespace irsim;

namespace {

Protocol protocol_of(const std::string& name) {
  auto p = parse_protocol(name);
  if (!p) throw ValidationError("unknown protocol '" + name + "'");
  return *p;
}

ReportFormat format_of(const std::string& name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw ValidationError("unknown format '" + name + "' (json or csv)");
}

std::optional<std::vector<std::uint32_t>> ids(const std::optional<Path>& path) {
  if (!path) return std::nullopt;
  std::vector<std::uint32_t> out;
  for (AsId a : *path) out.push_back(a.value);
  return out;
}

const char* code_of(RelKind rel) {
  switch (rel) {
    case RelKind::ProviderToCustomer: return "-1";
    case RelKind::Peer: return "0";
    case RelKind::Sibling: return "2";
  }
  return "?";
}

std::vector<MetricsReport> run_all(const std::string& scenario, const std::vector<std::string>& protocols,
                                   const std::optional<std::string>& topology, bool strict) {
  const ScenarioSpec spec = load_scenario_file(scenario, strict);
  AsGraph graph;
  if (topology) {
    graph = topology->rfind("fixture:", 0) == 0 ? load_fixture(topology->substr(8)) : load_topology_file(*topology);
  } else if (spec.topology) {
    graph = load_topology_file(*spec.topology);
  } else {
    throw ValidationError("scenario has no topology; pass topology=");
  }
  validate_scenario(spec, graph);
  std::vector<Protocol> chosen;
  for (const std::string& p : protocols) chosen.push_back(protocol_of(p));
  if (chosen.empty()) chosen = spec.protocols;
  if (chosen.empty()) chosen.push_back(Protocol::Bgp);
  std::vector<MetricsReport> reports;
  for (Protocol p : chosen) reports.push_back(run(graph, sim_config(spec, p), spec.scenario));
  return reports;
}

py::dict probe_dict(const ProbeResult& r) {
  py::dict d;
  d["delivered"] = r.delivered();
  d["reason"] = std::string(to_string(r.reason));
  d["at"] = r.at.value;
  d["path"] = *ids(r.traversed);
  d["time"] = r.time;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Interdomain routing simulator core";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<AsGraph>(m, "Topology")
      .def("nodes", [](const AsGraph& g) {
        std::vector<std::uint32_t> out;
        for (AsId a : g.nodes()) out.push_back(a.value);
        return out;
      })
      .def("links", [](const AsGraph& g) {
        std::vector<py::tuple> out;
        for (const Link& l : g.links()) out.push_back(py::make_tuple(l.a.value, l.b.value, code_of(l.rel), l.up));
        return out;
      }, "(a, b, code, up) per link; code is -1 provider->customer, 0 peer, 2 sibling")
      .def("relation", [](const AsGraph& g, std::uint32_t me, std::uint32_t n) {
        return std::string(to_string(g.relation(AsId(me), AsId(n))));
      }, py::arg("me"), py::arg("neighbor"))
      .def("serialize", &serialize_topology)
      .def("__len__", &AsGraph::size)
      .def("__eq__", &AsGraph::operator==);

  m.def("load_topology", &load_topology, py::arg("text"));
  m.def("load_topology_file", [](const std::string& path) { return load_topology_file(path); }, py::arg("path"));
  m.def("generate_topology", [](std::size_t n, std::uint64_t seed) { return generate_topology(n, seed); },
        py::arg("n"), py::arg("seed"));
  m.def("fixture", &load_fixture, py::arg("name"));
  m.def("fixture_names", [] {
    std::vector<std::string> out;
    for (const Fixture& f : fixtures()) out.push_back(f.name);
    return out;
  });
  m.def("fixture_as", [](const std::string& f, const std::string& n) { return fixture_as(f, n).value; },
        py::arg("fixture"), py::arg("name"));
  m.def("protocols", [] {
    return std::vector<std::string>{"bgp", "rbgp", "miro", "yamr", "yamr_hiding"};
  });

  m.def("run_scenario",
        [](const std::string& scenario, const std::string& protocol, const std::optional<std::string>& topology,
           bool strict, const std::string& format) {
          const auto reports = run_all(scenario, {protocol}, topology, strict);
          return format_report(reports.front(), format_of(format));
        },
        py::arg("scenario"), py::arg("protocol") = "bgp", py::arg("topology") = py::none(),
        py::arg("strict") = true, py::arg("format") = "json",
        "Runs a scenario file under one protocol and returns the report text.");
  m.def("compare_scenario",
        [](const std::string& scenario, const std::vector<std::string>& protocols,
           const std::optional<std::string>& topology, bool strict, const std::string& format) {
          return format_compare(run_all(scenario, protocols, topology, strict), format_of(format));
        },
        py::arg("scenario"), py::arg("protocols") = std::vector<std::string>{},
        py::arg("topology") = py::none(), py::arg("strict") = true, py::arg("format") = "json",
        "Runs a scenario under several protocols and returns the comparison table.");

  py::class_<Simulator>(m, "Simulator")
      .def(py::init([](const AsGraph& g, const std::string& protocol, Tick delay, Tick quiesce_limit) {
             SimConfig cfg;
             cfg.protocol = protocol_of(protocol);
             cfg.default_delay = delay;
             cfg.quiesce_limit = quiesce_limit;
             return std::make_unique<Simulator>(g, cfg);
           }),
           py::arg("topology"), py::arg("protocol") = "bgp", py::arg("delay") = 1,
           py::arg("quiesce_limit") = 10000)
      .def("originate", [](Simulator& s, Tick t, std::uint32_t as) { s.schedule({t, OriginateEvent{AsId(as)}}); },
           py::arg("time"), py::arg("as_id"))
      .def("link_down", [](Simulator& s, Tick t, std::uint32_t a, std::uint32_t b) {
             s.schedule({t, LinkEvent{AsId(a), AsId(b), false}});
           }, py::arg("time"), py::arg("a"), py::arg("b"))
      .def("link_up", [](Simulator& s, Tick t, std::uint32_t a, std::uint32_t b) {
             s.schedule({t, LinkEvent{AsId(a), AsId(b), true}});
           }, py::arg("time"), py::arg("a"), py::arg("b"))
      .def("run", &Simulator::run)
      .def("run_until", &Simulator::run_until, py::arg("time"))
      .def("best", [](const Simulator& s, std::uint32_t as, std::uint32_t dest) {
             const auto r = s.speaker(AsId(as)).best(AsId(dest));
             return ids(r ? std::optional<Path>(r->as_path) : std::nullopt);
           }, py::arg("as_id"), py::arg("dest"), "Selected default path, or None.")
      .def("probe", [](const Simulator& s, std::uint32_t src, std::uint32_t dst) {
             return probe_dict(s.probe(AsId(src), AsId(dst)));
           }, py::arg("src"), py::arg("dst"))
      .def("report", [](const Simulator& s) { return report_json(s.report()); })
      .def_property_readonly("now", &Simulator::now)
      .def_property_readonly("converged", &Simulator::converged);
}
