// Python bindings. Instances, schedules and profiles cross the boundary as
// the same JSON documents the command line reads and writes; exact rationals
// are passed as "p/q" strings.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "coflow/certificate.hpp"
#include "coflow/coloring.hpp"
#include "coflow/combine.hpp"
#include "coflow/deadlines.hpp"
#include "coflow/generator.hpp"
#include "coflow/json_io.hpp"
#include "coflow/oracle.hpp"

namespace py = pybind11;
using namespace coflow;

namespace {

std::string generate_py(std::uint64_t seed, int left, int right, std::size_t coflows, std::int64_t max_mult,
                     std::size_t max_flows, std::int64_t release_max) {
  GeneratorOptions o{seed, left, right, coflows, max_mult, max_flows, release_max};
  return instance_to_json(generate_instance(o));
}

DeadlineOptions deadline_options(const std::string& mode, std::uint64_t value) {
  DeadlineOptions d;
  if (mode == "candidates") {
    d.mode = CandidateRounding{static_cast<std::size_t>(value)};
  } else if (mode == "seed") {
    d.mode = SeededRounding{value};
  } else {
    throw py::value_error("mode must be \"candidates\" or \"seed\"");
  }
  return d;
}

std::string deadlines_py(const std::string& instance_json, const std::string& mode, std::uint64_t value) {
  const Instance in = instance_from_json(instance_json);
  return profile_to_json(generate_deadlines(in, deadline_options(mode, value)).profile());
}

py::dict solve_py(const std::string& instance_json, const std::vector<std::string>& portfolio,
               const std::optional<std::string>& profile_json, const std::string& mode, std::uint64_t value,
               unsigned jobs) {
  const Instance in = instance_from_json(instance_json);
  std::vector<PortfolioMember> members;
  for (const std::string& m : portfolio) {
    try {
      members.push_back(parse_member(m));
    } catch (const std::invalid_argument& e) {
      throw py::value_error(e.what());
    }
  }
  const CertifiedProfile p = profile_json ? certify(in, profile_from_json(in, *profile_json))
                                          : generate_deadlines(in, deadline_options(mode, value));
  CombinedResult r;
  {
    py::gil_scoped_release release;
    r = combined(in, p, members, jobs);
  }
  py::list outcomes;
  for (const MemberOutcome& m : r.members) {
    py::dict d;
    d["name"] = m.member.name();
    d["cost"] = to_string(m.report.total);
    d["lambda"] = m.lambda ? py::object(py::int_(*m.lambda)) : py::none();
    d["bound"] = m.bound ? py::object(py::str(to_string(*m.bound))) : py::none();
    outcomes.append(d);
  }
  py::dict out;
  out["cost"] = to_string(r.report.total);
  out["completion"] = r.report.completion;
  out["schedule"] = schedule_to_json(r.schedule);
  out["profile"] = profile_to_json(p.profile());
  out["best"] = r.best;
  out["members"] = outcomes;
  return out;
}

py::dict verify_py(const std::string& instance_json, const std::string& schedule_json) {
  const Instance in = instance_from_json(instance_json);
  const Schedule s = schedule_from_json(schedule_json);
  const ValidationReport report = validate(in, s);
  std::vector<std::string> messages;
  for (const Violation& v : report.violations) messages.push_back(v.message);
  py::dict out;
  out["ok"] = report.ok();
  out["violations"] = messages;
  out["cost"] = report.ok() ? py::object(py::str(to_string(cost(in, s).total))) : py::none();
  return out;
}

std::string optimum(const std::string& instance_json, std::int64_t limit) {
  OracleOptions o;
  o.copy_limit = limit;
  return to_string(opt(instance_from_json(instance_json), o).report.total);
}

py::dict certify_py(const std::optional<std::string>& builtin, const std::optional<std::string>& certificate_json) {
  if (builtin.has_value() == certificate_json.has_value()) throw py::value_error("pass exactly one of builtin, json");
  Certificate c;
  try {
    c = builtin ? builtin_certificate(*builtin) : certificate_from_json(*certificate_json);
  } catch (const std::invalid_argument& e) {
    throw py::value_error(e.what());
  }
  const CertificateVerdict v = verify_certificate(c);
  py::dict out;
  out["ok"] = v.ok;
  out["ratio"] = to_string(v.ratio);
  out["summary"] = v.summary(c);
  out["message"] = v.message;
  return out;
}

py::tuple decompose_py(const std::vector<std::tuple<int, int, std::int64_t>>& edges) {
  std::vector<Flow> flows;
  for (const auto& [u, v, m] : edges) flows.push_back({u, v, m});
  const MatchingDecomposition d = decompose(flows);
  py::list classes;
  for (const ColorClass& c : d.classes) classes.append(py::make_tuple(c.items, c.count));
  return py::make_tuple(d.degree, classes);
}

}  // namespace

PYBIND11_MODULE(_coflow, m) {
  m.doc() = "Coflow scheduling: deadlines, allocators, oracle and certificates";
  py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
  py::register_exception<ProfileRejected>(m, "ProfileRejected", PyExc_ValueError);
  py::register_exception<OracleRefused>(m, "OracleRefused", PyExc_RuntimeError);

  m.def("generate", &generate_py, py::arg("seed") = 1, py::arg("left") = 3, py::arg("right") = 3,
        py::arg("coflows") = 3, py::arg("max_mult") = 1, py::arg("max_flows") = 3, py::arg("release_max") = 0,
        "Random instance as JSON.");
  m.def("deadlines", &deadlines_py, py::arg("instance"), py::arg("mode") = "candidates", py::arg("value") = 16,
        "Certified deadline profile as JSON. mode is \"candidates\" (value = count) or \"seed\".");
  m.def("solve", &solve_py, py::arg("instance"), py::arg("portfolio") = std::vector<std::string>{"greedy", "cbf6"},
        py::arg("profile") = py::none(), py::arg("mode") = "candidates", py::arg("value") = 16, py::arg("jobs") = 1,
        "Runs the portfolio and returns cost, schedule, profile and per-member results.");
  m.def("verify", &verify_py, py::arg("instance"), py::arg("schedule"));
  m.def("opt", &optimum, py::arg("instance"), py::arg("limit") = 10, "Exact optimum of a small instance.");
  m.def("certify", &certify_py, py::arg("builtin") = py::none(), py::arg("json") = py::none());
  m.def("decompose", &decompose_py, py::arg("edges"),
        "Kőnig colouring of (u, v, multiplicity) edges: (degree, [(items, count), ...]).");
}
