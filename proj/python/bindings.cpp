#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "totalk/cli.hpp"
#include "totalk/errors.hpp"
#include "totalk/io.hpp"
#include "totalk/verify.hpp"

#include <sstream>

namespace py = pybind11;
using namespace totalk;

namespace {

IntMatrix from_py(const std::vector<std::vector<py::int_>>& rows) {
  std::vector<std::vector<Integer>> m;
  for (const auto& row : rows) {
    std::vector<Integer> r;
    for (const auto& v : row) r.emplace_back(std::string(py::str(v)));
    m.push_back(r);
  }
  if (m.empty() || m[0].empty()) throw InputError("empty matrix");
  for (const auto& r : m)
    if (r.size() != m[0].size()) throw InputError("rows have different lengths");
  return IntMatrix::from_rows(m);
}

py::int_ to_py(const Integer& n) { return py::int_(py::str(n.get_str())); }

py::dict report_dict(const VerifyReport& r) {
  py::dict d;
  d["check"] = r.check;
  d["pass"] = r.pass;
  d["outcome"] = r.outcome;
  py::list subs;
  for (const auto& s : r.subs) subs.append(py::make_tuple(s.name, s.pass, s.detail));
  d["subs"] = subs;
  py::list ws;
  for (const auto& w : r.witnesses) {
    py::dict wd;
    wd["location"] = w.location;
    wd["element"] = w.element;
    wd["image"] = w.image;
    wd["lhs"] = w.lhs;
    wd["rhs"] = w.rhs;
    ws.append(wd);
  }
  d["witnesses"] = ws;
  return d;
}

}  // namespace

PYBIND11_MODULE(_totalk, m) {
  m.doc() = "Exact total K-theory computations";

  py::register_exception<Error>(m, "TotalKError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("odd_part", py::overload_cast<long>(&odd_part), py::arg("n"));

  m.def(
      "smith_normal_form",
      [](const std::vector<std::vector<py::int_>>& rows) {
        SmithForm f = smith_normal_form(from_py(rows));
        py::dict d;
        py::list diag;
        for (const auto& v : f.diagonal) diag.append(to_py(v));
        d["diagonal"] = diag;
        d["rank"] = f.rank;
        auto conv = [](const IntMatrix& x) {
          py::list out;
          for (const auto& row : x.to_rows()) {
            py::list r;
            for (const auto& v : row) r.append(to_py(v));
            out.append(r);
          }
          return out;
        };
        d["U"] = conv(f.U);
        d["S"] = conv(f.S);
        d["V"] = conv(f.V);
        return d;
      },
      py::arg("rows"), "Smith form S = U*M*V of an integer matrix given as a list of rows.");

  m.def(
      "cokernel",
      [](const std::vector<std::vector<py::int_>>& rows) { return cokernel_presentation(from_py(rows)).group.to_string(); },
      py::arg("relations"), "Canonical form of the group presented by the columns of the matrix.");

  m.def("fixture_names", &fixture_names);

  m.def(
      "fixture_group",
      [](const std::string& name, int j, long n, long bound) {
        auto b = load_fixture(name, bound);
        if (!b.k->has(j, n)) throw OutOfRange(name + " has no level " + level_string(j, n));
        const GroupExpr& g = b.k->group(j, n);
        py::dict d;
        d["group"] = g.to_string();
        d["structure"] = is_finitely_generated(g) ? py::object(py::str(fg_structure(g).to_string())) : py::object(py::none());
        return d;
      },
      py::arg("name"), py::arg("j"), py::arg("n"), py::arg("bound") = 24);

  m.def(
      "verify",
      [](const std::vector<std::string>& checks, long max_coeff, long window) {
        VerifyConfig cfg;
        cfg.max_coeff = max_coeff;
        cfg.window = window;
        cfg.checks = checks;
        std::vector<VerifyReport> reports;
        {
          py::gil_scoped_release release;
          reports = run_all(cfg);
        }
        py::list out;
        for (const auto& r : reports) out.append(report_dict(r));
        return out;
      },
      py::arg("checks") = std::vector<std::string>{}, py::arg("max_coeff") = 24, py::arg("window") = 12);

  m.def(
      "de_conjugation",
      [](long k, long bound) { return report_dict(verify_de_conjugation(k, bound)); },
      py::arg("k"), py::arg("bound") = 24);

  m.def(
      "check_document",
      [](const std::string& text) {
        auto doc = parse_input(text);
        py::list out;
        for (const auto& r : run_assertions(doc)) {
          py::dict d;
          d["kind"] = r.kind;
          d["expected"] = r.expected;
          d["observed"] = r.observed;
          d["pass"] = r.pass;
          out.append(d);
        }
        return out;
      },
      py::arg("text"), "Run the assertions of a JSON input document.");

  m.def("canonical_document", [](const std::string& text) { return serialize(parse_input(text)); }, py::arg("text"));

  m.def(
      "main",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = dispatch(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command line front end; returns (exit code, stdout, stderr).");
}
