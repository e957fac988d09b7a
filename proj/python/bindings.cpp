#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "flatblock/autos.h"
#include "flatblock/cli.h"

namespace py = pybind11;
using namespace flatblock;

namespace {

py::object to_python(const cli::Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

std::vector<SurfacePoint> points(const Surface& m, const std::vector<std::string>& texts) {
  std::vector<SurfacePoint> out;
  for (const auto& t : texts) out.push_back(parse_point(m, t));
  return out;
}

EnumerationOptions options(int workers) {
  EnumerationOptions o;
  o.workers = workers;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Exact blocking and illumination queries on translation surfaces";

  py::register_exception<Error>(mod, "FlatblockError");

  py::class_<Surface>(mod, "Surface")
      .def_property_readonly("name", &Surface::name)
      .def_property_readonly("genus", &Surface::genus)
      .def_property_readonly("num_faces", &Surface::num_faces)
      .def_property_readonly("field", &Surface::field)
      .def_property_readonly("area", [](const Surface& m) { return m.area().str(); })
      .def_property_readonly("cone_multiplicities",
                             [](const Surface& m) {
                               std::vector<int> out;
                               for (const auto& v : m.vertex_classes()) out.push_back(v.multiplicity);
                               return out;
                             })
      .def("serialize", [](const Surface& m) { return serialize_surface(m); })
      .def("__repr__", [](const Surface& m) { return "<Surface " + m.name() + ">"; });

  mod.def("builtin", [](const std::string& spec) { return builtin(spec); }, py::arg("spec"));
  mod.def("builtin_names", &builtin_names);
  mod.def("parse_surface", [](const std::string& text) { return parse_surface(text); }, py::arg("text"));
  mod.def("load_surface", &load_surface, py::arg("path"));

  mod.def(
      "segments",
      [](const Surface& m, const std::string& x, const std::string& y, const std::string& budget, int workers) {
        std::vector<std::string> out;
        for (const auto& s : segments_between(m, parse_point(m, x), parse_point(m, y), Scalar::parse(budget),
                                              options(workers)))
          out.push_back(s.str());
        return out;
      },
      py::arg("surface"), py::arg("x"), py::arg("y"), py::arg("budget_len_sq"), py::arg("workers") = 1,
      "Segment records from x to y within the length^2 budget.");

  mod.def(
      "verify_blocking",
      [](const Surface& m, const std::string& x, const std::string& y, const std::string& budget,
         const std::vector<std::string>& set) {
        auto r = verify_blocking(m, parse_point(m, x), parse_point(m, y), Scalar::parse(budget), points(m, set));
        py::dict d;
        d["blocked"] = r.blocked;
        d["segments"] = r.segments;
        d["witness"] = r.witness ? py::object(py::str(r.witness->str())) : py::object(py::none());
        return d;
      },
      py::arg("surface"), py::arg("x"), py::arg("y"), py::arg("budget_len_sq"), py::arg("blockers"));

  mod.def(
      "bc_report",
      [](const Surface& m, const std::string& x, const std::string& y, const std::string& budget, int workers) {
        return to_python(
            cli::to_json(bc_report(m, parse_point(m, x), parse_point(m, y), Scalar::parse(budget), options(workers))));
      },
      py::arg("surface"), py::arg("x"), py::arg("y"), py::arg("budget_len_sq"), py::arg("workers") = 1);

  mod.def(
      "torus_cover", [](const Surface& m) { return to_python(cli::to_json(torus_cover(m))); }, py::arg("surface"));

  mod.def(
      "cylinders",
      [](const Surface& m, const std::string& dir) {
        return to_python(cli::to_json(cylinder_decomposition(m, parse_vec2(dir))));
      },
      py::arg("surface"), py::arg("direction"));

  mod.def(
      "purely_periodic",
      [](const Surface& m, const std::string& dir) {
        auto v = purely_periodic_in_direction(m, parse_vec2(dir));
        const char* names[] = {"yes", "no", "undecided"};
        return std::string(names[static_cast<int>(v.kind)]);
      },
      py::arg("surface"), py::arg("direction"));

  mod.def(
      "weierstrass_points",
      [](const Surface& m) {
        std::vector<std::string> out;
        for (const auto& p : weierstrass_points(m)) out.push_back(format_point(p));
        return out;
      },
      py::arg("surface"));

  mod.def(
      "unfold",
      [](const std::vector<std::string>& vertices, const std::vector<std::string>& angles, long field) {
        RationalPolygon p;
        p.field_d = field;
        for (const auto& v : vertices) p.vertices.push_back(parse_vec2(v));
        for (const auto& a : angles) p.angles.push_back(parse_rational(a));
        Unfolding u = unfold_billiard(p);
        return py::make_tuple(u.surface, u.group.size());
      },
      py::arg("vertices"), py::arg("angles"), py::arg("field") = 1,
      "Unfolded surface and the order of the reflection group.");

  mod.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a CLI command; returns (exit code, stdout, stderr).");
}
