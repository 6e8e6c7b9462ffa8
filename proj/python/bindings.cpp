#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "forge/analysis.hpp"
#include "forge/errors.hpp"
#include "forge/group.hpp"
#include "forge/parallel.hpp"
#include "forge/pipeline.hpp"

namespace py = pybind11;
using namespace forge;

namespace {

// Reports cross the boundary as JSON text; the Python side decodes them.
std::string run_json(const std::string& spec, std::optional<std::size_t> radius, bool audits_only, bool timings) {
  PipelineOptions opts;
  opts.radius = radius;
  opts.audits_only = audits_only;
  opts.timings = timings;
  Json parsed;
  try {
    parsed = Json::parse(spec);
  } catch (const std::exception& e) {
    RunReport r;
    r.invalid = true;
    r.error = std::string("InvalidSpec: ") + e.what();
    return r.to_json().dump();
  }
  return run_pipeline(parsed, opts).to_json().dump();
}

BallView plain(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  return plain_graph(n, edges);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "forge core: group actions on graphs";

  py::register_exception<ForgeError>(m, "ForgeError");

  m.def("run_pipeline_json", &run_json, py::arg("spec"), py::arg("radius") = std::nullopt,
        py::arg("audits_only") = false, py::arg("timings") = false);
  m.def("builtin_names", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& e : builtin_examples()) out.emplace_back(e.name, e.summary);
    return out;
  });
  m.def("builtin_json", [](const std::string& name) -> std::optional<std::string> {
    auto s = builtin_example(name);
    if (!s) return std::nullopt;
    return s->dump();
  });
  m.def("set_parallelism", &set_parallelism, py::arg("threads"));
  m.def("parallelism", &parallelism);

  py::class_<Group, std::shared_ptr<Group>>(m, "Group")
      .def_property_readonly("name", &Group::name)
      .def_property_readonly("generators", &Group::generators)
      .def_property_readonly("kind", [](const Group& g) { return to_string(g.kind()); })
      .def("order", &Group::order)
      .def("normalize", [](const Group& g, const std::string& w) { return g.format(g.normalize(g.parse(w))); })
      .def("multiply",
           [](const Group& g, const std::string& a, const std::string& b) {
             return g.format(g.multiply(g.parse(a), g.parse(b)));
           })
      .def("equal", [](const Group& g, const std::string& a, const std::string& b) {
        return g.equal(g.parse(a), g.parse(b));
      });

  // Groups are immutable; the const shared pointers are handed out as mutable ones for pybind.
  auto expose = [](GroupPtr g) { return std::const_pointer_cast<Group>(g); };
  m.def("free_group", [=](const std::string& name, std::vector<std::string> gens) {
    return expose(make_free_group(name, std::move(gens)));
  });
  m.def("free_abelian_group", [=](const std::string& name, std::vector<std::string> gens) {
    return expose(make_free_abelian_group(name, std::move(gens)));
  });
  m.def("cyclic_group", [=](const std::string& name, const std::string& gen, std::uint32_t n) {
    return expose(make_cyclic_group(name, gen, n));
  });
  m.def("permutation_group", [=](const std::string& name, std::vector<std::string> gens,
                                 const std::vector<std::vector<std::uint32_t>>& perms) {
    return expose(make_permutation_group(name, std::move(gens), perms));
  });
  m.def("free_product", [=](const std::string& name, const std::vector<std::shared_ptr<Group>>& factors) {
    std::vector<GroupPtr> fs(factors.begin(), factors.end());
    return expose(make_free_product(name, std::move(fs)));
  });

  m.def(
      "delta",
      [](std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
        return delta_estimate(plain(n, edges)).delta;
      },
      py::arg("n"), py::arg("edges"));
  m.def(
      "angle",
      [](std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges, std::size_t v, std::size_t x,
         std::size_t y) { return angle(v, x, y, plain(n, edges)).value; },
      py::arg("n"), py::arg("edges"), py::arg("v"), py::arg("x"), py::arg("y"));
  m.def(
      "embedded_path_count",
      [](std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges, std::size_t x, std::size_t y,
         std::size_t len) { return embedded_path_count(x, y, len, plain(n, edges)); },
      py::arg("n"), py::arg("edges"), py::arg("x"), py::arg("y"), py::arg("length"));
}
