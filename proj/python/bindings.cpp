#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "treefac/adelic.hpp"
#include "treefac/error.hpp"
#include "treefac/factorials.hpp"
#include "treefac/flow.hpp"
#include "treefac/realize.hpp"

namespace py = pybind11;
using namespace treefac;

namespace {

py::object to_py_int(const BigInt& x) {
  return py::reinterpret_steal<py::object>(PyLong_FromString(x.str().c_str(), nullptr, 10));
}

BigInt from_py_int(const py::handle& h) { return BigInt(py::str(h).cast<std::string>()); }

py::object to_fraction(const Rational& r) {
  static py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(to_py_int(numerator(r)), to_py_int(denominator(r)));
}

Rational from_py_rational(const py::handle& h) {
  if (py::isinstance<py::int_>(h)) return Rational(from_py_int(h));
  if (py::hasattr(h, "numerator") && py::hasattr(h, "denominator") && !py::isinstance<py::float_>(h)) {
    return Rational(from_py_int(h.attr("numerator")), from_py_int(h.attr("denominator")));
  }
  const auto r = parse_rational(py::str(h).cast<std::string>());
  if (!r) throw py::value_error("not a rational: " + py::str(h).cast<std::string>());
  return *r;
}

py::list fractions(const std::vector<Rational>& values) {
  py::list out;
  for (const auto& v : values) out.append(to_fraction(v));
  return out;
}

std::vector<BigInt> int_list(const py::iterable& xs) {
  std::vector<BigInt> out;
  for (auto x : xs) out.push_back(from_py_int(x));
  return out;
}

TreeSource as_source(const py::object& obj) {
  if (py::isinstance<py::str>(obj)) return parse_generator_spec(obj.cast<std::string>());
  if (py::isinstance<RootedTree>(obj)) return TreeSource::explicit_tree(obj.cast<RootedTree>());
  return obj.cast<TreeSource>();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  static py::exception<Error> base(m, "TreeFacError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(base, (e.kind() + ": " + e.what()).c_str());
    }
  });

  py::class_<RootedTree>(m, "Tree")
      .def_static("parse", &parse_tree_file, py::arg("text"))
      .def("to_text", &write_tree_file)
      .def("__len__", &RootedTree::size)
      .def_property_readonly("edge_count", &RootedTree::edge_count)
      .def("capacity_bound",
           [](const RootedTree& t) -> py::object {
             const auto c = capacity_bound(t);
             if (c.is_infinite()) return py::float_(INFINITY);
             return py::int_(c.value());
           })
      .def("metric_signature", &metric_signature)
      .def("resistance", [](const RootedTree& t) { return to_fraction(effective_resistance(t)); });

  py::class_<TreeSource>(m, "Source")
      .def_static("parse", [](const std::string& spec) { return parse_generator_spec(spec); })
      .def_static("regular", [](std::uint32_t d, const py::object& len) {
                    return TreeSource::regular(d, from_py_rational(len));
                  }, py::arg("d"), py::arg("length") = 1)
      .def_static("adelic", [](const py::iterable& set, const py::object& p) {
                    return TreeSource::adelic(int_list(set), from_py_int(p));
                  }, py::arg("set"), py::arg("p"))
      .def("describe", &TreeSource::describe)
      .def("expand", [](const TreeSource& s, std::uint32_t depth) { return expand(s, depth); }, py::arg("depth"));

  m.def("factorials",
        [](const py::object& src, std::size_t n, const std::string& method, std::optional<std::uint64_t> seed) {
          const TreeSource source = as_source(src);
          if (method == "weighting") {
            return fractions(
                factorials_weighting(source, n, seed ? TieBreakPolicy::seeded(*seed) : TieBreakPolicy{}).values);
          }
          const RootedTree* tree = source.tree();
          if (!tree) throw py::value_error(method + " needs an explicit tree");
          if (method == "greedy") return fractions(factorials_greedy_oracle(*tree, n).values);
          if (method == "minmax") return fractions(factorials_minmax(*tree, n).values);
          throw py::value_error("unknown method " + method);
        },
        py::arg("source"), py::arg("n"), py::arg("method") = "weighting", py::arg("seed") = py::none());

  m.def("factorials_removed",
        [](const py::object& src, std::size_t t, std::size_t n) {
          return fractions(factorials_removed(as_source(src), t, n).values);
        },
        py::arg("source"), py::arg("t"), py::arg("n"));

  m.def("bhargava_factorials",
        [](const py::iterable& set, std::size_t n) {
          py::list out;
          for (const auto& v : bhargava_factorials(int_list(set), n)) out.append(to_py_int(v));
          return out;
        },
        py::arg("set"), py::arg("n"));

  m.def("resistance",
        [](const py::object& src, std::uint32_t depth) -> py::object {
          const auto r = effective_resistance(as_source(src), depth, SolveMode::Auto);
          if (r.value) return to_fraction(*r.value);
          return py::float_(r.approx);
        },
        py::arg("source"), py::arg("depth"));

  m.def("unit_flow",
        [](const py::object& src, std::uint32_t depth) {
          const auto f = unit_current_flow(as_source(src), depth, SolveMode::Exact);
          py::dict out;
          for (NodeId v = 1; v < f.tree.size(); ++v) {
            out[py::make_tuple(*f.tree.parent(v), v)] = to_fraction(f.flow[v]);
          }
          return out;
        },
        py::arg("source"), py::arg("depth"));

  m.def("branching_number",
        [](const py::object& src, const py::object& tol) {
          BranchingOptions options;
          options.tol = from_py_rational(tol);
          const auto e = branching_number_estimate(as_source(src), options);
          return py::make_tuple(to_fraction(e.lo), to_fraction(e.hi));
        },
        py::arg("source"), py::arg("tol") = py::str("1/64"));

  m.def("realize",
        [](const std::string& csv, bool check) -> py::object {
          const auto seq = parse_biased_csv(std::string_view(csv));
          if (check) return fractions(verify_roundtrip(seq, {}, seq.depth()).produced);
          return py::cast(realize_lengths(seq, {}, seq.depth()));
        },
        py::arg("csv"), py::arg("check") = false);
}
