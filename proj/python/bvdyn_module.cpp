#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "bvdyn/cylmap.hpp"
#include "bvdyn/diagram.hpp"
#include "bvdyn/error.hpp"
#include "bvdyn/measure.hpp"
#include "bvdyn/odometer.hpp"
#include "bvdyn/rank_one.hpp"
#include "bvdyn/symbolic.hpp"
#include "bvdyn/topology.hpp"
#include "bvdyn/towers.hpp"
#include "bvdyn/vershik.hpp"

namespace py = pybind11;
using namespace bvdyn;

namespace {

py::object fraction(const Rational& r) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(to_string(r));
}

py::object integer(const BigInt& n) { return py::int_(py::str(to_string(n))); }

Rational rational(const py::handle& value) {
  return parse_rational(py::str(value).cast<std::string>());
}

py::dict interval(const Interval& i) {
  py::dict d;
  d["lo"] = fraction(i.lo);
  d["hi"] = fraction(i.hi);
  return d;
}

std::vector<std::string> words(const SeqSpace& space, const std::vector<Word>& ws) {
  std::vector<std::string> out;
  for (const auto& w : ws) out.push_back(format_word(space, w));
  return out;
}

std::vector<Word> parse_words(const SeqSpace& space, const std::vector<std::string>& ws) {
  std::vector<Word> out;
  for (const auto& w : ws) out.push_back(parse_word(space, w));
  return out;
}

PathPrefix path_arg(const Diagram& d, const py::handle& p) {
  if (py::isinstance<py::str>(p)) return parse_path(d, p.cast<std::string>());
  return PathPrefix{p.cast<std::vector<std::size_t>>()};
}

std::string path_text(const Diagram& d, const PathPrefix& p) { return format_path(d, p, true); }

MarkerSeq markers(const CylMap& t, const std::string& kind) {
  if (kind == "zeros") return MarkerSeq::zeros(t);
  if (kind == "ones") return MarkerSeq::ones(t);
  throw InvalidArgument("markers must be 'zeros' or 'ones'");
}

}  // namespace

PYBIND11_MODULE(_bvdyn, m) {
  m.doc() = "Ordered Bratteli diagrams, Vershik maps and symbolic automorphisms";

  static py::exception<Error> error(m, "Error");
  static py::exception<InvalidArgument> invalid(m, "InvalidArgument", error.ptr());
  static py::exception<SpaceMismatch> mismatch(m, "SpaceMismatch", invalid.ptr());
  static py::exception<BudgetExceeded> budget(m, "BudgetExceeded", error.ptr());
  static py::exception<ParseError> parse_error(m, "ParseError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      py::object inst = py::reinterpret_borrow<py::object>(parse_error.ptr())(e.what());
      inst.attr("line") = e.line();
      inst.attr("column") = e.column();
      inst.attr("message") = e.message();
      PyErr_SetObject(parse_error.ptr(), inst.ptr());
    } catch (const SpaceMismatch& e) {
      PyErr_SetString(mismatch.ptr(), e.what());
    } catch (const InvalidArgument& e) {
      PyErr_SetString(invalid.ptr(), e.what());
    } catch (const BudgetExceeded& e) {
      PyErr_SetString(budget.ptr(), e.what());
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), e.what());
    }
  });

  py::class_<SeqSpace>(m, "SeqSpace")
      .def(py::init([](const std::string& text) { return SeqSpace::parse(text); }), py::arg("text") = "2")
      .def("alphabet", &SeqSpace::alphabet)
      .def("cylinder_count", &SeqSpace::cylinder_count)
      .def("__str__", &SeqSpace::to_string)
      .def("__repr__", [](const SeqSpace& s) { return "SeqSpace('" + s.to_string() + "')"; })
      .def("__eq__", [](const SeqSpace& a, const SeqSpace& b) { return a == b; });

  py::class_<Diagram>(m, "Diagram")
      .def_static("parse", &Diagram::parse, py::arg("text"))
      .def_static("odometer", &to_vershik_diagram, py::arg("space"), py::arg("levels"))
      .def_property_readonly("truncation", &Diagram::truncation)
      .def_property_readonly("stationary", &Diagram::stationary)
      .def("vertex_count", &Diagram::vertex_count, py::arg("level"))
      .def("to_text", &Diagram::to_text)
      .def("__eq__", [](const Diagram& a, const Diagram& b) { return a == b; });

  m.def(
      "validate",
      [](const Diagram& d, std::optional<std::size_t> levels) {
        py::list out;
        for (const auto& x : validate(d, levels.value_or(d.truncation()))) {
          py::dict e;
          e["kind"] = to_string(x.kind);
          e["level"] = x.level;
          e["vertex"] = x.vertex;
          e["message"] = x.message;
          out.append(e);
        }
        return out;
      },
      py::arg("diagram"), py::arg("levels") = py::none(), "Structural defects; empty when valid.");
  m.def(
      "no_cofinal_extremes",
      [](const Diagram& d) { return to_string(check_no_cofinal_extremes(d).answer); }, py::arg("diagram"));
  m.def("telescope", &telescope, py::arg("diagram"), py::arg("cuts"));
  m.def("split", &split, py::arg("diagram"), py::arg("level"));
  m.def(
      "incidence",
      [](const Diagram& d, std::size_t n) {
        py::list rows;
        for (const auto& row : incidence(d, n)) {
          py::list r;
          for (const auto& x : row) r.append(integer(x));
          rows.append(r);
        }
        return rows;
      },
      py::arg("diagram"), py::arg("level"));
  m.def(
      "heights",
      [](const Diagram& d, std::size_t n) {
        py::list out;
        for (const auto& h : heights(d, n)) out.append(integer(h));
        return out;
      },
      py::arg("diagram"), py::arg("level"));
  m.def(
      "rank", [](const Diagram& d, const py::handle& p) { return integer(rank(d, path_arg(d, p))); },
      py::arg("diagram"), py::arg("path"), "Rank of a path given as labels '1,1,0' or edge indices.");
  m.def(
      "unrank",
      [](const Diagram& d, std::size_t n, std::size_t v, const py::object& i) {
        return path_text(d, unrank(d, n, v, BigInt(py::str(i).cast<std::string>())));
      },
      py::arg("diagram"), py::arg("level"), py::arg("vertex"), py::arg("index"));
  m.def(
      "successor",
      [](const Diagram& d, const py::handle& p) -> std::optional<std::string> {
        auto q = successor(d, path_arg(d, p));
        if (!q) return std::nullopt;
        return path_text(d, *q);
      },
      py::arg("diagram"), py::arg("path"), "Next path in the order, or None on a maximal path.");
  m.def(
      "predecessor",
      [](const Diagram& d, const py::handle& p) -> std::optional<std::string> {
        auto q = predecessor(d, path_arg(d, p));
        if (!q) return std::nullopt;
        return path_text(d, *q);
      },
      py::arg("diagram"), py::arg("path"));

  m.def(
      "add_one",
      [](const std::string& space, const std::string& x) {
        const SeqSpace s = SeqSpace::parse(space);
        return format_point(s, add_one(AdicInt::parse(s, x)).digits());
      },
      py::arg("space"), py::arg("point"), "x + 1 in the adic integers, digits least significant first.");
  m.def(
      "add",
      [](const std::string& space, const std::string& x, const std::string& b) {
        const SeqSpace s = SeqSpace::parse(space);
        return format_point(s, add(AdicInt::parse(s, x), AdicInt::parse(s, b)).digits());
      },
      py::arg("space"), py::arg("x"), py::arg("y"));

  py::class_<CylMap>(m, "CylMap")
      .def_static("parse", &CylMap::parse, py::arg("text"))
      .def_static("identity", &CylMap::identity, py::arg("space"))
      .def_static(
          "odometer", [](const SeqSpace& s) { return odometer_map(s); }, py::arg("space") = SeqSpace())
      .def_static(
          "translation",
          [](const SeqSpace& s, const std::string& b) { return translation_map(AdicInt::parse(s, b)); },
          py::arg("space"), py::arg("digits"))
      .def_static(
          "from_rules",
          [](const SeqSpace& s, const std::vector<std::pair<std::string, std::string>>& rules) {
            std::vector<std::pair<Word, Word>> r;
            for (const auto& [u, w] : rules) r.emplace_back(parse_word(s, u), parse_word(s, w));
            return CylMap::from_prefix_rules(s, r);
          },
          py::arg("space"), py::arg("rules"))
      .def_property_readonly("space", &CylMap::space)
      .def("apply",
           [](const CylMap& t, const std::string& x) {
             return format_point(t.space(), t.apply(parse_point(t.space(), x)));
           }, py::arg("point"))
      .def("image_word",
           [](const CylMap& t, const std::string& u) {
             return format_word(t.space(), t.image_word(parse_word(t.space(), u)));
           }, py::arg("word"))
      .def("rules",
           [](const CylMap& t, std::size_t depth) {
             bool complete = true;
             py::list out;
             for (const auto& [u, w] : t.rules(depth, &complete))
               out.append(py::make_tuple(format_word(t.space(), u), format_word(t.space(), w)));
             return py::make_tuple(out, complete);
           }, py::arg("max_depth"), "Prefix rules and whether they cover every branch.")
      .def("inverse", &CylMap::inverse)
      .def("power", &CylMap::power, py::arg("n"))
      .def("is_identity", &CylMap::is_identity)
      .def("to_text", &CylMap::to_text)
      .def("__matmul__", [](const CylMap& s, const CylMap& t) { return compose(s, t); })
      .def("__eq__", [](const CylMap& a, const CylMap& b) { return a == b; });

  py::class_<MeasureSpec>(m, "Measure")
      .def_static("parse", &MeasureSpec::parse, py::arg("text"))
      .def_static("uniform", &MeasureSpec::uniform, py::arg("space") = SeqSpace())
      .def_static(
          "dirac", [](const SeqSpace& s, const std::string& x) { return MeasureSpec::dirac(s, parse_point(s, x)); },
          py::arg("space"), py::arg("point"))
      .def_static(
          "bernoulli",
          [](const SeqSpace& s, const std::vector<py::object>& p) {
            ProbVector v;
            for (const auto& x : p) v.push_back(rational(x));
            return MeasureSpec::bernoulli(s, v);
          },
          py::arg("space"), py::arg("probabilities"))
      .def("mass", [](const MeasureSpec& mu, const std::string& u) { return fraction(mu.mass(parse_word(mu.space(), u))); },
           py::arg("word"))
      .def("to_text", &MeasureSpec::to_text);

  m.def(
      "diff_set",
      [](const CylMap& s, const CylMap& t, std::size_t depth) {
        const Classification c = diff_set(s, t, depth);
        const CylinderIndexer idx(s.space(), c.depth);
        py::dict out;
        for (CellClass k : {CellClass::Equal, CellClass::Different, CellClass::Unresolved}) {
          py::list cells;
          for (auto i : c.indices(k)) cells.append(format_word(s.space(), idx.word(i)));
          out[py::str(to_string(k))] = cells;
        }
        return out;
      },
      py::arg("s"), py::arg("t"), py::arg("depth"), "Depth-d cylinders classified by whether S and T agree.");
  m.def(
      "dist_uniform",
      [](const CylMap& s, const CylMap& t, const MeasureSpec& mu, std::size_t depth) {
        return interval(dist_uniform(s, t, mu, depth));
      },
      py::arg("s"), py::arg("t"), py::arg("measure"), py::arg("depth"));
  m.def(
      "sup_symdiff",
      [](const CylMap& s, const CylMap& t, const MeasureSpec& mu, std::size_t depth) {
        const SymDiffResult r = sup_symdiff(s, t, mu, depth);
        py::dict out;
        out["lower"] = fraction(r.lower);
        out["upper"] = fraction(r.upper);
        out["witness"] = words(s.space(), r.witness);
        out["exhaustive"] = r.exhaustive;
        return out;
      },
      py::arg("s"), py::arg("t"), py::arg("measure"), py::arg("depth"));
  m.def(
      "sup_abs_diff",
      [](const CylMap& s, const CylMap& t, const MeasureSpec& mu, std::size_t depth) {
        return fraction(sup_abs_diff(s, t, mu, depth));
      },
      py::arg("s"), py::arg("t"), py::arg("measure"), py::arg("depth"));
  m.def(
      "d_D", [](const CylMap& s, const CylMap& t, std::size_t depth) { return interval(d_D(s, t, depth)); },
      py::arg("s"), py::arg("t"), py::arg("depth") = 0);
  m.def(
      "witness",
      [](std::size_t depth) {
        const SeparationWitness w = separation_witness(depth);
        py::dict out;
        out["t"] = w.t;
        out["s"] = w.s;
        out["depth"] = w.depth;
        out["sup_abs_diff"] = fraction(w.sup_abs_diff);
        out["dist"] = interval(w.dist);
        return out;
      },
      py::arg("depth") = 4, "A pair with equal pushforwards that differ on a set of positive mass.");

  m.def(
      "towers",
      [](const CylMap& t, const std::vector<std::string>& a) {
        const TowerPartition xi = build_towers(t, parse_words(t.space(), a));
        py::list out;
        for (std::size_t k = 0; k < xi.towers.size(); ++k) {
          py::dict d;
          d["height"] = xi.towers[k].height;
          d["base"] = words(t.space(), xi.base(k));
          out.append(d);
        }
        return out;
      },
      py::arg("t"), py::arg("base"), "Return-time towers over a cylinder union.");
  m.def(
      "periodic_approx", [](const CylMap& t, std::size_t n, const std::string& kind) {
        return periodic_approx(markers(t, kind), n);
      },
      py::arg("t"), py::arg("n"), py::arg("markers") = "zeros");
  m.def(
      "induced",
      [](const CylMap& t, const std::vector<std::string>& a) { return induced(t, parse_words(t.space(), a)); },
      py::arg("t"), py::arg("base"));
  m.def(
      "rokhlin",
      [](const CylMap& t, std::size_t m_, const py::object& eps, const std::vector<MeasureSpec>& measures,
         std::optional<std::size_t> n, const std::string& kind) {
        const RokhlinResult r = rokhlin_set(markers(t, kind), m_, rational(eps), measures, n);
        py::dict out;
        out["n"] = r.n;
        out["f"] = words(t.space(), r.f);
        out["disjoint"] = r.disjoint;
        out["certified"] = r.certified;
        py::list cov;
        for (const auto& x : r.measures) cov.append(fraction(x.coverage));
        out["coverage"] = cov;
        return out;
      },
      py::arg("t"), py::arg("m"), py::arg("eps"), py::arg("measures"), py::arg("n") = py::none(),
      py::arg("markers") = "zeros");

  m.def(
      "rank1_heights",
      [](const std::string& spec_text, std::optional<std::size_t> stages) {
        const CuttingStackingSpec spec = CuttingStackingSpec::parse(spec_text);
        const RankOne r = rank1_build(spec, stages.value_or(spec.stages.size()));
        py::list out;
        for (const auto& h : r.heights) out.append(integer(h));
        return out;
      },
      py::arg("spec"), py::arg("stages") = py::none(), "Tower heights h_0..h_N of a cutting-and-stacking spec.");
  m.def(
      "rank1_diagram",
      [](const std::string& spec_text, std::optional<std::size_t> stages) {
        const CuttingStackingSpec spec = CuttingStackingSpec::parse(spec_text);
        return rank1_build(spec, stages.value_or(spec.stages.size())).diagram;
      },
      py::arg("spec"), py::arg("stages") = py::none());
}
