#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "bvdyn/diagram.hpp"
#include "bvdyn/error.hpp"
#include "bvdyn/odometer.hpp"
#include "bvdyn/rank_one.hpp"
#include "bvdyn/symbolic.hpp"
#include "bvdyn/topology.hpp"
#include "bvdyn/towers.hpp"
#include "bvdyn/vershik.hpp"

using namespace bvdyn;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kInputError = 2;

/// Bad input: unreadable files, malformed text, inconsistent options.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string output = "text";
  std::uint64_t seed = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

template <class F>
auto parse_file(const std::string& path, F parse) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  } catch (const Error& e) {
    throw InputError(path + ": " + e.what());
  }
}

Diagram load_diagram(const std::string& path) {
  return parse_file(path, [](const std::string& t) { return Diagram::parse(t); });
}

SeqSpace load_space(const std::string& text) {
  try {
    return SeqSpace::parse(text);
  } catch (const Error& e) {
    throw InputError(std::string("--space: ") + e.what());
  }
}

CylMap load_map(const std::string& path, const SeqSpace& space) {
  if (path.empty() || path == "odometer") return odometer_map(space);
  CylMap m = parse_file(path, [](const std::string& t) { return CylMap::parse(t); });
  if (!(m.space() == space)) throw InputError(path + ": map lives on " + m.space().to_string() + ", not " + space.to_string());
  return m;
}

MeasureSpec load_measure(const std::string& spec, const SeqSpace& space) {
  if (spec == "uniform") return MeasureSpec::uniform(space);
  if (spec.rfind("dirac:", 0) == 0) {
    try {
      return MeasureSpec::dirac(space, parse_point(space, spec.substr(6)));
    } catch (const Error& e) {
      throw InputError("--measure: " + std::string(e.what()));
    }
  }
  MeasureSpec mu = parse_file(spec, [](const std::string& t) { return MeasureSpec::parse(t); });
  if (!(mu.space() == space)) throw InputError(spec + ": measure lives on " + mu.space().to_string());
  return mu;
}

MarkerSeq load_markers(const std::string& name, const CylMap& t) {
  if (name == "zeros") return MarkerSeq::zeros(t);
  if (name == "ones") return MarkerSeq::ones(t);
  throw InputError("--markers: expected 'zeros' or 'ones', got '" + name + "'");
}

Rational load_rational(const std::string& text, const char* flag) {
  try {
    return parse_rational(text);
  } catch (const Error& e) {
    throw InputError(std::string(flag) + ": " + e.what());
  }
}

Rational load_eps(const std::string& text) {
  Rational eps = load_rational(text, "--eps");
  if (eps <= 0 || eps >= 1) throw InputError("--eps must lie in (0, 1)");
  return eps;
}

std::vector<std::size_t> parse_list(const std::string& text, const char* flag) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos || item.size() > 9) {
      throw InputError(std::string(flag) + ": malformed list '" + text + "'");
    }
    out.push_back(std::stoul(item));
  }
  return out;
}

std::string words(const SeqSpace& space, const std::vector<Word>& ws) {
  if (ws.empty()) return "(empty)";
  std::string s;
  for (std::size_t i = 0; i < ws.size(); ++i) s += (i ? " " : "") + ("[" + format_word(space, ws[i]) + "]");
  return s;
}

Json word_list(const SeqSpace& space, const std::vector<Word>& ws) {
  Json a = Json::array();
  for (const auto& w : ws) a.push_back(format_word(space, w));
  return a;
}

/// A report with parallel text and structured renderings.
class Report {
 public:
  Report(std::string verb, const Options& o) : opts_(o) {
    doc_["schema"] = "bvdyn/" + verb + "/1";
    doc_["verb"] = verb;
  }

  template <class V>
  void field(const std::string& key, const V& value, const std::string& text) {
    doc_[key] = value;
    lines_ += key + ": " + text + "\n";
  }
  void field(const std::string& key, const std::string& value) { field(key, value, value); }
  void field(const std::string& key, const Rational& value) { field(key, to_string(value), to_string(value)); }
  void json(const std::string& key, Json value) { doc_[key] = std::move(value); }
  void text(const std::string& block) { lines_ += block; }

  int emit(int code) {
    doc_["status"] = code == kOk ? "ok" : "failed";
    if (opts_.output == "structured") {
      std::cout << doc_.dump(2) << "\n";
    } else {
      std::cout << lines_;
      if (code != kOk) std::cout << "status: failed\n";
    }
    return code;
  }

 private:
  const Options& opts_;
  Json doc_;
  std::string lines_;
};

std::string rat(const Rational& r) { return to_string(r); }

// Verbs ---------------------------------------------------------------------

int cmd_validate(const Options& o, const std::string& file, std::optional<std::size_t> levels) {
  Diagram d = load_diagram(file);
  const std::size_t upto = levels ? *levels : d.truncation() + (d.stationary() ? 2 : 0);
  std::vector<Defect> defects;
  try {
    defects = validate(d, upto);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  Report r("validate", o);
  r.field("file", file);
  r.field("levels", upto, std::to_string(upto));
  Json arr = Json::array();
  std::string text;
  for (const auto& df : defects) {
    arr.push_back({{"kind", to_string(df.kind)}, {"level", df.level}, {"vertex", df.vertex}, {"message", df.message}});
    text += "defect: " + to_string(df.kind) + " level " + std::to_string(df.level) + " vertex " +
            std::to_string(df.vertex) + ": " + df.message + "\n";
  }
  r.field("defects", defects.size(), std::to_string(defects.size()));
  r.json("defect_list", arr);
  r.text(text);
  const ExtremesVerdict v = check_no_cofinal_extremes(d);
  r.field("no_cofinal_extremes", to_string(v.answer), to_string(v.answer) + " (" + v.reason + ")");
  return r.emit(defects.empty() ? kOk : kFailed);
}

int cmd_fmt(const Options& o, const std::string& file) {
  Diagram d = load_diagram(file);
  if (o.output == "structured") {
    Report r("fmt", o);
    r.json("text", d.to_text());
    return r.emit(kOk);
  }
  std::cout << d.to_text();
  return kOk;
}

int emit_diagram(const Options& o, const std::string& verb, const Diagram& d) {
  if (o.output == "structured") {
    Report r(verb, o);
    r.json("text", d.to_text());
    return r.emit(kOk);
  }
  std::cout << d.to_text();
  return kOk;
}

int cmd_telescope(const Options& o, const std::string& file, const std::string& cuts) {
  Diagram d = load_diagram(file);
  auto c = parse_list(cuts, "--cuts");
  try {
    return emit_diagram(o, "telescope", telescope(d, c));
  } catch (const InvalidArgument& e) {
    throw InputError(e.what());
  }
}

int cmd_split(const Options& o, const std::string& file, std::size_t level) {
  Diagram d = load_diagram(file);
  try {
    return emit_diagram(o, "split", split(d, level));
  } catch (const InvalidArgument& e) {
    throw InputError(e.what());
  }
}

int cmd_heights(const Options& o, const std::string& file, std::optional<std::size_t> level) {
  Diagram d = load_diagram(file);
  const std::size_t upto = level ? *level : d.truncation();
  if (!d.has_level(upto)) throw InputError("level " + std::to_string(upto) + " is beyond the truncation");
  Report r("heights", o);
  Json arr = Json::array();
  std::string text;
  for (std::size_t n = 0; n <= upto; ++n) {
    Json row = Json::array();
    text += "level " + std::to_string(n) + ":";
    for (const auto& h : heights(d, n)) {
      row.push_back(h.str());
      text += " " + h.str();
    }
    text += "\n";
    arr.push_back(row);
  }
  r.json("heights", arr);
  r.text(text);
  return r.emit(kOk);
}

PathPrefix load_path(const Diagram& d, const std::string& text) {
  try {
    return parse_path(d, text);
  } catch (const Error& e) {
    throw InputError(std::string("--path: ") + e.what());
  }
}

int cmd_rank(const Options& o, const std::string& file, const std::string& path) {
  Diagram d = load_diagram(file);
  PathPrefix p = load_path(d, path);
  Report r("rank", o);
  r.field("path", format_path(d, p, true));
  r.field("vertex", terminal_vertex(d, p), std::to_string(terminal_vertex(d, p)));
  const BigInt k = rank(d, p);
  r.field("rank", k.str(), k.str());
  const BigInt h = p.edges.empty() ? BigInt(1) : height(d, p.edges.size(), terminal_vertex(d, p));
  r.field("height", h.str(), h.str());
  return r.emit(kOk);
}

int cmd_successor(const Options& o, const std::string& file, const std::string& path, bool backward) {
  Diagram d = load_diagram(file);
  PathPrefix p = load_path(d, path);
  auto q = backward ? predecessor(d, p) : successor(d, p);
  Report r("successor", o);
  r.field("path", format_path(d, p, true));
  r.field("direction", backward ? "predecessor" : "successor");
  if (!q) {
    r.field("result", std::string("undefined"), std::string("undefined: every edge is ") + (backward ? "minimal" : "maximal"));
    return r.emit(kFailed);
  }
  r.field("result", format_path(d, *q, true));
  r.field("rank", rank(d, *q).str(), rank(d, *q).str());
  return r.emit(kOk);
}

int cmd_orbit(const Options& o, const std::string& space_text, const std::string& map, const std::string& point,
              long long steps) {
  const SeqSpace space = load_space(space_text);
  const CylMap t = load_map(map, space);
  Point x;
  try {
    x = parse_point(space, point);
  } catch (const Error& e) {
    throw InputError(std::string("--point: ") + e.what());
  }
  const CylMap step = steps >= 0 ? t : t.inverse();
  Report r("orbit", o);
  Json arr = Json::array();
  std::string text;
  for (long long i = 0; i <= std::llabs(steps); ++i) {
    arr.push_back(format_point(space, x));
    text += std::to_string(steps >= 0 ? i : -i) + ": " + format_point(space, x) + "\n";
    x = step.apply(x);
  }
  r.json("orbit", arr);
  r.text(text);
  return r.emit(kOk);
}

int cmd_odometer(const Options& o, const std::string& space_text, const std::string& point, const std::string& add,
                 std::optional<std::size_t> diagram_levels, bool show_map) {
  const SeqSpace space = load_space(space_text);
  Report r("odometer", o);
  r.field("space", space.to_string());
  try {
    const AdicInt x = AdicInt::parse(space, point);
    r.field("x", format_point(space, x.digits()));
    r.field("x_plus_1", format_point(space, add_one(x).digits()));
    r.field("neg_x", format_point(space, neg(x).digits()));
    if (!add.empty()) {
      const AdicInt b = AdicInt::parse(space, add);
      r.field("x_plus_b", format_point(space, bvdyn::add(x, b).digits()));
      r.field("distance", adic_metric(x, b));
    }
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  if (show_map) r.field("map", odometer_map(space).to_text());
  if (diagram_levels) r.field("diagram", to_vershik_diagram(space, *diagram_levels).to_text());
  return r.emit(kOk);
}

int cmd_towers(const Options& o, const std::string& space_text, const std::string& map, const std::string& markers,
               std::size_t n, const std::string& measure, std::optional<std::size_t> k) {
  const SeqSpace space = load_space(space_text);
  const CylMap t = load_map(map, space);
  const MarkerSeq m = load_markers(markers, t);
  const MeasureSpec mu = load_measure(measure, space);
  const TowerPartition xi = build_towers(t, m.at(n));
  const MarkerReport rep = validate_markers(m, n, xi.depth);
  Report r("towers", o);
  r.field("markers", markers);
  r.field("n", n, std::to_string(n));
  r.field("depth", xi.depth, std::to_string(xi.depth));
  const auto masses = cell_masses(mu, CylinderIndexer(space, xi.depth));
  Json arr = Json::array();
  std::string text;
  for (std::size_t i = 0; i < xi.towers.size(); ++i) {
    Rational mass = 0;
    for (std::size_t l = 0; l < xi.towers[i].height; ++l)
      for (auto c : xi.level_cells(i, l)) mass += masses[c];
    arr.push_back({{"height", xi.towers[i].height}, {"base", word_list(space, xi.base(i))}, {"mass", rat(mass)}});
    text += "tower: height " + std::to_string(xi.towers[i].height) + " base " + words(space, xi.base(i)) + " mass " +
            rat(mass) + "\n";
  }
  r.json("towers", arr);
  r.text(text);
  r.field("uncovered_cells", xi.uncovered.size(), std::to_string(xi.uncovered.size()));
  Json cl = Json::array();
  std::string ctext;
  for (const auto& c : rep.clauses) {
    cl.push_back({{"clause", c.clause}, {"answer", to_string(c.answer)}, {"message", c.message}});
    ctext += "marker " + c.clause + ": " + to_string(c.answer) + " (" + c.message + ")\n";
  }
  r.json("marker_clauses", cl);
  r.text(ctext);
  bool ok = rep.passed();
  if (k) {
    const KMaximal km = k_maximal(xi, *k);
    Rational km_mass = 0;
    for (auto c : km.cells) km_mass += masses[c];
    r.json("k_maximal", {{"k", *k},
                         {"set", word_list(space, km.set)},
                         {"covering", km.covering},
                         {"disjoint", km.disjoint},
                         {"mass", rat(km_mass)}});
    r.text("k_maximal: k " + std::to_string(*k) + " set " + words(space, km.set) + " covering " +
           (km.covering ? "yes" : "no") + " disjoint " + (km.disjoint ? "yes" : "no") + "\n");
    ok = ok && km.covering && km.disjoint;
  }
  return r.emit(ok ? kOk : kFailed);
}

int cmd_rokhlin(const Options& o, const std::string& space_text, const std::string& map, const std::string& markers,
                std::size_t m, const std::string& eps_text, const std::vector<std::string>& measures,
                std::optional<std::size_t> n) {
  const SeqSpace space = load_space(space_text);
  const CylMap t = load_map(map, space);
  const MarkerSeq mk = load_markers(markers, t);
  const Rational eps = load_eps(eps_text);
  std::vector<MeasureSpec> mus;
  for (const auto& s : measures) mus.push_back(load_measure(s, space));
  if (m < 1) throw InputError("--m must be positive");
  const RokhlinResult res = rokhlin_set(mk, m, eps, mus, n);
  Report r("rokhlin", o);
  r.field("m", m, std::to_string(m));
  r.field("eps", eps);
  r.field("n", res.n, std::to_string(res.n));
  r.field("depth", res.depth, std::to_string(res.depth));
  r.field("F", word_list(space, res.f), words(space, res.f));
  r.field("disjoint", res.disjoint, res.disjoint ? "yes" : "no");
  r.field("bounds_hold", res.bounds_hold, res.bounds_hold ? "yes" : "no");
  Json arr = Json::array();
  std::string text;
  for (std::size_t i = 0; i < res.measures.size(); ++i) {
    const auto& x = res.measures[i];
    arr.push_back({{"measure", measures[i]},
                   {"coverage", rat(x.coverage)},
                   {"short_towers", rat(x.short_towers)},
                   {"top_band", rat(x.top_band)}});
    text += "coverage " + measures[i] + ": " + rat(x.coverage) + " (short towers " + rat(x.short_towers) +
            ", top band " + rat(x.top_band) + ")\n";
  }
  r.json("measures", arr);
  r.text(text);
  Json tw = Json::array();
  std::string ttext;
  for (const auto& s : res.towers) {
    Json masses = Json::array();
    for (const auto& v : s.mass) masses.push_back(rat(v));
    tw.push_back({{"height", s.height}, {"base", word_list(space, s.base)}, {"mass", masses}});
    ttext += "tower: height " + std::to_string(s.height) + " base " + words(space, s.base) + "\n";
  }
  r.json("towers", tw);
  r.text(ttext);
  r.field("certified", res.certified, res.certified ? "yes" : "no");
  return r.emit(res.certified ? kOk : kFailed);
}

int cmd_approx(const Options& o, const std::string& space_text, const std::string& map, const std::string& markers,
               std::size_t n, const std::string& measure, std::size_t depth) {
  const SeqSpace space = load_space(space_text);
  const CylMap t = load_map(map, space);
  const MarkerSeq mk = load_markers(markers, t);
  const MeasureSpec mu = load_measure(measure, space);
  const CylMap p = periodic_approx(mk, n);
  const std::size_t d = std::max(depth, n + 1);
  const Interval dist = dist_uniform(p, t, mu, d);
  Report r("approx", o);
  r.field("n", n, std::to_string(n));
  Json pieces = Json::array();
  std::string text;
  for (const auto& [w, e] : periodic_pieces(mk, n)) {
    pieces.push_back({{"cylinder", format_word(space, w)}, {"exponent", e}});
    text += "piece: [" + format_word(space, w) + "] T^" + std::to_string(e) + "\n";
  }
  r.json("pieces", pieces);
  r.text(text);
  r.field("map", p.to_text());
  r.field("dist_lo", dist.lo);
  r.field("dist_hi", dist.hi);
  return r.emit(kOk);
}

int cmd_build_diagram(const Options& o, const std::string& space_text, const std::string& map,
                      const std::string& markers, std::size_t levels, std::size_t samples, std::size_t sample_depth) {
  const SeqSpace space = load_space(space_text);
  const CylMap t = load_map(map, space);
  const MarkerSeq mk = load_markers(markers, t);
  const MarkerDiagram md(mk, levels);
  std::mt19937_64 rng(o.seed);
  std::vector<Point> pts;
  for (std::size_t i = 0; i < samples; ++i) {
    Word head;
    for (std::size_t k = 0; k < sample_depth; ++k) head.push_back(static_cast<Digit>(rng() % space.alphabet(k)));
    Word period{static_cast<Digit>(rng() % space.alphabet(sample_depth))};
    pts.emplace_back(head, period);
  }
  const auto conj = md.check_conjugacy(pts);
  const auto defects = validate(md.diagram(), levels);
  Report r("build-diagram", o);
  r.field("levels", levels, std::to_string(levels));
  r.field("depth", md.depth(), std::to_string(md.depth()));
  r.field("diagram", md.diagram().to_text());
  r.field("defects", defects.size(), std::to_string(defects.size()));
  r.field("conjugacy_checked", conj.checked, std::to_string(conj.checked));
  r.field("conjugacy_skipped", conj.skipped, std::to_string(conj.skipped));
  r.field("conjugacy_failures", conj.failures.size(), std::to_string(conj.failures.size()));
  return r.emit(defects.empty() && conj.failures.empty() ? kOk : kFailed);
}

int cmd_rank1(const Options& o, const std::string& file, std::optional<std::size_t> stages,
              const std::string& eps_text, const std::vector<std::string>& atoms) {
  const CuttingStackingSpec spec = parse_file(file, [](const std::string& t) { return CuttingStackingSpec::parse(t); });
  const std::size_t N = stages ? *stages : spec.stages.size();
  RankOne ro;
  try {
    ro = rank1_build(spec, N);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  Report r("rank1", o);
  r.field("stages", N, std::to_string(N));
  Json hs = Json::array();
  std::string htext;
  for (const auto& h : ro.heights) {
    hs.push_back(h.str());
    htext += (htext.empty() ? "" : " ") + h.str();
  }
  r.field("heights", hs, htext);
  r.field("diagram", ro.diagram.to_text());
  if (eps_text.empty()) return r.emit(kOk);
  const Rational eps = load_eps(eps_text);
  std::vector<RankOneMeasure> mus{RankOneMeasure::uniform()};
  for (const auto& a : atoms) {
    try {
      mus.push_back(RankOneMeasure::point(BigInt(a)));
    } catch (const std::exception&) {
      throw InputError("--atom: expected a level index, got '" + a + "'");
    }
  }
  OdometerApprox oa;
  try {
    oa = odometer_approx(ro, mus, eps);
  } catch (const BudgetExceeded&) {
    throw;
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  r.field("eps", eps);
  r.field("stage", oa.stage ? Json(*oa.stage) : Json(nullptr), oa.stage ? std::to_string(*oa.stage) : "none");
  Json arr = Json::array();
  std::string text;
  for (std::size_t i = 0; i < mus.size(); ++i) {
    const std::string name = i == 0 ? "uniform" : "atom:" + atoms[i - 1];
    arr.push_back({{"measure", name}, {"bound", rat(oa.bounds[i])}, {"distance", rat(oa.distances[i])}});
    text += "measure " + name + ": bound " + rat(oa.bounds[i]) + " distance " + rat(oa.distances[i]) + "\n";
  }
  r.json("measures", arr);
  r.text(text);
  r.field("certified", oa.certified, oa.certified ? "yes" : "no");
  return r.emit(oa.certified ? kOk : kFailed);
}

int cmd_distance(const Options& o, const std::string& s_file, const std::string& t_file,
                 const std::vector<std::string>& measures, std::size_t depth) {
  const CylMap s = parse_file(s_file, [](const std::string& t) { return CylMap::parse(t); });
  const CylMap t = parse_file(t_file, [](const std::string& x) { return CylMap::parse(x); });
  if (!(s.space() == t.space())) throw InputError("maps live on different spaces");
  Report r("distance", o);
  r.field("depth", depth, std::to_string(depth));
  const Interval dd = d_D(s, t, depth);
  r.field("D", rat(dd.lo), rat(dd.lo));
  Json arr = Json::array();
  std::string text = "measure | dist_uniform | sup_symdiff lower | sup_symdiff upper | sup_abs_diff\n";
  for (const auto& name : measures) {
    const MeasureSpec mu = load_measure(name, s.space());
    const Interval du = dist_uniform(s, t, mu, depth);
    const SymDiffResult sd = sup_symdiff(s, t, mu, depth);
    const Rational ad = sup_abs_diff(s, t, mu, depth);
    arr.push_back({{"measure", name},
                   {"dist_uniform", {{"lo", rat(du.lo)}, {"hi", rat(du.hi)}}},
                   {"sup_symdiff", {{"lower", rat(sd.lower)}, {"upper", rat(sd.upper)}, {"exhaustive", sd.exhaustive}}},
                   {"sup_abs_diff", rat(ad)}});
    text += name + " | [" + rat(du.lo) + ", " + rat(du.hi) + "] | " + rat(sd.lower) + " | " + rat(sd.upper) + " | " +
            rat(ad) + "\n";
  }
  r.json("measures", arr);
  r.text(text);
  return r.emit(kOk);
}

int cmd_witness(const Options& o, std::size_t depth) {
  const SeparationWitness w = separation_witness(depth);
  Report r("witness", o);
  r.field("depth", depth, std::to_string(depth));
  r.field("T", w.t.to_text());
  r.field("S", w.s.to_text());
  r.field("sup_abs_diff", w.sup_abs_diff);
  r.field("dist_uniform", rat(w.dist.lo), rat(w.dist.lo));
  r.field("pair", Json::array({rat(w.sup_abs_diff), rat(w.dist.lo)}), "(" + rat(w.sup_abs_diff) + ", " + rat(w.dist.lo) + ")");
  const bool ok = w.sup_abs_diff == 0 && w.dist.exact() && w.dist.lo > 0;
  return r.emit(ok ? kOk : kFailed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bratteli-Vershik models, odometers, towers and neighborhood metrics"};
  app.require_subcommand(1);
  Options opts;
  app.add_option("--output", opts.output, "Report format")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--seed", opts.seed, "Seed for sampled checks");

  std::string file, path, cuts, space = "2", map, markers = "zeros", measure = "uniform", eps, point = "(0)", add;
  std::string s_file, t_file;
  std::vector<std::string> measures, atoms;
  std::optional<std::size_t> levels, level_opt, n_opt, k_opt, stages;
  std::size_t level = 1, n = 3, m = 3, depth = 4, samples = 100, sample_depth = 10;
  long long steps = 8;
  bool backward = false, show_map = false;
  int code = kOk;

  auto* validate_cmd = app.add_subcommand("validate", "Check a BBD1 diagram for structural defects");
  validate_cmd->add_option("file", file)->required();
  validate_cmd->add_option("--levels", levels, "Check up to this level");

  auto* fmt_cmd = app.add_subcommand("fmt", "Print a diagram in canonical form");
  fmt_cmd->add_option("file", file)->required();

  auto* tel_cmd = app.add_subcommand("telescope", "Telescope a diagram along the given levels");
  tel_cmd->add_option("file", file)->required();
  tel_cmd->add_option("--cuts", cuts, "Increasing list of kept levels, e.g. 2,4")->required();

  auto* split_cmd = app.add_subcommand("split", "Insert a level before the given one");
  split_cmd->add_option("file", file)->required();
  split_cmd->add_option("--level", level)->required();

  auto* heights_cmd = app.add_subcommand("heights", "Heights of all vertices");
  heights_cmd->add_option("file", file)->required();
  heights_cmd->add_option("--level", level_opt, "Deepest level");

  auto* rank_cmd = app.add_subcommand("rank", "Rank of a finite path");
  rank_cmd->add_option("file", file)->required();
  rank_cmd->add_option("--path", path, "Labels, optionally @vertices")->required();

  auto* succ_cmd = app.add_subcommand("successor", "Vershik successor of a finite path");
  succ_cmd->add_option("file", file)->required();
  succ_cmd->add_option("--path", path)->required();
  succ_cmd->add_flag("--backward", backward, "Predecessor instead");

  auto* orbit_cmd = app.add_subcommand("orbit", "Orbit of a point under a map");
  orbit_cmd->add_option("--space", space);
  orbit_cmd->add_option("--map", map, "CylMap file (default: the odometer)");
  orbit_cmd->add_option("--point", point);
  orbit_cmd->add_option("--steps", steps);

  auto* odo_cmd = app.add_subcommand("odometer", "Adic arithmetic and the odometer");
  odo_cmd->add_option("--space", space);
  odo_cmd->add_option("--point", point);
  odo_cmd->add_option("--add", add);
  odo_cmd->add_option("--diagram", levels, "Print the Vershik diagram with this many levels");
  odo_cmd->add_flag("--map", show_map, "Print the odometer transducer");

  auto* towers_cmd = app.add_subcommand("towers", "Return-time towers over a marker set");
  towers_cmd->add_option("--space", space);
  towers_cmd->add_option("--map", map);
  towers_cmd->add_option("--markers", markers);
  towers_cmd->add_option("--n", n);
  towers_cmd->add_option("--measure", measure);
  towers_cmd->add_option("--k", k_opt, "Also build the k-maximal set");

  auto* rok_cmd = app.add_subcommand("rokhlin", "Rokhlin set with certificate");
  rok_cmd->add_option("--space", space);
  rok_cmd->add_option("--map", map);
  rok_cmd->add_option("--markers", markers);
  rok_cmd->add_option("--m", m)->required();
  rok_cmd->add_option("--eps", eps)->required();
  rok_cmd->add_option("--measure", measures);
  rok_cmd->add_option("--n", n_opt, "Force the marker level");

  auto* approx_cmd = app.add_subcommand("approx", "Periodic approximant over the marker towers");
  approx_cmd->add_option("--space", space);
  approx_cmd->add_option("--map", map);
  approx_cmd->add_option("--markers", markers);
  approx_cmd->add_option("--n", n);
  approx_cmd->add_option("--measure", measure);
  approx_cmd->add_option("--depth", depth);

  auto* bd_cmd = app.add_subcommand("build-diagram", "Ordered diagram from marker towers");
  bd_cmd->add_option("--space", space);
  bd_cmd->add_option("--map", map);
  bd_cmd->add_option("--markers", markers);
  bd_cmd->add_option("--levels", level, "Number of levels")->required();
  bd_cmd->add_option("--samples", samples);
  bd_cmd->add_option("--sample-depth", sample_depth);

  auto* r1_cmd = app.add_subcommand("rank1", "Cutting-and-stacking system and odometer approximation");
  r1_cmd->add_option("file", file)->required();
  r1_cmd->add_option("--stages", stages);
  r1_cmd->add_option("--eps", eps);
  r1_cmd->add_option("--atom", atoms, "Level index of a point mass in the final tower");

  auto* dist_cmd = app.add_subcommand("distance", "Neighborhood metrics between two maps");
  dist_cmd->add_option("--s", s_file)->required();
  dist_cmd->add_option("--t", t_file)->required();
  dist_cmd->add_option("--measure", measures);
  dist_cmd->add_option("--depth", depth);

  auto* wit_cmd = app.add_subcommand("witness", "A pair separating the uniform and set topologies");
  wit_cmd->add_option("--depth", depth);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }
  if (measures.empty()) measures.push_back("uniform");

  try {
    if (*validate_cmd) code = cmd_validate(opts, file, levels);
    else if (*fmt_cmd) code = cmd_fmt(opts, file);
    else if (*tel_cmd) code = cmd_telescope(opts, file, cuts);
    else if (*split_cmd) code = cmd_split(opts, file, level);
    else if (*heights_cmd) code = cmd_heights(opts, file, level_opt);
    else if (*rank_cmd) code = cmd_rank(opts, file, path);
    else if (*succ_cmd) code = cmd_successor(opts, file, path, backward);
    else if (*orbit_cmd) code = cmd_orbit(opts, space, map, point, steps);
    else if (*odo_cmd) code = cmd_odometer(opts, space, point, add, levels, show_map);
    else if (*towers_cmd) code = cmd_towers(opts, space, map, markers, n, measure, k_opt);
    else if (*rok_cmd) code = cmd_rokhlin(opts, space, map, markers, m, eps, measures, n_opt);
    else if (*approx_cmd) code = cmd_approx(opts, space, map, markers, n, measure, depth);
    else if (*bd_cmd) code = cmd_build_diagram(opts, space, map, markers, level, samples, sample_depth);
    else if (*r1_cmd) code = cmd_rank1(opts, file, stages, eps, atoms);
    else if (*dist_cmd) code = cmd_distance(opts, s_file, t_file, measures, depth);
    else if (*wit_cmd) code = cmd_witness(opts, depth);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const SpaceMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: budget exceeded: " << e.what() << "\n";
    return kFailed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return code;
}
