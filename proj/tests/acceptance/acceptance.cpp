#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "../support/oracles.hpp"
#include "bvdyn/error.hpp"
#include "bvdyn/symbolic.hpp"
#include "bvdyn/topology.hpp"
#include "bvdyn/towers.hpp"

using namespace bvdyn;
using namespace bvdyn::testing;
namespace fs = std::filesystem;

namespace {

struct Context {
  fs::path data;
  fs::path cli;
  std::uint64_t seed = 0;
};

/// A failed check; the message names what went wrong.
struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

SeqSpace dyadic() { return SeqSpace::uniform(2); }

// 1. Heights against brute-force path enumeration.
std::string height_oracle(const Context& c) {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(c.seed + 1);
  std::size_t checked = 0;
  for (int i = 0; i < 25; ++i) {
    const Diagram d = random_diagram(rng, uniform_int(rng, 1, 4), 4, 3);
    for (std::size_t n = 0; n <= d.truncation(); ++n) {
      const auto hs = heights(d, n);
      for (std::size_t v = 0; v < hs.size(); ++v, ++checked) {
        require(hs[v] == enumerate_paths(d, n, v), "height mismatch on diagram " + std::to_string(i));
      }
    }
  }
  const double s = seconds_since(t0);
  require(s < 1.0, "took " + std::to_string(s) + " s");
  return "25 diagrams, " + std::to_string(checked) + " vertices";
}

std::vector<Diagram> path_diagrams(Rng& rng) {
  std::vector<Diagram> ds{to_vershik_diagram(dyadic(), 12)};
  for (int i = 0; i < 5; ++i) ds.push_back(random_diagram(rng, 12, 3, 2));
  return ds;
}

// 2. successor and predecessor are inverse on finite paths.
std::string inverse_pair(const Context& c) {
  Rng rng(c.seed + 2);
  std::size_t roundtrips = 0;
  for (const Diagram& d : path_diagrams(rng)) {
    for (int i = 0; i < 1000; ++i) {
      const PathPrefix p = random_path(rng, d, 12);
      if (auto q = predecessor(d, p)) {
        require(successor(d, *q) == p, "successor(predecessor(p)) != p");
        ++roundtrips;
      }
      if (auto q = successor(d, p)) {
        require(predecessor(d, *q) == p, "predecessor(successor(p)) != p");
        ++roundtrips;
      }
    }
  }
  return std::to_string(roundtrips) + " round trips on 6 diagrams";
}

PathPrefix prefix(const PathPrefix& p, std::size_t n) {
  return PathPrefix{std::vector<std::size_t>(p.edges.begin(), p.edges.begin() + static_cast<long>(n))};
}

std::size_t change_level(const PathPrefix& a, const PathPrefix& b) {
  std::size_t k = a.edges.size();
  while (k > 0 && a.edges[k - 1] == b.edges[k - 1]) --k;
  return k;
}

// 3. Rank increases by exactly one at every level from the change level up.
std::string rank_increment(const Context& c) {
  Rng rng(c.seed + 3);
  std::size_t checks = 0;
  for (const Diagram& d : path_diagrams(rng)) {
    for (int i = 0; i < 1000; ++i) {
      const PathPrefix p = random_path(rng, d, 12);
      const auto q = successor(d, p);
      if (!q) continue;
      const std::size_t k = change_level(p, *q);
      require(k >= 1, "successor did not change the path");
      for (std::size_t n = k; n <= 12; ++n, ++checks) {
        require(rank(d, prefix(*q, n)) == rank(d, prefix(p, n)) + 1, "rank did not increase by one");
      }
    }
  }
  return std::to_string(checks) + " level checks";
}

// 4. add_one digit streams equal Vershik successor labels.
std::string odometer_conjugacy(const Context& c) {
  Rng rng(c.seed + 4);
  const SeqSpace space = dyadic();
  const Diagram d = to_vershik_diagram(space, 40);
  std::size_t compared = 0, maximal = 0;
  for (int i = 0; i < 1000; ++i) {
    const Point x = random_point(rng, space, 40, 3);
    const LazyPath y = path_from_labels(d, [x](std::size_t level) { return x.at(level - 1); }, 40);
    const Point z = add_one(AdicInt(space, x)).digits();
    if (x == Point({}, {1})) {
      bool threw = false;
      try {
        (void)successor(y);
      } catch (const BudgetExceeded&) {
        threw = true;
      }
      require(threw, "the maximal path has a successor");
      ++maximal;
      continue;
    }
    bool all_ones = true;
    for (std::size_t k = 0; k < 32; ++k) all_ones = all_ones && x.at(k) == 1;
    if (all_ones) {
      ++maximal;
      continue;
    }
    const auto lab = labels(d, successor(y).materialize(32));
    for (std::size_t k = 0; k < 32; ++k) require(lab[k] == z.at(k), "label stream differs from x + 1");
    ++compared;
  }
  return std::to_string(compared) + " points to depth 32, " + std::to_string(maximal) + " with 32 leading ones";
}

// 5. Rokhlin sets at n = 4 and n = 3.
std::string rokhlin(const Context&) {
  const auto t0 = std::chrono::steady_clock::now();
  const SeqSpace space = dyadic();
  const CylMap t = odometer_map(space);
  const MarkerSeq zeros = MarkerSeq::zeros(t);
  const Rational eps(3, 10);
  const std::vector<MeasureSpec> mus{MeasureSpec::uniform(space)};
  const RokhlinResult r4 = rokhlin_set(zeros, 3, eps, mus);
  const RokhlinResult r3 = rokhlin_set(zeros, 3, eps, mus, 3);
  require(r4.n == 4, "automatic n is " + std::to_string(r4.n));
  for (const RokhlinResult* r : {&r4, &r3}) {
    // Disjointness of F, TF, T^2F and coverage recomputed from the cell permutation.
    const auto perm = t.cylinder_permutation(r->depth);
    const auto m = masses(mus[0], r->depth);
    const auto f = cells_of(space, r->depth, r->f);
    std::vector<int> hits(perm.size(), 0);
    for (auto cell : f) {
      std::uint64_t x = cell;
      for (int i = 0; i < 3; ++i, x = perm[x]) ++hits[x];
    }
    Rational cover = 0;
    for (std::size_t i = 0; i < hits.size(); ++i) {
      require(hits[i] <= 1, "F, TF, T^2F overlap");
      if (hits[i]) cover += m[i];
    }
    require(r->disjoint && r->certified, "not certified at n = " + std::to_string(r->n));
    require(cover == r->measures[0].coverage, "coverage differs from the recount");
    require(cover > 1 - eps, "coverage below 1 - eps");
  }
  require(r4.measures[0].coverage == Rational(15, 16), "coverage at n = 4 is " + to_string(r4.measures[0].coverage));
  require(r3.measures[0].coverage == Rational(3, 4), "coverage at n = 3 is " + to_string(r3.measures[0].coverage));
  const double s = seconds_since(t0);
  require(s < 1.0, "took " + std::to_string(s) + " s");
  return "coverage 15/16 at n = 4, 3/4 at n = 3";
}

// 6. Periodic approximants.
std::string periodic_approximation(const Context& c) {
  const SeqSpace space = dyadic();
  const CylMap t = odometer_map(space);
  const MarkerSeq zeros = MarkerSeq::zeros(t);
  const MeasureSpec mu = MeasureSpec::uniform(space);
  std::vector<CylMap> p;
  for (std::size_t n = 1; n <= 12; ++n) p.push_back(periodic_approx(zeros, n));
  for (std::size_t n = 1; n <= 8; ++n) {
    const Interval e = dist_uniform(p[n - 1], t, mu, n + 1);
    require(e.exact() && e.lo == Rational(1, 1 << (n - 1)), "mu(E(P_" + std::to_string(n) + ", T)) = [" +
                                                              to_string(e.lo) + ", " + to_string(e.hi) + "]");
  }
  Rng rng(c.seed + 6);
  std::size_t tested = 0;
  while (tested < 100) {
    const Point x = random_point(rng, space, 10, 3);
    long long j = -1;
    for (std::size_t k = 0; k < 10 && j < 0; ++k)
      if (x.at(k) == 0) j = static_cast<long long>(k);
    if (j < 0) continue;
    const Point tx = t.apply(x);
    // n(x): the least n with P_m x = T x for every m >= n.
    std::size_t nx = 0;
    for (std::size_t n = 12; n >= 1; --n) {
      if (!(p[n - 1].apply(x) == tx)) {
        nx = n + 1;
        break;
      }
    }
    if (nx == 0) nx = 1;
    require(nx == static_cast<std::size_t>(j) + 1, "n(x) = " + std::to_string(nx) + " for " + format_point(space, x));
    ++tested;
  }
  return "mu(E(P_n, T)) = 2^(1-n) for n <= 8, n(x) on 100 points";
}

// 7. Separation witness.
std::string separation(const Context&) {
  for (std::size_t depth = 4; depth <= 10; ++depth) {
    const SeparationWitness w = separation_witness(depth);
    require(w.sup_abs_diff == 0, "sup_abs_diff = " + to_string(w.sup_abs_diff) + " at depth " + std::to_string(depth));
    require(w.dist.exact() && w.dist.lo == Rational(1, 4), "dist_uniform is not 1/4 at depth " + std::to_string(depth));
  }
  return "(0, 1/4) at depths 4..10";
}

// 8. sup_symdiff bounds on random pairs.
std::string symdiff_inequalities(const Context& c) {
  Rng rng(c.seed + 8);
  const SeqSpace space = dyadic();
  const MeasureSpec mu = MeasureSpec::uniform(space);
  std::size_t containment = 0;
  for (int i = 0; i < 50; ++i) {
    const CylMap s = random_cylmap(rng, space);
    const CylMap t = random_cylmap(rng, space);
    const std::size_t depth = uniform_int(rng, 1, 4);
    const SymDiffResult r = sup_symdiff(s, t, mu, depth);
    require(r.lower <= r.upper, "lower bound above upper bound");
    // Upper bound recomputed as mu(T E0) + mu(S E0) from the classification.
    const Classification e = diff_set(s, t, depth);
    std::vector<std::uint64_t> e0 = e.indices(CellClass::Different);
    for (auto x : e.indices(CellClass::Unresolved)) e0.push_back(x);
    const auto cyl = compress_cells(space, depth, e0);
    const Rational upper = pushforward_measure(mu, t, cyl) + pushforward_measure(mu, s, cyl);
    require(r.upper == upper, "upper bound " + to_string(r.upper) + " != " + to_string(upper));
    // Against the exhaustive search when both maps permute the cells.
    const std::size_t d = std::max({depth, s.head_depth(), t.head_depth()});
    if (d == depth && d <= 4) require(r.lower == brute_sup_symdiff(s, t, mu, d), "lower bound is not the maximum");
    const Interval du = dist_uniform(s, t, mu, depth);
    for (int k = 1; k <= 16; ++k) {
      const Rational eps(k, 16);
      if (du.hi < eps / 2) {
        require(r.upper <= eps, "eps/2 containment violated");
        ++containment;
      }
    }
  }
  return "50 pairs, " + std::to_string(containment) + " containment instances";
}

// 9. Exhaustive supremum for P_3 against the odometer.
std::string brute_supremum(const Context&) {
  const auto t0 = std::chrono::steady_clock::now();
  const SeqSpace space = dyadic();
  const CylMap t = odometer_map(space);
  const CylMap p3 = periodic_approx(MarkerSeq::zeros(t), 3);
  const MeasureSpec mu = MeasureSpec::uniform(space);
  const SymDiffResult r = sup_symdiff(p3, t, mu, 4);
  require(r.exhaustive && r.cylinders == 16, "search was not exhaustive over 16 cylinders");
  require(r.lower == Rational(1, 8), "supremum is " + to_string(r.lower));
  require(r.witness == std::vector<Word>{Word{1, 1, 1, 0}}, "witness is not [1110]");
  require(symdiff_mass(p3, t, mu, r.witness) == Rational(1, 8), "witness does not attain 1/8");
  require(brute_sup_symdiff(p3, t, mu, 4) == Rational(1, 8), "plain enumeration disagrees");
  const double s = seconds_since(t0);
  require(s < 5.0, "took " + std::to_string(s) + " s");
  return "1/8 over 2^16 subsets, witness [1110]";
}

// 10. Atomic delta.
std::string atomic_delta_check(const Context& c) {
  const SeqSpace space = dyadic();
  const std::vector<std::pair<Point, Rational>> atoms{{Point({}, {0}), Rational(1, 2)},
                                                      {Point({}, {1}), Rational(3, 10)},
                                                      {Point({1}, {0}), Rational(1, 5)}};
  const MeasureSpec mu = MeasureSpec::atomic(space, atoms);
  const Rational delta = atomic_delta({mu}, 3);
  require(delta == Rational(1, 10), "delta = " + to_string(delta));
  Rng rng(c.seed + 10);
  const CylMap id = CylMap::identity(space);
  std::size_t premise = 0, sampled = 0;
  while (premise < 20) {
    ++sampled;
    CylMap s = random_prefix_permutation(rng, space, 3);
    if (uniform_int(rng, 0, 1)) {
      // Bias half of the samples towards maps that keep the atom cylinders.
      std::vector<std::pair<Word, Word>> rules;
      std::vector<Word> free{{0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
      std::vector<Word> img = free;
      std::shuffle(img.begin(), img.end(), rng);
      for (std::size_t k = 0; k < free.size(); ++k) rules.emplace_back(free[k], img[k]);
      for (Word w : {Word{0, 0, 0}, Word{1, 1, 1}, Word{1, 0, 0}}) rules.emplace_back(w, w);
      s = CylMap::from_prefix_rules(space, rules);
    }
    const Rational d = sup_abs_diff(s, id, mu, 3);
    bool fixes = true;
    for (const auto& [x, w] : atoms) fixes = fixes && s.apply(x) == x;
    if (d < delta) {
      require(fixes, "a map within delta moves an atom");
      ++premise;
    } else {
      require(d >= delta, "unreachable");
    }
  }
  return "delta 1/10; " + std::to_string(premise) + " of " + std::to_string(sampled) + " samples within delta";
}

// 11. Marker clauses and k-maximal sets.
std::string markers(const Context&) {
  const SeqSpace space = dyadic();
  const CylMap t = odometer_map(space);
  const MarkerSeq zeros = MarkerSeq::zeros(t);
  for (std::size_t n = 1; n <= 6; ++n) {
    const MarkerReport rep = validate_markers(zeros, n, 2 * n);
    for (std::size_t i = 0; i < 5; ++i) {
      require(rep.clauses[i].answer == Answer::Yes, "clause " + rep.clauses[i].clause + " fails at n = " + std::to_string(n));
    }
  }
  const TowerPartition xi = build_towers(t, zeros.at(3));
  require(xi.towers.size() == 1 && xi.towers[0].height == 8, "expected a single tower of height 8");
  const auto perm = t.cylinder_permutation(xi.depth);
  const std::size_t cells = perm.size();
  for (std::size_t k : {2, 3, 8}) {
    const KMaximal km = k_maximal(xi, k);
    require(km.covering && km.disjoint, "k = " + std::to_string(k) + " fails its own check");
    std::set<std::uint64_t> a(km.cells.begin(), km.cells.end());
    // A and T^i A disjoint for 0 < i < k.
    for (auto x : km.cells) {
      std::uint64_t y = x;
      for (std::size_t i = 1; i < k; ++i) {
        y = perm[y];
        require(!a.count(y), "A meets T^" + std::to_string(i) + " A for k = " + std::to_string(k));
      }
    }
    // Union of T^i A over |i| < k covers every cell.
    std::vector<std::uint64_t> inv(cells);
    for (std::uint64_t i = 0; i < cells; ++i) inv[perm[i]] = i;
    std::vector<bool> covered(cells, false);
    for (auto x : km.cells) {
      std::uint64_t f = x, b = x;
      covered[x] = true;
      for (std::size_t i = 1; i < k; ++i) {
        f = perm[f];
        b = inv[b];
        covered[f] = covered[b] = true;
      }
    }
    require(std::all_of(covered.begin(), covered.end(), [](bool v) { return v; }), "k = " + std::to_string(k) + " misses a cell");
  }
  return "clauses (i)-(v) for n <= 6; k in {2, 3, 8}";
}

// 12. Marker diagram of the odometer.
std::string marker_conjugacy(const Context& c) {
  const SeqSpace space = dyadic();
  const CylMap t = odometer_map(space);
  const MarkerDiagram md(MarkerSeq::zeros(t), 10);
  const std::vector<std::size_t> cuts{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const Diagram tel = telescope(md.diagram(), cuts);
  require(tel == to_vershik_diagram(space, 10), "telescoped diagram is not the 1-vertex 2-edge diagram");
  require(validate(md.diagram(), 10).empty(), "marker diagram has defects");
  for (std::size_t n = 1; n <= 10; ++n) {
    require(heights(md.diagram(), n)[0] == md.tower_heights()[n][0], "heights differ from tower heights");
  }
  Rng rng(c.seed + 12);
  std::vector<Point> pts;
  for (int i = 0; i < 100; ++i) pts.push_back(random_point(rng, space, 10, 1));
  const auto conj = md.check_conjugacy(pts);
  require(conj.failures.empty(), std::to_string(conj.failures.size()) + " conjugacy failures");
  require(conj.checked + conj.skipped == 100, "not every point was examined");
  return std::to_string(conj.checked) + " points conjugate, " + std::to_string(conj.skipped) + " maximal";
}

// 13. Special diagram and its mutants.
std::string special(const Context&) {
  const SpecialInstance inst = special_instance();
  require(validate(inst.diagram, 4).empty(), "instance has structural defects");
  require(validate_special(inst.diagram, inst.spec, 4).empty(), "instance fails validate_special");
  require(check_no_cofinal_extremes(inst.diagram, &inst.spec).answer == Answer::Yes, "extremes verdict is not yes");

  auto levels_of = [&](const Diagram& d) {
    std::vector<Level> out;
    for (std::size_t n = 0; n <= d.truncation(); ++n) out.push_back(d.level(n));
    return out;
  };
  auto edge_into = [](const Level& l, std::size_t v, std::size_t r) -> std::size_t {
    for (std::size_t i = 0; i < l.edges.size(); ++i)
      if (l.edges[i].range == v && l.edges[i].rank == r) return i;
    throw Failure("missing edge");
  };
  struct Mutant {
    std::string clause;
    std::function<void(std::vector<Level>&, SpecialDiagramSpec&)> apply;
  };
  const std::vector<Mutant> mutants{
      {"core-size",
       [](auto&, SpecialDiagramSpec& s) {
         s.levels[3].core0 = {0};
         s.levels[3].core1 = {1, 2, 3};
       }},
      {"far-source", [&](std::vector<Level>& l, auto&) { l[4].edges[edge_into(l[4], 4, 0)].source = 4; }},
      {"core-order", [&](std::vector<Level>& l, auto&) { l[4].edges[edge_into(l[4], 0, 0)].source = 0; }},
      {"core-one-source", [&](std::vector<Level>& l, auto&) { l[4].edges[edge_into(l[4], 2, 0)].source = 6; }},
      {"far-surjective", [&](std::vector<Level>& l, auto&) { l[4].edges[edge_into(l[4], 5, 0)].source = 6; }},
  };
  std::string cited;
  for (const auto& m : mutants) {
    auto levels = levels_of(inst.diagram);
    SpecialDiagramSpec spec = inst.spec;
    m.apply(levels, spec);
    const auto report = validate_special(Diagram(levels), spec, 4);
    bool found = false;
    for (const auto& v : report) found = found || (v.clause == m.clause && v.level == 4);
    require(found, "mutant for " + m.clause + " is not reported under that clause");
    cited += (cited.empty() ? "" : ", ") + m.clause;
  }
  return "instance valid; mutants cite " + cited;
}

int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 14. Canonical round trips and malformed-file diagnostics.
std::string format_stability(const Context& c) {
  std::size_t canonical = 0;
  for (const auto& entry : fs::directory_iterator(c.data / "bbd")) {
    if (entry.path().extension() != ".bbd") continue;
    const std::string text = read_file(entry.path());
    require(Diagram::parse(text).to_text() == text, entry.path().filename().string() + " is not a fixed point");
    ++canonical;
  }
  require(canonical >= 10, "only " + std::to_string(canonical) + " canonical files");
  std::size_t malformed = 0;
  std::istringstream expected(read_file(c.data / "malformed" / "expected.txt"));
  std::string name, where;
  const fs::path err = fs::temp_directory_path() / ("bvdyn_acceptance_" + std::to_string(::getpid()) + ".err");
  while (expected >> name >> where) {
    const fs::path file = c.data / "malformed" / name;
    bool threw = false;
    try {
      (void)Diagram::parse(read_file(file));
    } catch (const ParseError& e) {
      threw = true;
      require(std::to_string(e.line()) + ":" + std::to_string(e.column()) == where,
              name + " reported at " + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ", expected " + where);
    }
    require(threw, name + " parsed without error");
    if (!c.cli.empty()) {
      const int code = run("\"" + c.cli.string() + "\" validate \"" + file.string() + "\" >/dev/null 2>\"" + err.string() + "\"");
      require(code == 2, "CLI exit code " + std::to_string(code) + " on " + name);
      const std::string msg = read_file(err);
      require(msg.find(file.string() + ":" + where + ":") != std::string::npos, "CLI diagnostic for " + name + ": " + msg);
    }
    ++malformed;
  }
  fs::remove(err);
  require(malformed >= 5, "only " + std::to_string(malformed) + " malformed files");
  return std::to_string(canonical) + " canonical files, " + std::to_string(malformed) + " malformed files" +
         (c.cli.empty() ? " (CLI not checked)" : "");
}

// 15. Telescoping multiplies incidence matrices.
std::string telescoping(const Context& c) {
  Rng rng(c.seed + 15);
  std::size_t products = 0;
  for (int i = 0; i < 20; ++i) {
    const Diagram d = random_diagram(rng, uniform_int(rng, 3, 6), 4, 3);
    std::vector<std::size_t> cuts{0};
    for (std::size_t n = 1; n < d.truncation(); ++n)
      if (uniform_int(rng, 0, 1)) cuts.push_back(n);
    cuts.push_back(d.truncation());
    const Diagram tel = telescope(d, cuts);
    std::size_t prev = 0;
    for (std::size_t k = 1; k < cuts.size(); ++k) {
      Matrix product = incidence(d, prev + 1);
      for (std::size_t n = prev + 2; n <= cuts[k]; ++n) product = multiply(incidence(d, n), product);
      require(incidence(tel, k) == product, "incidence is not the matrix product");
      for (std::size_t v = 0; v < product.size(); ++v)
        for (std::size_t w = 0; w < product[v].size(); ++w)
          require(product[v][w] == enumerate_between(d, prev, w, cuts[k], v), "product differs from the path count");
      ++products;
      prev = cuts[k];
    }
    require(validate(tel, tel.truncation()).empty(), "telescoped diagram has defects");
  }
  return "20 diagrams, " + std::to_string(products) + " products";
}

}  // namespace

int main(int argc, char** argv) {
  Context c;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string key = argv[i];
    if (key == "--data") c.data = argv[i + 1];
    else if (key == "--cli") c.cli = argv[i + 1];
    else if (key == "--seed") c.seed = std::stoull(argv[i + 1]);
  }
  const std::vector<std::pair<std::string, std::function<std::string(const Context&)>>> criteria{
      {"height oracle", height_oracle},
      {"vershik inverse pair", inverse_pair},
      {"rank increment", rank_increment},
      {"odometer conjugacy", odometer_conjugacy},
      {"rokhlin construction", rokhlin},
      {"periodic approximation", periodic_approximation},
      {"separation witness", separation},
      {"symdiff inequalities", symdiff_inequalities},
      {"brute-force supremum", brute_supremum},
      {"atomic delta", atomic_delta_check},
      {"markers and k-maximal", markers},
      {"marker diagram conjugacy", marker_conjugacy},
      {"special diagrams", special},
      {"format stability", format_stability},
      {"telescoping functoriality", telescoping},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string status = "PASS", detail;
    try {
      detail = criteria[i].second(c);
    } catch (const std::exception& e) {
      status = "FAIL";
      detail = e.what();
      ++failed;
    }
    std::printf("%s %2zu %s: %s\n", status.c_str(), i + 1, criteria[i].first.c_str(), detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
