#include <gtest/gtest.h>

#include "../support/oracles.hpp"
#include "bvdyn/error.hpp"

using namespace bvdyn;
using namespace bvdyn::testing;

namespace {

Diagram twoadic(std::size_t levels) { return to_vershik_diagram(SeqSpace::uniform(2), levels); }

Diagram twoadic_stationary() {
  const Diagram d = twoadic(1);
  return Diagram({d.level(0), d.level(1)}, d.level(1));
}

bool has_kind(const std::vector<Defect>& ds, DefectKind k) {
  for (const auto& d : ds)
    if (d.kind == k) return true;
  return false;
}

}  // namespace

TEST(Diagram, ValidatesStationaryTwoAdic) {
  EXPECT_TRUE(validate(twoadic_stationary(), 10).empty());
}

TEST(Diagram, ReportsIsolatedVertex) {
  const Diagram d({Level{1, {}}, Level{2, {Edge{0, 0, 0}}}});
  const auto defects = validate(d, 1);
  ASSERT_TRUE(has_kind(defects, DefectKind::MissingIncoming));
  EXPECT_EQ(defects[0].level, 1u);
  EXPECT_EQ(defects[0].vertex, 1u);
}

TEST(Diagram, ReportsDuplicateRank) {
  const Diagram d({Level{1, {}}, Level{1, {Edge{0, 0, 0}, Edge{0, 0, 0}, Edge{0, 0, 1}}}});
  EXPECT_TRUE(has_kind(validate(d, 1), DefectKind::DuplicateRank));
}

TEST(Diagram, ReportsRankGapAndMissingOutgoing) {
  const Diagram gap({Level{1, {}}, Level{1, {Edge{0, 0, 0}, Edge{0, 0, 2}}}});
  EXPECT_TRUE(has_kind(validate(gap, 1), DefectKind::RankGap));
  const Diagram dead({Level{1, {}}, Level{2, {Edge{0, 0, 0}, Edge{0, 1, 0}}}, Level{1, {Edge{0, 0, 0}}}});
  EXPECT_TRUE(has_kind(validate(dead, 2), DefectKind::MissingOutgoing));
}

TEST(Diagram, Incidence) {
  EXPECT_EQ(incidence(twoadic_stationary(), 7), (Matrix{{BigInt(2)}}));
  const Diagram d({Level{1, {}}, Level{2, {Edge{0, 0, 0}, Edge{0, 1, 0}}},
                   Level{2, {Edge{0, 0, 0}, Edge{1, 0, 1}, Edge{1, 0, 2}, Edge{0, 1, 0}}}});
  EXPECT_EQ(incidence(d, 2), (Matrix{{BigInt(1), BigInt(2)}, {BigInt(1), BigInt(0)}}));
}

TEST(Diagram, TelescopeByPairsIsFourAdic) {
  const Diagram tel = telescope(twoadic(6), {0, 2, 4, 6});
  EXPECT_EQ(tel, to_vershik_diagram(SeqSpace::uniform(4), 3));
  EXPECT_EQ(incidence(tel, 1), (Matrix{{BigInt(4)}}));
}

TEST(Diagram, TelescopeIdentityCuts) {
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    const Diagram d = random_diagram(rng, 4, 3, 2);
    EXPECT_EQ(telescope(d, {0, 1, 2, 3, 4}), d);
  }
  EXPECT_THROW(telescope(twoadic(4), {0, 3, 2}), InvalidArgument);
  EXPECT_THROW(telescope(twoadic(4), {1, 2}), InvalidArgument);
}

TEST(Diagram, TelescopeMatchesPathCounts) {
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const Diagram d = random_diagram(rng, 5, 3, 3);
    const Diagram tel = telescope(d, {0, 2, 5});
    const Matrix m = multiply(multiply(incidence(d, 5), incidence(d, 4)), incidence(d, 3));
    EXPECT_EQ(incidence(tel, 2), m);
    for (std::size_t v = 0; v < m.size(); ++v)
      for (std::size_t w = 0; w < m[v].size(); ++w) EXPECT_EQ(m[v][w], enumerate_between(d, 2, w, 5, v));
    // Telescoping keeps the ordered enumeration of full paths.
    EXPECT_EQ(heights(tel, 2), heights(d, 5));
  }
}

TEST(Diagram, SplitRoundTrip) {
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const Diagram d = random_diagram(rng, 4, 3, 3);
    for (std::size_t n = 1; n <= 4; ++n) {
      const Diagram s = split(d, n);
      std::vector<std::size_t> cuts;
      for (std::size_t k = 0; k <= 5; ++k)
        if (k != n) cuts.push_back(k);
      EXPECT_EQ(telescope(s, cuts), d);
      EXPECT_TRUE(validate(s, 5).empty());
      EXPECT_EQ(heights(s, n + 1), heights(d, n));
    }
  }
}

TEST(Diagram, SplitTwoAdicAtLevelOne) {
  const Diagram s = split(twoadic(3), 1);
  EXPECT_EQ(s.vertex_count(1), 2u);
  EXPECT_EQ(s.incoming(1, 0).size(), 1u);
  EXPECT_EQ(s.incoming(1, 1).size(), 1u);
  EXPECT_THROW(split(twoadic(3), 0), InvalidArgument);
  EXPECT_THROW(split(twoadic(3), 4), InvalidArgument);
}

TEST(Diagram, ParseRoundTripAndStationary) {
  const std::string text = twoadic_stationary().to_text();
  EXPECT_EQ(Diagram::parse(text).to_text(), text);
  const Diagram d = Diagram::parse(text);
  EXPECT_TRUE(d.stationary());
  EXPECT_TRUE(validate(d, 12).empty());
  EXPECT_EQ(heights(d, 9)[0], BigInt(512));
}

TEST(Diagram, ParseErrorsCarryPositions) {
  try {
    Diagram::parse("bbd 1\nlevel 0 vertices 1\nlevel 1 vertices 1\nedge 1 v9 w0 0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_EQ(e.column(), 8u);
  }
  EXPECT_THROW(Diagram::parse("bbd 1\nlevel 0 vertices 1\nlevel 1 vertices 1\nedge 1 L0.0 L1.0 0\nedge 1 L0.0 L1.0 0\n"),
               ParseError);
}

TEST(Diagram, ParseSerializeOnRandomDiagrams) {
  Rng rng(6);
  for (int i = 0; i < 30; ++i) {
    const Diagram d = random_diagram(rng, 5, 4, 3);
    EXPECT_EQ(Diagram::parse(d.to_text()), d);
  }
}

TEST(Diagram, SpecialInstanceValidates) {
  const SpecialInstance inst = special_instance();
  EXPECT_TRUE(validate(inst.diagram, 4).empty());
  EXPECT_TRUE(validate_special(inst.diagram, inst.spec, 4).empty());
}

TEST(Diagram, SpecialMutantsCiteClause) {
  const SpecialInstance inst = special_instance();
  SpecialDiagramSpec small = inst.spec;
  small.levels[1].core0 = {0};
  small.levels[1].core1 = {1, 2, 3};
  bool found = false;
  for (const auto& v : validate_special(inst.diagram, small, 4)) found = found || v.clause == "core-size";
  EXPECT_TRUE(found);

  std::vector<Level> levels;
  for (std::size_t n = 0; n <= 4; ++n) levels.push_back(inst.diagram.level(n));
  for (auto& e : levels[3].edges)
    if (e.range == 6) e.source = 6;  // V(3,5) fed from V(2,4)
  found = false;
  for (const auto& v : validate_special(Diagram(levels), inst.spec, 4)) found = found || v.clause == "far-source";
  EXPECT_TRUE(found);
}

TEST(Diagram, CofinalExtremes) {
  EXPECT_EQ(check_no_cofinal_extremes(twoadic_stationary()).answer, Answer::No);
  const Level single{1, {Edge{0, 0, 0}}};
  EXPECT_EQ(check_no_cofinal_extremes(Diagram({Level{1, {}}, single}, single)).answer, Answer::No);
  EXPECT_EQ(check_no_cofinal_extremes(twoadic(5)).answer, Answer::Unknown);
  const SpecialInstance inst = special_instance();
  EXPECT_EQ(check_no_cofinal_extremes(inst.diagram, &inst.spec).answer, Answer::Yes);
}

TEST(Heights, MatchEnumeration) {
  Rng rng(7);
  for (int i = 0; i < 30; ++i) {
    const Diagram d = random_diagram(rng, 3, 4, 3);
    for (std::size_t n = 0; n <= 3; ++n) {
      const auto hs = heights(d, n);
      for (std::size_t v = 0; v < hs.size(); ++v) EXPECT_EQ(hs[v], enumerate_paths(d, n, v));
    }
    for (std::size_t v = 0; v < d.vertex_count(1); ++v) EXPECT_EQ(height(d, 1, v), d.incoming(1, v).size());
  }
}

TEST(Vershik, RankExamples) {
  const Diagram d = twoadic(3);
  EXPECT_EQ(rank(d, parse_path(d, "1,1,0")), BigInt(3));
  EXPECT_EQ(rank(d, parse_path(d, "0,0,0")), BigInt(0));
  EXPECT_EQ(rank(d, parse_path(d, "1,1,1")), BigInt(7));
  EXPECT_EQ(labels(d, unrank(d, 3, 0, 3)), (std::vector<std::size_t>{1, 1, 0}));
  EXPECT_EQ(labels(d, unrank(d, 3, 0, 0)), (std::vector<std::size_t>{0, 0, 0}));
}

TEST(Vershik, RankIsBijectiveOnRandomDiagrams) {
  Rng rng(8);
  for (int i = 0; i < 15; ++i) {
    const Diagram d = random_diagram(rng, 4, 3, 2);
    std::map<std::size_t, std::vector<BigInt>> seen;
    for (const auto& p : all_paths(d, 4)) {
      const std::size_t v = terminal_vertex(d, p);
      const BigInt r = rank(d, p);
      EXPECT_EQ(unrank(d, 4, v, r), p);
      seen[v].push_back(r);
    }
    for (auto& [v, rs] : seen) {
      std::sort(rs.begin(), rs.end());
      for (std::size_t k = 0; k < rs.size(); ++k) EXPECT_EQ(rs[k], BigInt(k));
    }
  }
}

TEST(Vershik, SuccessorExamples) {
  const Diagram d = twoadic(4);
  auto next = successor(d, parse_path(d, "1,1,0,0"));
  ASSERT_TRUE(next);
  EXPECT_EQ(format_path(d, *next, false), "0,0,1,0");
  auto prev = predecessor(d, parse_path(d, "0,0,1,0"));
  ASSERT_TRUE(prev);
  EXPECT_EQ(format_path(d, *prev, false), "1,1,0,0");
  EXPECT_EQ(format_path(d, *successor(d, parse_path(d, "0,1,1,0")), false), "1,1,1,0");
  EXPECT_FALSE(successor(d, parse_path(d, "1,1,1,1")));
  EXPECT_FALSE(predecessor(d, parse_path(d, "0,0,0,0")));
}

TEST(Vershik, SuccessorWalksTheEnumeration) {
  Rng rng(9);
  for (int i = 0; i < 10; ++i) {
    const Diagram d = random_diagram(rng, 4, 3, 2);
    for (const auto& p : all_paths(d, 4)) {
      const auto q = successor(d, p);
      const BigInt h = height(d, 4, terminal_vertex(d, p));
      if (rank(d, p) + 1 == h) {
        EXPECT_FALSE(q);
      } else {
        ASSERT_TRUE(q);
        EXPECT_EQ(rank(d, *q), rank(d, p) + 1);
        EXPECT_EQ(predecessor(d, *q), p);
      }
    }
  }
}

TEST(Vershik, Coordinates) {
  const Diagram d = twoadic(3);
  const PathCoord c = coords(d, parse_path(d, "1,1,0"));
  EXPECT_EQ(c.index, (std::vector<BigInt>{1, 3, 3}));
  EXPECT_EQ(coords(d, parse_path(d, "0,0,0")).index, (std::vector<BigInt>{0, 0, 0}));
}

TEST(Vershik, LazyPathsAndBudget) {
  const Diagram d = twoadic_stationary();
  const LazyPath y = path_from_labels(d, [](std::size_t level) { return level <= 3 ? 1 : 0; }, 20);
  const LazyPath z = successor(y);
  EXPECT_EQ(labels(d, z.materialize(6)), (std::vector<std::size_t>{0, 0, 0, 1, 0, 0}));
  EXPECT_EQ(successor_level(y), 4u);
  EXPECT_EQ(labels(d, predecessor(z).materialize(6)), (std::vector<std::size_t>{1, 1, 1, 0, 0, 0}));
  const LazyPath top = path_from_labels(d, [](std::size_t) { return 1; }, 20);
  EXPECT_THROW(successor(top), BudgetExceeded);
}

TEST(Odometer, CarryExamples) {
  const SeqSpace two = SeqSpace::uniform(2);
  EXPECT_EQ(add_one(AdicInt(two, parse_point(two, "110(0)"))).digits(), parse_point(two, "001(0)"));
  EXPECT_EQ(add_one(AdicInt(two, parse_point(two, "(1)"))).digits(), parse_point(two, "(0)"));
  const SeqSpace mixed = SeqSpace::parse("2,3(2)");
  EXPECT_EQ(add_one(AdicInt(mixed, parse_point(mixed, "12(0)"))).digits(), parse_point(mixed, "001(0)"));
}

TEST(Odometer, ArithmeticLaws) {
  Rng rng(10);
  const SeqSpace s = SeqSpace::parse("2,3(2,5)");
  for (int i = 0; i < 200; ++i) {
    const AdicInt x(s, random_point(rng, s, 8, 1));
    const AdicInt y(s, random_point(rng, s, 8, 1));
    EXPECT_EQ(add(x, y), add(y, x));
    EXPECT_EQ(add(x, neg(x)), AdicInt::zero(s));
    EXPECT_EQ(subtract(add(x, y), y), x);
    EXPECT_EQ(add_one(x), add(x, AdicInt::one(s)));
    EXPECT_EQ(odometer_map(s).apply(x.digits()), add_one(x).digits());
  }
}

TEST(Odometer, FromIntegerAndMetric) {
  const SeqSpace two = SeqSpace::uniform(2);
  EXPECT_EQ(AdicInt::from_integer(two, 6).digits(), parse_point(two, "011(0)"));
  EXPECT_EQ(adic_metric(AdicInt::from_integer(two, 1), AdicInt::from_integer(two, 3)), Rational(1, 2));
  EXPECT_EQ(adic_metric(AdicInt::zero(two), AdicInt::zero(two)), Rational(0));
}

TEST(Odometer, TranslationMaps) {
  const SeqSpace two = SeqSpace::uniform(2);
  EXPECT_TRUE(translation_map(AdicInt::zero(two)).is_identity());
  const CylMap one = translation_map(AdicInt::one(two));
  EXPECT_EQ(one, odometer_map(two));
  EXPECT_EQ(one.image_word(parse_word(two, "110")), parse_word(two, "001"));
  const AdicInt b(two, parse_point(two, "1(01)"));
  const CylMap tb = translation_map(b);
  Rng rng(14);
  for (int i = 0; i < 50; ++i) {
    const AdicInt x(two, random_point(rng, two, 6, 2));
    EXPECT_EQ(tb.apply(x.digits()), add(x, b).digits());
  }
}

TEST(Odometer, VershikDiagram) {
  const Diagram d = to_vershik_diagram(SeqSpace::uniform(2), 3);
  for (std::size_t n = 1; n <= 3; ++n) {
    EXPECT_EQ(incidence(d, n), (Matrix{{BigInt(2)}}));
    EXPECT_EQ(height(d, n, 0), BigInt(1) << n);
  }
}

TEST(Odometer, ConjugateToVershikMap) {
  Rng rng(15);
  const SeqSpace s = SeqSpace::parse("3,2(2)");
  const Diagram d = to_vershik_diagram(s, 30);
  for (int i = 0; i < 100; ++i) {
    const Point x = random_point(rng, s, 20, 2);
    bool top = true;
    for (std::size_t k = 0; k < 25; ++k) top = top && x.at(k) == s.alphabet(k) - 1;
    if (top) continue;
    const LazyPath y = path_from_labels(d, [x](std::size_t level) { return x.at(level - 1); }, 30);
    const auto lab = labels(d, successor(y).materialize(25));
    const Point z = add_one(AdicInt(s, x)).digits();
    for (std::size_t k = 0; k < 25; ++k) EXPECT_EQ(lab[k], z.at(k));
  }
}
