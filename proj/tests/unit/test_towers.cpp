#include <gtest/gtest.h>

#include "../support/oracles.hpp"
#include "bvdyn/error.hpp"
#include "bvdyn/rank_one.hpp"
#include "bvdyn/symbolic.hpp"
#include "bvdyn/topology.hpp"
#include "bvdyn/towers.hpp"

using namespace bvdyn;
using namespace bvdyn::testing;

namespace {

const SeqSpace kTwo = SeqSpace::uniform(2);
Word w(const std::string& s) { return parse_word(kTwo, s); }

/// First return time of x to A by iterating T.
std::size_t return_time(const CylMap& t, const Point& x, const CylUnion& a, std::size_t cap) {
  Point y = x;
  for (std::size_t k = 1; k <= cap; ++k) {
    y = t.apply(y);
    for (const auto& u : a)
      if (in_cylinder(y, u)) return k;
  }
  return 0;
}

}  // namespace

TEST(Towers, OdometerOverZeros) {
  const CylMap t = odometer_map(kTwo);
  const TowerPartition xi = build_towers(t, {w("0")});
  ASSERT_EQ(xi.towers.size(), 1u);
  EXPECT_EQ(xi.towers[0].height, 2u);
  EXPECT_EQ(xi.level(0, 0), CylUnion{w("0")});
  EXPECT_EQ(xi.level(0, 1), CylUnion{w("1")});
  for (std::size_t n = 1; n <= 6; ++n) {
    const TowerPartition x = build_towers(t, {Word(n, 0)});
    ASSERT_EQ(x.towers.size(), 1u);
    EXPECT_EQ(x.towers[0].height, std::size_t{1} << n);
    EXPECT_TRUE(x.covers());
  }
  const TowerPartition all = build_towers(t, {Word{}});
  for (const auto& tw : all.towers) EXPECT_EQ(tw.height, 1u);
}

TEST(Towers, HeightsAreReturnTimes) {
  Rng rng(31);
  for (int i = 0; i < 20; ++i) {
    const CylMap t = random_cylmap(rng, kTwo);
    const CylUnion a{w("01"), w("110")};
    const TowerPartition xi = build_towers(t, a);
    for (std::size_t k = 0; k < xi.towers.size(); ++k) {
      for (const auto& base : xi.base(k)) {
        Point x(base, {0, 1, 1});
        EXPECT_EQ(return_time(t, x, a, 64), xi.towers[k].height);
      }
    }
  }
}

TEST(Towers, MarkerClauses) {
  const CylMap t = odometer_map(kTwo);
  const MarkerReport rep = validate_markers(MarkerSeq::zeros(t), 5, 10);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.clauses.size(), 6u);
  const MarkerSeq bad = MarkerSeq::from_list(t, {{w("00")}, {w("0")}});
  const MarkerReport r = validate_markers(bad, 2, 4);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.clauses[0].answer, Answer::No);
  EXPECT_EQ(r.clauses[1].answer, Answer::Unknown);
}

TEST(Towers, KMaximalLevels) {
  const TowerPartition xi = build_towers(odometer_map(kTwo), {w("000")});
  const MeasureSpec mu = MeasureSpec::uniform(kTwo);
  const KMaximal k2 = k_maximal(xi, 2);
  EXPECT_EQ(k2.set, CylUnion{w("0")});
  EXPECT_EQ(measure(mu, Region{k2.set, {}}), Rational(1, 2));
  const KMaximal k8 = k_maximal(xi, 8);
  EXPECT_EQ(k8.set, CylUnion{w("000")});
  EXPECT_TRUE(k8.covering && k8.disjoint);
  const KMaximal k3 = k_maximal(xi, 3);
  EXPECT_EQ(k3.set, (CylUnion{w("000"), w("110")}));
  EXPECT_TRUE(k3.covering && k3.disjoint);
}

TEST(Towers, InducedMap) {
  const CylMap t = odometer_map(kTwo);
  const CylMap ind = induced(t, {w("0")});
  Rng rng(32);
  for (int i = 0; i < 50; ++i) {
    const Point y = random_point(rng, kTwo, 6, 2);
    Word head{0};
    head.insert(head.end(), y.head.begin(), y.head.end());
    const Point x(head, y.period);
    const Point ty = t.apply(y);
    Word out{0};
    out.insert(out.end(), ty.head.begin(), ty.head.end());
    EXPECT_EQ(ind.apply(x), Point(out, ty.period));
    Word off_head{1};
    off_head.insert(off_head.end(), y.head.begin(), y.head.end());
    const Point off(off_head, y.period);
    EXPECT_EQ(ind.apply(off), off);
  }
  EXPECT_EQ(induced(t, {Word{}}), t);
}

TEST(Towers, PeriodicApproximant) {
  const CylMap t = odometer_map(kTwo);
  const CylMap p = periodic_approx(MarkerSeq::zeros(t), 3);
  EXPECT_EQ(p.image_word(w("111")), w("000"));
  EXPECT_EQ(p.image_word(w("110")), w("001"));
  EXPECT_EQ(p.power(8), CylMap::identity(kTwo));
  EXPECT_EQ(dist_uniform(p, t, MeasureSpec::uniform(kTwo), 3), (Interval{Rational(1, 4), Rational(1, 4)}));
}

TEST(Towers, RokhlinExamples) {
  const CylMap t = odometer_map(kTwo);
  const MarkerSeq zeros = MarkerSeq::zeros(t);
  const std::vector<MeasureSpec> mus{MeasureSpec::uniform(kTwo)};
  const RokhlinResult r = rokhlin_set(zeros, 3, Rational(3, 10), mus, 4);
  EXPECT_EQ(r.f, (CylUnion{w("0000"), w("0011"), w("0110"), w("1001"), w("1100")}));
  EXPECT_EQ(r.measures[0].coverage, Rational(15, 16));
  const RokhlinResult r2 = rokhlin_set(zeros, 2, Rational(1, 2), mus, 1);
  EXPECT_EQ(r2.f, CylUnion{w("0")});
  EXPECT_EQ(r2.measures[0].coverage, Rational(1));
  const RokhlinResult r3 = rokhlin_set(zeros, 3, Rational(3, 10), mus, 3);
  EXPECT_EQ(r3.measures[0].coverage, Rational(3, 4));
  EXPECT_TRUE(r3.certified);
}

TEST(Towers, MarkerDiagramOfOdometer) {
  const MarkerDiagram md(MarkerSeq::zeros(odometer_map(kTwo)), 8);
  EXPECT_EQ(md.diagram(), to_vershik_diagram(kTwo, 8));
  for (std::size_t n = 1; n <= 8; ++n) EXPECT_EQ(md.tower_heights()[n][0], BigInt(1) << n);
  Rng rng(33);
  std::vector<Point> pts;
  for (int i = 0; i < 100; ++i) pts.push_back(random_point(rng, kTwo, 10, 2));
  const auto c = md.check_conjugacy(pts);
  EXPECT_TRUE(c.failures.empty());
  EXPECT_EQ(c.checked + c.skipped, 100u);
}

TEST(Towers, MarkerDiagramWithTwoTowers) {
  const CylMap t = odometer_map(kTwo);
  const MarkerSeq m = MarkerSeq::from_list(t, {{w("0"), w("11")}, {w("000")}});
  const MarkerDiagram md(m, 2);
  EXPECT_EQ(md.diagram().vertex_count(1), 2u);
  EXPECT_TRUE(validate(md.diagram(), 2).empty());
  for (std::size_t v = 0; v < 2; ++v) EXPECT_EQ(height(md.diagram(), 1, v), md.tower_heights()[1][v]);
  EXPECT_EQ(height(md.diagram(), 2, 0), BigInt(8));
}

TEST(RankOne, SpecParseAndErrors) {
  const auto spec = CuttingStackingSpec::parse("stage 1 cuts 3 spacers 0 1 0\nstage 2 cuts 2 spacers 0 0\n");
  EXPECT_EQ(spec.stages.size(), 2u);
  EXPECT_EQ(CuttingStackingSpec::parse(spec.to_text()), spec);
  try {
    CuttingStackingSpec::parse("stage 1 cuts 2 spacers 0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  EXPECT_THROW(CuttingStackingSpec::parse("stage 2 cuts 2 spacers 0 0\n"), ParseError);
}

TEST(RankOne, NoSpacersGivesOdometerDiagram) {
  const RankOne r = rank1_build(CuttingStackingSpec::uniform(2, 5), 5);
  EXPECT_EQ(r.diagram, to_vershik_diagram(kTwo, 5));
  EXPECT_FALSE(r.has_spacer_vertex());
}

TEST(RankOne, HeightsWithSpacers) {
  CuttingStackingSpec spec;
  spec.stages = {CuttingStage{{1, 0}}, CuttingStage{{1, 0}}, CuttingStage{{0, 2, 0}}};
  const RankOne r = rank1_build(spec, 3);
  EXPECT_EQ(r.heights[1], BigInt(3));
  EXPECT_EQ(r.heights[2], BigInt(7));
  EXPECT_EQ(r.heights[3], BigInt(23));
  EXPECT_TRUE(validate(r.diagram, 3).empty());
  for (std::size_t n = 1; n <= 3; ++n) EXPECT_EQ(height(r.diagram, n, 0), r.heights[n]);
}

TEST(RankOne, ApproximantIsTowerSuccessor) {
  const RankOne r = rank1_build(CuttingStackingSpec::uniform(2, 3), 3);
  const auto q = approximant(r, 3, parse_path(r.diagram, "1,0,0"));
  ASSERT_TRUE(q);
  EXPECT_EQ(format_path(r.diagram, *q, false), "0,1,0");
  EXPECT_FALSE(approximant(r, 3, parse_path(r.diagram, "1,1,1")));
}

TEST(RankOne, OdometerApproximation) {
  const RankOne plain = rank1_build(CuttingStackingSpec::uniform(2, 4), 4);
  const OdometerApprox a = odometer_approx(plain, {RankOneMeasure::uniform()}, Rational(1, 4));
  EXPECT_TRUE(a.certified);
  EXPECT_EQ(a.distances[0], Rational(0));

  CuttingStackingSpec spec;
  for (int i = 0; i < 6; ++i) spec.stages.push_back(CuttingStage{{0, 1}});
  const RankOne r = rank1_build(spec, 6);
  const OdometerApprox b = odometer_approx(r, {RankOneMeasure::uniform(), RankOneMeasure::point(BigInt(40))}, Rational(1, 8));
  ASSERT_TRUE(b.stage);
  EXPECT_LT(b.bounds[0], Rational(1, 8));
  // S is one cycle through every level.
  std::uint64_t x = 0;
  std::size_t steps = 0;
  do {
    x = b.s[x];
    ++steps;
  } while (x != 0 && steps <= b.s.size());
  EXPECT_EQ(steps, b.s.size());
}
