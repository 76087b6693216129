#include <gtest/gtest.h>

#include "../support/oracles.hpp"
#include "bvdyn/error.hpp"
#include "bvdyn/symbolic.hpp"
#include "bvdyn/towers.hpp"

using namespace bvdyn;
using namespace bvdyn::testing;

namespace {

const SeqSpace kTwo = SeqSpace::uniform(2);

Word w(const std::string& s) { return parse_word(kTwo, s); }
Point pt(const std::string& s) { return parse_point(kTwo, s); }

CylMap p3() { return periodic_approx(MarkerSeq::zeros(odometer_map(kTwo)), 3); }

}  // namespace

TEST(Numeric, ParsesFractionsAndDecimalsExactly) {
  EXPECT_EQ(parse_rational("0.3"), Rational(3, 10));
  EXPECT_EQ(parse_rational("6/8"), Rational(3, 4));
  EXPECT_EQ(parse_rational("-2"), Rational(-2));
  EXPECT_EQ(to_string(Rational(6, 8)), "3/4");
  EXPECT_THROW(parse_rational("1/0"), InvalidArgument);
  EXPECT_THROW(parse_rational("abc"), InvalidArgument);
}

TEST(SeqSpace, ParsesAndPrintsMixedRadix) {
  const SeqSpace s = SeqSpace::parse("2,3(5)");
  EXPECT_EQ(s.alphabet(0), 2u);
  EXPECT_EQ(s.alphabet(1), 3u);
  EXPECT_EQ(s.alphabet(7), 5u);
  EXPECT_EQ(s.to_string(), "2,3(5)");
  EXPECT_EQ(SeqSpace::parse("2adic"), kTwo);
  EXPECT_EQ(s.partial_product(2), BigInt(30));
  EXPECT_THROW(SeqSpace::parse("1"), InvalidArgument);
}

TEST(SeqSpace, PointsNormalize) {
  EXPECT_EQ(Point({1, 0, 1, 0}, {1, 0}), Point({}, {1, 0}));
  EXPECT_EQ(Point({0, 0}, {0, 0}), Point());
  EXPECT_EQ(format_point(kTwo, Point({1, 1}, {0})), "11(0)");
  EXPECT_EQ(pt("110(0)"), Point({1, 1}, {0}));
  EXPECT_EQ(first_difference(pt("110(0)"), pt("111(0)")), 2);
  EXPECT_EQ(first_difference(pt("(1)"), pt("1(1)")), -1);
}

TEST(SeqSpace, IndexerIsLexicographicWithBlocks) {
  CylinderIndexer idx(kTwo, 3);
  EXPECT_EQ(idx.count(), 8u);
  EXPECT_EQ(idx.index(w("000")), 0u);
  EXPECT_EQ(idx.index(w("100")), 4u);
  EXPECT_EQ(idx.block_size(1), 4u);
  for (std::uint64_t i = 0; i < idx.count(); ++i) EXPECT_EQ(idx.index(idx.word(i)), i);
}

TEST(Measure, CylinderMasses) {
  const MeasureSpec mu = MeasureSpec::uniform(kTwo);
  EXPECT_EQ(mu.mass(w("111")), Rational(1, 8));
  EXPECT_EQ(measure(mu, Region{{w("111"), w("000")}, {}}), Rational(1, 4));
  const MeasureSpec atoms = MeasureSpec::atomic(kTwo, {{pt("(0)"), Rational(1, 2)}, {pt("(1)"), Rational(1, 2)}});
  EXPECT_EQ(measure(atoms, Region{{w("0")}, {}}), Rational(1, 2));
  EXPECT_THROW(measure(mu, Region{{w("1"), w("11")}, {}}), InvalidArgument);
}

TEST(Measure, TextRoundTrip) {
  const MeasureSpec b = MeasureSpec::bernoulli(kTwo, {Rational(1, 3), Rational(2, 3)});
  const MeasureSpec parsed = MeasureSpec::parse(b.to_text());
  EXPECT_EQ(parsed.to_text(), b.to_text());
  EXPECT_EQ(parsed.mass(w("01")), Rational(2, 9));
  try {
    MeasureSpec::parse("measure 1\nspace 2\nbernoulli\nrepeat 1/2,1/3\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Measure, MassesAreAdditive) {
  const MeasureSpec mu = MeasureSpec::bernoulli(kTwo, {Rational(1, 3), Rational(2, 3)});
  CylinderIndexer idx(kTwo, 4);
  for (std::uint64_t i = 0; i < idx.count(); ++i) {
    Word u = idx.word(i);
    Word u0 = u, u1 = u;
    u0.push_back(0);
    u1.push_back(1);
    EXPECT_EQ(mu.mass(u), mu.mass(u0) + mu.mass(u1));
  }
}

TEST(CylMap, OdometerTextAndApply) {
  const CylMap t = odometer_map(kTwo);
  EXPECT_EQ(t.to_text(), "cylmap 1\nspace 2\n0 -> 1\n1 -> 0 @main\n");
  EXPECT_EQ(t.apply(pt("110(0)")), pt("001(0)"));
  EXPECT_EQ(t.apply(pt("(1)")), pt("(0)"));
  EXPECT_EQ(CylMap::parse(t.to_text()), t);
}

TEST(CylMap, ComposeWithIdentityAndInverse) {
  const CylMap t = odometer_map(kTwo);
  const CylMap id = CylMap::identity(kTwo);
  EXPECT_EQ(compose(t, id), t);
  EXPECT_EQ(compose(id, t), t);
  EXPECT_TRUE(compose(t, t.inverse()).is_identity());
  EXPECT_EQ(t.inverse().inverse(), t);
  EXPECT_TRUE(id.inverse().is_identity());
}

TEST(CylMap, PlusTwoTable) {
  const CylMap two = compose(odometer_map(kTwo), odometer_map(kTwo));
  EXPECT_EQ(two.image_word(w("000")), w("010"));
  EXPECT_EQ(two.image_word(w("100")), w("110"));
  EXPECT_EQ(two.image_word(w("010")), w("001"));
  EXPECT_EQ(two.image_word(w("110")), w("101"));
  EXPECT_EQ(two.image_word(w("011")), w("000"));
  EXPECT_EQ(two, translation_map(AdicInt::from_integer(kTwo, 2)));
}

TEST(CylMap, SubtractOneRules) {
  bool complete = true;
  const auto rules = odometer_map(kTwo).inverse().rules(4, &complete);
  EXPECT_FALSE(complete);
  const std::vector<std::pair<Word, Word>> expected{
      {w("0001"), w("1110")}, {w("001"), w("110")}, {w("01"), w("10")}, {w("1"), w("0")}};
  EXPECT_EQ(rules, expected);
}

TEST(CylMap, RejectsDigitsOutOfRange) {
  try {
    CylMap::parse("cylmap 1\nspace 2\n0 -> 1\n1 -> 2\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(CylMap, PowerMatchesRepeatedComposition) {
  Rng rng(11);
  for (int i = 0; i < 10; ++i) {
    const CylMap t = random_cylmap(rng, kTwo);
    EXPECT_EQ(t.power(3), compose(t, compose(t, t)));
    EXPECT_EQ(t.power(-2), compose(t.inverse(), t.inverse()));
    EXPECT_TRUE(t.power(0).is_identity());
  }
}

TEST(CylMap, BijectionOnCylindersProperty) {
  Rng rng(12);
  for (int i = 0; i < 30; ++i) {
    const CylMap t = random_cylmap(rng, kTwo);
    const std::size_t d = std::max<std::size_t>(t.head_depth(), 4);
    auto perm = t.cylinder_permutation(d);
    std::vector<bool> seen(perm.size(), false);
    for (auto x : perm) {
      ASSERT_FALSE(seen[x]);
      seen[x] = true;
    }
    const CylMap inv = t.inverse();
    for (int k = 0; k < 20; ++k) {
      const Point x = random_point(rng, kTwo, 8, 3);
      EXPECT_EQ(inv.apply(t.apply(x)), x);
      EXPECT_EQ(t.apply(x).prefix(d), t.image_word(x.prefix(d)));
    }
  }
}

TEST(CylMap, CanonicalFormIsStructural) {
  Rng rng(13);
  for (int i = 0; i < 10; ++i) {
    const CylMap t = random_cylmap(rng, kTwo);
    EXPECT_EQ(CylMap::parse(t.to_text()), t);
    EXPECT_EQ(compose(t, t.inverse()), CylMap::identity(kTwo));
  }
}

TEST(CylMap, PiecewisePower) {
  const CylMap t = odometer_map(kTwo);
  const CylMap p = piecewise_power(t, {{w("0"), 1}, {w("10"), 1}, {w("110"), 1}, {w("111"), -7}});
  EXPECT_EQ(p, p3());
  EXPECT_THROW(piecewise_power(t, {{w("0"), 1}}), InvalidArgument);
}

TEST(Symbolic, DiffSetOfEqualMapsIsEqual) {
  const Classification c = diff_set(odometer_map(kTwo), odometer_map(kTwo), 3);
  EXPECT_EQ(c.indices(CellClass::Equal).size(), 8u);
  EXPECT_TRUE(e_set(odometer_map(kTwo), odometer_map(kTwo), 3).indices(CellClass::Different).empty());
}

TEST(Symbolic, DiffSetOfP3) {
  const CylinderIndexer idx(kTwo, 3);
  const Classification f = diff_set(p3(), odometer_map(kTwo), 3);
  EXPECT_EQ(f.indices(CellClass::Different), std::vector<std::uint64_t>{idx.index(w("111"))});
  EXPECT_TRUE(f.indices(CellClass::Unresolved).empty());
  const Classification e = e_set(p3(), odometer_map(kTwo), 3);
  EXPECT_EQ(e.indices(CellClass::Different), (std::vector<std::uint64_t>{idx.index(w("000")), idx.index(w("111"))}));
}

TEST(Symbolic, DiffSetSpaceMismatch) {
  EXPECT_THROW(diff_set(odometer_map(kTwo), odometer_map(SeqSpace::uniform(3)), 1), SpaceMismatch);
}

TEST(Symbolic, DiffSetAgreesWithPointwiseComparison) {
  Rng rng(21);
  for (int i = 0; i < 30; ++i) {
    const CylMap s = random_cylmap(rng, kTwo);
    const CylMap t = random_cylmap(rng, kTwo);
    const Classification c = diff_set(s, t, 3);
    CylinderIndexer idx(kTwo, 3);
    for (int k = 0; k < 40; ++k) {
      const Point x = random_point(rng, kTwo, 8, 2);
      const CellClass cls = c.cells[idx.index_of_prefix(x)];
      if (cls == CellClass::Equal) {
        EXPECT_EQ(s.apply(x), t.apply(x));
      } else if (cls == CellClass::Different) {
        EXPECT_NE(s.apply(x), t.apply(x));
      }
    }
  }
}

TEST(Symbolic, Pushforward) {
  const MeasureSpec mu = MeasureSpec::uniform(kTwo);
  EXPECT_EQ(pushforward_measure(mu, odometer_map(kTwo), {w("0")}), Rational(1, 2));
  EXPECT_EQ(pushforward_measure(mu, p3(), {w("1110")}), Rational(1, 16));
  const MeasureSpec d = MeasureSpec::dirac(kTwo, pt("(1)"));
  EXPECT_EQ(pushforward_measure(d, odometer_map(kTwo), {w("0")}), Rational(1));
}

TEST(Symbolic, CellHelpers) {
  const auto cells = cells_of(kTwo, 3, {w("1"), w("01")});
  EXPECT_EQ(cells.size(), 6u);
  EXPECT_EQ(compress_cells(kTwo, 3, cells), (std::vector<Word>{w("01"), w("1")}));
  EXPECT_TRUE(in_cylinder(pt("110(0)"), w("11")));
  EXPECT_FALSE(in_cylinder(pt("110(0)"), w("10")));
}
