#include <gtest/gtest.h>

#include "germlab/sl2.hpp"

using namespace germlab;

namespace {

const FieldConfig kCfg{5, 12};

Sl2Element el(const mpq_class& a, const mpq_class& b, const mpq_class& c) {
  return Sl2Element::from_rational(a, b, c, kCfg);
}

}  // namespace

TEST(Classify, TorusKinds) {
  auto split = std::get<RegularSS>(classify(el(1, 0, 0)));
  EXPECT_EQ(split.torus, TorusKind::Split);
  ASSERT_TRUE(split.u.has_value());
  EXPECT_EQ(std::get<RegularSS>(classify(el(0, 1, 2))).torus, TorusKind::Unramified);
  EXPECT_EQ(std::get<RegularSS>(classify(el(0, 1, 5))).torus, TorusKind::RamifiedPi);
  EXPECT_EQ(std::get<RegularSS>(classify(el(0, 1, 10))).torus, TorusKind::RamifiedEpsPi);
  // -det = 1 + 3 = 4 is a square.
  EXPECT_EQ(std::get<RegularSS>(classify(el(1, 1, 3))).torus, TorusKind::Split);
}

TEST(Classify, NilpotentAndZero) {
  EXPECT_TRUE(std::holds_alternative<ZeroElt>(classify(el(0, 0, 0))));
  auto n = std::get<Nilpotent>(classify(el(0, 2, 0)));
  EXPECT_EQ(n.label, OrbitLabel::Regular(SquareClass::Eps));
  // Lower-triangular nilpotents are tagged by -c.
  EXPECT_EQ(std::get<Nilpotent>(classify(el(0, 0, -5))).label, OrbitLabel::Regular(SquareClass::Pi));
  // [[1,1],[-1,-1]] is nilpotent with b = 1.
  EXPECT_EQ(std::get<Nilpotent>(classify(el(1, 1, -1))).label, OrbitLabel::Regular(SquareClass::One));
}

TEST(Classify, CancellingApproximateEntriesAreAmbiguous) {
  Sl2Element x(PadicScalar::approx(1, 5, 6), PadicScalar::approx(1, 5, 6), PadicScalar::approx(-1, 5, 6));
  EXPECT_THROW(classify(x), AmbiguousNilpotent);
}

TEST(Depth, HalfIntegers) {
  EXPECT_EQ(depth(el(5, 0, 0)), (Depth{false, 1}));
  EXPECT_EQ(depth(el(1, 0, 0)), (Depth{false, 0}));
  EXPECT_EQ(depth(el(0, 1, 5)), (Depth{false, mpq_class(1, 2)}));
  EXPECT_EQ(depth(el(mpq_class(1, 5), 0, 0)), (Depth{false, -1}));
  EXPECT_EQ(depth(el(0, 1, 5)).to_string(), "1/2");
  EXPECT_TRUE(depth(el(0, 1, 0)).deep);
}

TEST(Depth, MembershipClosedAndOpen) {
  auto x = el(5, 0, 0);
  EXPECT_TRUE(in_g_r(x, 1));
  EXPECT_FALSE(in_g_r(x, 1, true));
  EXPECT_TRUE(in_g_r(x, mpq_class(1, 2), true));
  EXPECT_TRUE(in_g_r(el(0, 1, 0), 100, true));
}

TEST(TopNilpotent, Examples) {
  EXPECT_TRUE(is_top_nilpotent(el(5, 0, 0)));
  EXPECT_TRUE(is_top_nilpotent(el(0, 1, 5)));
  EXPECT_TRUE(is_top_nilpotent(el(0, 7, 0)));
  EXPECT_FALSE(is_top_nilpotent(el(1, 0, 0)));
  EXPECT_FALSE(is_top_nilpotent(el(0, 1, 2)));
}

TEST(Ad, PreservesDeterminantAndDepth) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (auto x : {el(5, 0, 0), el(0, 1, 5), el(0, 1, 2), el(0, 3, 0)}) {
      Sl2Element y = random_conjugate(x, seed, 3);
      ASSERT_TRUE(y.is_exact());
      EXPECT_EQ(y.rational().neg_det(), x.rational().neg_det());
      EXPECT_EQ(depth(y), depth(x));
      if (!is_regular_semisimple(classify(x)))
        EXPECT_EQ(std::get<Nilpotent>(classify(y)).label, std::get<Nilpotent>(classify(x)).label);
    }
  }
}

TEST(Ad, MatchesRationalConjugation) {
  QMat2 g{2, 1, 1, 1};
  QSl2 x{1, 5, mpq_class(1, 5)};
  auto y = ad(GroupElement::from_rational(g, kCfg), Sl2Element::from_rational(x, kCfg));
  EXPECT_EQ(y.rational(), conjugate(g, x));
}

TEST(Cayley, RoundTrip) {
  for (auto x : {el(5, 0, 0), el(0, 1, 5), el(5, 25, -1), el(0, 3, 0)}) {
    GroupElement g = cayley(x);
    Sl2Element back = cayley_inv(g);
    EXPECT_TRUE(agrees(back.a(), x.a()));
    EXPECT_TRUE(agrees(back.b(), x.b()));
    EXPECT_TRUE(agrees(back.c(), x.c()));
  }
  EXPECT_THROW(cayley(el(1, 0, 0)), OutsideDomain);
}

TEST(GroupElement, DeterminantChecked) {
  EXPECT_THROW(GroupElement::from_rational(QMat2{2, 0, 0, 1}, kCfg), std::invalid_argument);
  EXPECT_NO_THROW(GroupElement::from_rational(QMat2{5, 0, 0, mpq_class(1, 5)}, kCfg));
}

TEST(Representatives, StandardForms) {
  auto n = standard_representative(OrbitLabel::Regular(SquareClass::EpsPi), kCfg);
  EXPECT_EQ(std::get<Nilpotent>(classify(n)).label, OrbitLabel::Regular(SquareClass::EpsPi));
  auto s = standard_representative(SemisimpleSpec{TorusKind::RamifiedPi, 5}, kCfg);
  EXPECT_EQ(std::get<RegularSS>(classify(s)).torus, TorusKind::RamifiedPi);
  EXPECT_THROW(standard_representative(SemisimpleSpec{TorusKind::Unramified, 5}, kCfg), SpecMismatch);
  EXPECT_THROW(standard_representative(SemisimpleSpec{TorusKind::Split, 0}, kCfg), SpecMismatch);
}

TEST(OrbitLabels, EnumerationAndNames) {
  auto labels = all_orbit_labels();
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(labels[i].index(), i);
    EXPECT_EQ(orbit_label_from_string(labels[i].to_string()), labels[i]);
  }
  EXPECT_EQ(labels[0].dim(), 0);
  EXPECT_EQ(labels[3].dim(), 2);
}

TEST(ParseMatrix, Forms) {
  EXPECT_EQ(parse_matrix("diag(5,-5)"), (QSl2{5, 0, 0}));
  EXPECT_EQ(parse_matrix("[[0, 1], [5, 0]]"), (QSl2{0, 1, 5}));
  EXPECT_EQ(parse_matrix("[[1/5,1],[2,-1/5]]"), (QSl2{mpq_class(1, 5), 1, 2}));
  EXPECT_EQ(parse_matrix("0"), (QSl2{0, 0, 0}));
  EXPECT_THROW(parse_matrix("diag(1,1)"), ParseError);
  EXPECT_THROW(parse_matrix("[[1,0],[0,1]]"), ParseError);
  EXPECT_THROW(parse_matrix("hello"), ParseError);
  EXPECT_EQ(format_matrix(QSl2{1, 2, 3}), "[[1,2],[3,-1]]");
  EXPECT_EQ(parse_matrix(format_matrix(QSl2{mpq_class(-2, 3), 0, 7})), (QSl2{mpq_class(-2, 3), 0, 7}));
}
