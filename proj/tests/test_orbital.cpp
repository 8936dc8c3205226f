#include <gtest/gtest.h>

#include <random>

#include "germlab/orbital.hpp"

using namespace germlab;

namespace {

mpq_class Q(long n, long d = 1) { return mpq_class(n, d); }

}  // namespace

// Hand-computed from the fiber measure and confirmed by the grid oracle.
TEST(Orbital, SemisimpleAnchorsAtFive) {
  const long p = 5;
  auto f = LCFunction::ball(0, p);
  EXPECT_EQ(ss_orbital(QSl2{1, 0, 0}, f).value, Q(6, 5));
  EXPECT_EQ(ss_orbital(QSl2{5, 0, 0}, f).value, 6);
  EXPECT_EQ(ss_orbital(QSl2{25, 0, 0}, f).value, 30);
  EXPECT_EQ(ss_orbital(QSl2{0, 1, 2}, f).value, Q(4, 5));
  EXPECT_EQ(ss_orbital(QSl2{0, 1, 5}, f).value, Q(12, 25));
}

TEST(Orbital, SemisimpleAnchorsAtThree) {
  const long p = 3;
  auto f = LCFunction::ball(0, p);
  EXPECT_EQ(ss_orbital(QSl2{1, 0, 0}, f).value, Q(4, 3));
  EXPECT_EQ(ss_orbital(QSl2{0, 1, 2}, f).value, Q(2, 3));
  EXPECT_EQ(ss_orbital(QSl2{0, 1, 3}, f).value, Q(4, 9));
}

TEST(Orbital, NilpotentVectorOfUnitBall) {
  for (long p : {3L, 5L, 7L}) {
    auto v = nilpotent_vector(LCFunction::ball(0, p));
    EXPECT_EQ(v[0], 1);
    EXPECT_EQ(v[1], Q(1, 2));
    EXPECT_EQ(v[2], Q(1, 2));
    EXPECT_EQ(v[3], Q(1, 2 * p)) << "p=" << p;
    EXPECT_EQ(v[4], Q(1, 2 * p)) << "p=" << p;
  }
}

TEST(Orbital, NilpotentHomogeneity) {
  const long p = 5;
  auto f = LCFunction::ball(0, p);
  auto base = nilpotent_vector(f);
  auto scaled = nilpotent_vector(dilate(f, Q(25)));
  EXPECT_EQ(scaled[0], base[0]);
  for (int i = 1; i < 5; ++i) EXPECT_EQ(scaled[i], 25 * base[i]);
  EXPECT_EQ(scaled[1], Q(25, 2));
}

TEST(Orbital, ScalingCovariance) {
  const long p = 5;
  std::vector<LCFunction> fs{LCFunction::ball(0, p), LCFunction::ball(1, p),
                             LCFunction::indicator(QSl2{1, 0, 0}, {TreeVertex::base(), 1}, p),
                             LCFunction::indicator(QSl2{0, 0, 0}, {TreeVertex::make(1, 0, p), 0}, p)};
  std::vector<QSl2> xs{{1, 0, 0}, {5, 0, 0}, {0, 1, 2}, {0, 1, 5}, {0, 1, 10}};
  for (const auto& f : fs)
    for (const auto& x : xs) {
      auto lhs = ss_orbital(mpq_class(25) * x, f).value;
      auto rhs = ss_orbital(x, dilate(f, Q(25))).value;
      EXPECT_EQ(lhs, rhs) << f.to_string() << " at " << format_matrix(x);
    }
}

TEST(Orbital, ConjugationInvariance) {
  const long p = 5;
  std::mt19937_64 rng(7);
  auto f = LCFunction::indicator(QSl2{1, 0, 0}, {TreeVertex::base(), 1}, p);
  std::vector<QSl2> xs{{1, 0, 0}, {0, 1, 2}, {0, 1, 5}};
  for (int i = 0; i < 20; ++i) {
    QMat2 g = random_sl2(rng, p, 2);
    auto fg = f.conjugated(g);
    for (const auto& x : xs) {
      EXPECT_EQ(ss_orbital(x, fg).value, ss_orbital(x, f).value) << i;
      EXPECT_EQ(ss_orbital(conjugate(g, x), f).value, ss_orbital(x, f).value) << i;
    }
  }
}

TEST(Orbital, TailCertificate) {
  const long p = 5;
  auto r = ss_orbital(QSl2{1, 0, 0}, LCFunction::ball(0, p));
  EXPECT_TRUE(r.certificate);
  EXPECT_EQ(r.ratio, Q(1, 625));
  auto n = nilpotent_orbital(OrbitLabel::Regular(SquareClass::One), LCFunction::ball(0, p));
  EXPECT_EQ(n.ratio, Q(1, 25));
  auto e = ss_orbital(QSl2{0, 1, 2}, LCFunction::ball(0, p));
  EXPECT_EQ(e.ratio, 0);
  EXPECT_EQ(e.tail_value, 0);
}

TEST(Orbital, Linearity) {
  const long p = 5;
  auto f = LCFunction::ball(0, p);
  auto g = LCFunction::indicator(QSl2{0, 1, 0}, {TreeVertex::base(), 1}, p);
  QSl2 x{0, 1, 5};
  EXPECT_EQ(ss_orbital(x, Q(3) * f - g).value, 3 * ss_orbital(x, f).value - ss_orbital(x, g).value);
}

TEST(Orbital, Errors) {
  const long p = 5;
  auto f = LCFunction::ball(0, p);
  EXPECT_THROW(ss_orbital(QSl2{0, 1, 0}, f), NotRegular);
  EXPECT_THROW(ss_orbital(QSl2{0, 0, 0}, f), NotRegular);
  EXPECT_EQ(ss_normalization(Q(25), p), 5);
  EXPECT_EQ(ss_normalization(Q(5), p), 1);
  EXPECT_EQ(ss_normalization(Q(1, 5), p), Q(1, 5));
}
