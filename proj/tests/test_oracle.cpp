#include <gtest/gtest.h>

#include "germlab/oracle.hpp"

using namespace germlab;

namespace {

std::vector<LCFunction> grid_functions(long p) {
  return {LCFunction::ball(0, p), LCFunction::ball(1, p), LCFunction::ball(-1, p),
          LCFunction::indicator(QSl2{1, 0, 0}, {TreeVertex::base(), 1}, p),
          LCFunction::indicator(QSl2{0, 1, 0}, {TreeVertex::base(), 1}, p),
          LCFunction::indicator(QSl2{0, 0, 0}, {TreeVertex::make(1, 0, p), 0}, p)};
}

}  // namespace

TEST(Oracle, KnownValues) {
  const long p = 5;
  auto f = LCFunction::ball(0, p);
  EXPECT_EQ(brute_force_cell_oracle(QSl2{1, 0, 0}, f, 0), mpq_class(6, 5));
  EXPECT_EQ(brute_force_cell_oracle(QSl2{5, 0, 0}, f, 0), 6);
  EXPECT_EQ(brute_force_cell_oracle(OrbitLabel::Regular(SquareClass::One), f, 0), mpq_class(1, 2));
  EXPECT_EQ(brute_force_cell_oracle(OrbitLabel::Regular(SquareClass::Pi), f, 0), mpq_class(1, 10));
  EXPECT_EQ(brute_force_cell_oracle(OrbitLabel::Zero(), f, 0), 1);
}

TEST(Oracle, AgreesWithEngineOnSemisimple) {
  for (long p : {3L, 5L}) {
    const long e = smallest_nonsquare(p);
    std::vector<QSl2> xs{{1, 0, 0}, {p, 0, 0}, {0, 1, e}, {0, 1, p}, {0, 1, e * p}, {0, p, e * p}};
    for (const auto& f : grid_functions(p))
      for (const auto& x : xs) {
        mpq_class engine = ss_orbital(x, f).value;
        mpq_class grid = brute_force_cell_oracle(x, f, 0);
        EXPECT_EQ(engine, grid) << "p=" << p << " " << f.to_string() << " at " << format_matrix(x);
      }
  }
}

TEST(Oracle, AgreesWithEngineOnNilpotent) {
  for (long p : {3L, 5L})
    for (const auto& f : grid_functions(p))
      for (const auto& label : all_orbit_labels())
        EXPECT_EQ(nilpotent_orbital(label, f).value, brute_force_cell_oracle(label, f, 0))
            << "p=" << p << " " << f.to_string() << " " << label.to_string();
}

TEST(Oracle, RefinementIsStable) {
  const long p = 3;
  auto f = LCFunction::indicator(QSl2{1, 0, 0}, {TreeVertex::base(), 1}, p);
  for (QSl2 x : {QSl2{1, 0, 0}, QSl2{0, 1, 3}}) {
    EXPECT_EQ(brute_force_cell_oracle(x, f, 0), brute_force_cell_oracle(x, f, 1));
  }
  EXPECT_EQ(brute_force_cell_oracle(OrbitLabel::Regular(SquareClass::Eps), f, 0),
            brute_force_cell_oracle(OrbitLabel::Regular(SquareClass::Eps), f, 1));
}

TEST(Oracle, GridLimit) {
  EXPECT_THROW(brute_force_cell_oracle(QSl2{1, 0, 0}, LCFunction::ball(0, 11), 0), GridTooLarge);
  EXPECT_THROW(brute_force_cell_oracle(QSl2{0, 1, 0}, LCFunction::ball(0, 5), 0), NotRegular);
}

TEST(TreeOracle, CalibrationConstants) {
  EXPECT_EQ(tree_calibration_constant(TorusKind::Split, 5), mpq_class(6, 5));
  EXPECT_EQ(tree_calibration_constant(TorusKind::Unramified, 5), mpq_class(4, 5));
  EXPECT_EQ(tree_calibration_constant(TorusKind::RamifiedPi, 5), mpq_class(12, 25));
  EXPECT_EQ(tree_calibration_constant(TorusKind::Split, 3), mpq_class(4, 3));
  EXPECT_EQ(tree_calibration_constant(TorusKind::Unramified, 3), mpq_class(2, 3));
  EXPECT_EQ(tree_calibration_constant(TorusKind::RamifiedPi, 3), mpq_class(4, 9));
}

TEST(TreeOracle, LatticeIndicatorsMatchCounts) {
  // I(X, 1[g_{o,n}]) = c_T * #{w : X in g_{w,n}} with one constant per torus.
  for (long p : {3L, 5L}) {
    const long e = smallest_nonsquare(p);
    std::vector<QSl2> xs{{1, 0, 0}, {p, 0, 0}, {p * p, 0, 0}, {0, 1, e}, {0, p, e * p}, {0, 1, p}, {0, p, e * p * p * p}};
    for (const auto& x : xs)
      for (long n : {0L, 1L}) {
        SquareClass cls = square_class_of(x.neg_det(), p);
        mpq_class c = tree_calibration_constant(torus_kind_of(cls), p);
        auto count = tree_count_oracle(x, n, 6, p);
        EXPECT_EQ(ss_orbital(x, LCFunction::ball(n, p)).value, c * count.value)
            << "p=" << p << " n=" << n << " " << format_matrix(x);
      }
  }
}
