#include <gtest/gtest.h>

#include <random>

#include "germlab/padic.hpp"

using namespace germlab;

namespace {

const FieldConfig kCfg{5, 12};

PadicScalar s(long num, long den = 1) { return scalar_from_rational(num, den, kCfg); }

mpq_class random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-2000, 2000), den(1, 60);
  long n = 0;
  while (n == 0) n = num(rng);
  mpq_class x(n, den(rng));
  x.canonicalize();
  return x;
}

}  // namespace

TEST(Scalar, FromRational) {
  EXPECT_TRUE(s(0).is_exact_zero());
  EXPECT_EQ(s(5).valuation(), 1);
  EXPECT_EQ(s(5).leading_digit(), 1);
  EXPECT_EQ(s(1, 5).valuation(), -1);
  EXPECT_EQ(s(1, 5).leading_digit(), 1);
  EXPECT_EQ(s(7).precision(), 12);
  EXPECT_THROW(scalar_from_rational(1, 0, kCfg), DivisionByZero);
}

TEST(Scalar, Valuation) {
  EXPECT_EQ(valuation(s(5)), 1);
  EXPECT_EQ(valuation(s(1)), 0);
  EXPECT_EQ(valuation(s(0)), kValInf);
}

TEST(Arith, ExactFastPath) {
  EXPECT_TRUE(add(s(1), s(-1)).is_exact_zero());
  EXPECT_EQ(mul(s(5), s(5)).valuation(), 2);
  EXPECT_EQ((s(3) / s(4)).rational(), mpq_class(3, 4));
  EXPECT_THROW(div(s(1), s(0)), DivisionByZero);
}

TEST(Arith, CancellationLosesDigits) {
  PadicScalar one = PadicScalar::approx(1, 5, 3);
  PadicScalar minus = PadicScalar::approx(-1 + 125 * 2, 5, 12);
  EXPECT_THROW(add(one, minus), InsufficientPrecision);
  PadicScalar partial = add(PadicScalar::approx(1, 5, 6), PadicScalar::approx(24, 5, 6));
  EXPECT_EQ(partial.valuation(), 2);
  EXPECT_EQ(partial.precision(), 4);
}

TEST(Arith, ApproxResultsContainExactValue) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    mpq_class x = random_rational(rng), y = random_rational(rng);
    PadicScalar ax = PadicScalar::approx(x, 5, 8), ay = PadicScalar::approx(y, 5, 8);
    for (auto op : {ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div}) {
      mpq_class exact;
      switch (op) {
        case ArithOp::Add: exact = x + y; break;
        case ArithOp::Sub: exact = x - y; break;
        case ArithOp::Mul: exact = x * y; break;
        case ArithOp::Div: exact = x / y; break;
      }
      if (exact == 0) continue;
      try {
        PadicScalar r = arith(ax, ay, op);
        EXPECT_TRUE(agrees(r, PadicScalar::from_rational(exact, 5, 20))) << to_string(x) << " " << to_string(y);
      } catch (const InsufficientPrecision&) {
      }
    }
  }
}

TEST(Arith, ValuationIsAdditive) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 1000; ++i) {
    mpq_class x = random_rational(rng), y = random_rational(rng);
    EXPECT_EQ(valuation(mul(PadicScalar::approx(x, 5, 6), PadicScalar::approx(y, 5, 6))), vp(x, 5) + vp(y, 5));
  }
}

TEST(SquareClass, Examples) {
  EXPECT_EQ(square_class(s(4)), SquareClass::One);
  EXPECT_EQ(square_class(s(5)), SquareClass::Pi);
  EXPECT_EQ(square_class(s(2)), SquareClass::Eps);
  EXPECT_EQ(square_class(s(10)), SquareClass::EpsPi);
  EXPECT_EQ(square_class(s(-1)), SquareClass::One);
  EXPECT_EQ(square_class_of(-1, 3), SquareClass::Eps);
  EXPECT_THROW(square_class(PadicScalar::approx(7, 5, 1)), InsufficientPrecision);
}

TEST(SquareClass, KleinProduct) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 1000; ++i) {
    mpq_class x = random_rational(rng), y = random_rational(rng);
    EXPECT_EQ(square_class(s(1) * PadicScalar::from_rational(x * y, kCfg)),
              square_class(PadicScalar::from_rational(x, kCfg)) * square_class(PadicScalar::from_rational(y, kCfg)));
  }
}

TEST(SquareClass, RepresentativesRoundTrip) {
  for (long p : {3L, 5L, 7L})
    for (SquareClass c : kAllSquareClasses) {
      EXPECT_EQ(square_class_of(class_representative(c, p), p), c);
      EXPECT_EQ(square_class_from_name(name(c)), c);
    }
}

TEST(Sqrt, Examples) {
  auto r = padic_sqrt(s(4));
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->rational(), 2);
  EXPECT_FALSE(padic_sqrt(s(5)).has_value());
  auto six = padic_sqrt(s(6));
  ASSERT_TRUE(six.has_value());
  EXPECT_EQ(six->leading_digit(), 1);
  EXPECT_TRUE(agrees(*six * *six, s(6)));
  // Residue root of 9 is 3 = -2 mod 5, so the canonical branch is -3.
  EXPECT_EQ(padic_sqrt(s(9))->rational(), -3);
}

TEST(Sqrt, SquaresAgreeOnSharedDigits) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 300; ++i) {
    mpq_class x = random_rational(rng);
    PadicScalar a = PadicScalar::approx(x, 5, 10);
    auto r = padic_sqrt(a);
    EXPECT_EQ(r.has_value(), square_class(a) == SquareClass::One);
    if (r) {
      EXPECT_TRUE(agrees(*r * *r, a));
      long d = r->leading_digit();
      EXPECT_TRUE(d >= 1 && d <= 2);
    }
  }
}

TEST(Norm, Examples) {
  QuadExtDescriptor unram{SquareClass::Eps}, ram{SquareClass::Pi};
  EXPECT_TRUE(is_norm(unram, s(9)));
  EXPECT_FALSE(is_norm(unram, s(5)));
  EXPECT_FALSE(is_norm(ram, s(2)));
  EXPECT_TRUE(is_norm(ram, s(-5)));
}

TEST(Norm, GridOracle) {
  // Solutions of a^2 - d b^2 = x over digit grids, compared with the Hilbert symbol.
  const long p = 5, mod = 625;
  for (mpq_class d : {mpq_class(2), mpq_class(5), mpq_class(10)}) {
    QuadExtDescriptor ext{square_class_of(d, p)};
    for (long x : {1L, 2L, 3L, 4L, 6L, 7L}) {
      bool found = false;
      long dd = d.get_num().get_si();
      for (long a = 0; a < mod && !found; ++a)
        for (long b = 0; b < 125 && !found; ++b)
          if (((a * a - dd * b * b - x) % mod + mod) % mod == 0) found = true;
      EXPECT_EQ(found, is_norm(ext, mpq_class(x), p)) << "d=" << dd << " x=" << x;
    }
  }
}

TEST(Norm, IndexTwoSubgroup) {
  std::mt19937_64 rng(15);
  for (SquareClass c : {SquareClass::Eps, SquareClass::Pi, SquareClass::EpsPi}) {
    QuadExtDescriptor ext{c};
    for (int i = 0; i < 1000; ++i) {
      mpq_class x = random_rational(rng), y = random_rational(rng);
      EXPECT_EQ(is_norm(ext, x * y, 5), is_norm(ext, x, 5) == is_norm(ext, y, 5));
    }
  }
}

TEST(Serialize, DigitString) {
  EXPECT_EQ(PadicScalar::approx(mpq_class(7, 1), 5, 3).serialize(), "5^0 * (2 + 1*5 + 0*5^2) mod 5^3");
  EXPECT_EQ(s(0).serialize(), "0");
  EXPECT_EQ(s(3, 4).to_string(), "3/4");
}

TEST(Agrees, Cosets) {
  EXPECT_TRUE(agrees(PadicScalar::approx(1, 5, 2), PadicScalar::approx(26, 5, 4)));
  EXPECT_FALSE(agrees(PadicScalar::approx(1, 5, 2), PadicScalar::approx(2, 5, 4)));
  EXPECT_FALSE(agrees(PadicScalar::approx(125, 5, 2), s(0)));
  EXPECT_TRUE(agrees(PadicScalar::approx(125, 5, 2), PadicScalar::approx(125 + 625 * 3, 5, 1)));
}

TEST(FieldConfig, Validation) {
  EXPECT_THROW((FieldConfig{2, 12}.validate()), std::invalid_argument);
  EXPECT_THROW((FieldConfig{9, 12}.validate()), std::invalid_argument);
  EXPECT_THROW((FieldConfig{5, 3}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((FieldConfig{7, 4}.validate()));
}
