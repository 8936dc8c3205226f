#include <gtest/gtest.h>

#include "germlab/qutil.hpp"

using namespace germlab;

TEST(Valuation, IntegersAndFractions) {
  EXPECT_EQ(vp(mpz_class(250), 5), 3);
  EXPECT_EQ(vp(mpq_class(3, 25), 5), -2);
  EXPECT_EQ(vp(mpq_class(0), 5), kValInf);
  EXPECT_EQ(vp(mpz_class(-81), 3), 4);
}

TEST(ModPk, InvertsDenominators) {
  // 1/2 = 3 mod 5 and 13 mod 25.
  EXPECT_EQ(mod_pk(mpq_class(1, 2), 5, 1), 3);
  EXPECT_EQ(mod_pk(mpq_class(1, 2), 5, 2), 13);
  EXPECT_EQ(mod_pk(mpq_class(-1), 5, 3), 124);
  EXPECT_THROW(mod_pk(mpq_class(1, 5), 5, 2), std::domain_error);
}

TEST(Residues, LegendreAndNonsquares) {
  EXPECT_EQ(legendre(4, 5), 1);
  EXPECT_EQ(legendre(2, 5), -1);
  EXPECT_EQ(legendre(10, 5), 0);
  EXPECT_EQ(smallest_nonsquare(3), 2);
  EXPECT_EQ(smallest_nonsquare(5), 2);
  EXPECT_EQ(smallest_nonsquare(7), 3);
  EXPECT_EQ(smallest_nonsquare(17), 3);
}

TEST(Primes, Basic) {
  EXPECT_TRUE(is_prime(3));
  EXPECT_TRUE(is_prime(101));
  EXPECT_FALSE(is_prime(9));
  EXPECT_FALSE(is_prime(1));
}

TEST(ParseRational, Forms) {
  EXPECT_EQ(parse_rational("3/6"), mpq_class(1, 2));
  EXPECT_EQ(parse_rational("-7"), mpq_class(-7));
  EXPECT_EQ(parse_rational("5^-2"), mpq_class(1, 25));
  EXPECT_EQ(parse_rational("-5^3"), mpq_class(-125));
  EXPECT_THROW(parse_rational("x"), ParseError);
  EXPECT_THROW(parse_rational("1/0"), ParseError);
  EXPECT_THROW(parse_rational(""), ParseError);
}

TEST(Powers, ReferencesStayValidWhileTableGrows) {
  const mpz_class& small = zpow(7, 2);
  for (long e = 0; e < 200; ++e) (void)zpow(7, e);
  (void)zpow(11, 50);
  EXPECT_EQ(small, 49);
  EXPECT_EQ(qpow(3, -2), mpq_class(1, 9));
  EXPECT_EQ(qpow(3, 0), 1);
}
