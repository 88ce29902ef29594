#include "doctest.h"

#include <limits>

#include "qdrg/quadratic.hpp"
#include "qdrg/rational.hpp"

using qdrg::Rational;
using qdrg::RealQuadratic;

TEST_CASE("rational lowest terms, positive denominator") {
  const Rational r(6, -4);
  CHECK(r.small_num() == -3);
  CHECK(r.small_den() == 2);
  CHECK(r.to_fraction_string() == "-3/2");
  CHECK(Rational(3).to_fraction_string() == "3/1");
  CHECK(Rational::parse("10/4") == Rational(5, 2));
  CHECK(Rational::parse("-7") == Rational(-7));
}

TEST_CASE("rational overflow promotes and demotes") {
  const Rational big = Rational(std::numeric_limits<long long>::max());
  const Rational sq = big * big;
  CHECK_FALSE(sq.is_small());
  CHECK(sq.to_mpq() == mpq_class(mpz_class(std::numeric_limits<long>::max())) *
                           mpq_class(mpz_class(std::numeric_limits<long>::max())));
  const Rational back = sq / big;
  CHECK(back.is_small());
  CHECK(back == big);
  CHECK(sq > big);
  CHECK(-sq < Rational(0));
}

TEST_CASE("rational arithmetic matches gmp") {
  for (long a = -7; a <= 7; ++a) {
    for (long b = 1; b <= 5; ++b) {
      for (long c = -4; c <= 4; ++c) {
        const Rational x(a, b), y(c, b + 1);
        const mpq_class qx(a, b), qy(c, b + 1);
        mpq_class sum = qx + qy, prod = qx * qy;
        sum.canonicalize();
        prod.canonicalize();
        CHECK((x + y).to_mpq() == sum);
        CHECK((x * y).to_mpq() == prod);
        CHECK(((x < y) == (qx < qy)));
        if (c != 0) {
          mpq_class quo = qx / qy;
          quo.canonicalize();
          CHECK((x / y).to_mpq() == quo);
        }
      }
    }
  }
}

TEST_CASE("real quadratic field arithmetic") {
  const RealQuadratic r2 = RealQuadratic::sqrt_of(2);
  CHECK(r2 * r2 == RealQuadratic(2));
  CHECK((r2 * r2).is_rational());
  const RealQuadratic x(Rational(1), Rational(1), 2);  // 1 + sqrt2
  const RealQuadratic inv = RealQuadratic(1) / x;      // sqrt2 - 1
  CHECK(inv == RealQuadratic(Rational(-1), Rational(1), 2));
  CHECK(x.sign() == 1);
  CHECK(RealQuadratic(Rational(1), Rational(-1), 2).sign() == -1);
  CHECK(RealQuadratic(Rational(3), Rational(-2), 2).sign() == 1);
  CHECK(r2 > RealQuadratic(Rational(141, 100)));
  CHECK(r2 < RealQuadratic(Rational(142, 100)));
  CHECK_THROWS_AS(r2 + RealQuadratic::sqrt_of(3), std::domain_error);
  CHECK_THROWS(RealQuadratic(Rational(0), Rational(1), 4));
}

TEST_CASE("real quadratic json round trip") {
  const RealQuadratic x(Rational(-1, 2), Rational(-3, 4), 5);
  CHECK(x.to_json_string() == "-1/2-3/4*sqrt(5)");
  CHECK(RealQuadratic::parse(x.to_json_string()) == x);
  CHECK(RealQuadratic::parse("0/1+1/1*sqrt(2)") == RealQuadratic::sqrt_of(2));
  CHECK(RealQuadratic::parse("7/3") == RealQuadratic(Rational(7, 3)));
  CHECK(qdrg::squarefree_part(72) == 2);
}
