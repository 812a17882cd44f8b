#include "doctest.h"

#include "rmtlab/bernoulli_moments.hpp"

using namespace rmtlab;
using namespace rmtlab::moments;

TEST_CASE("centered moments") {
  CHECK(centered_moment(1, Rational(1, 3)) == 0);
  CHECK(centered_moment(1, Rational(1, 10)) == 0);
  CHECK(centered_moment(3, Rational(1, 2)) == 0);
  CHECK(centered_moment(3, Rational(1, 4)) == Rational(3, 32));
  CHECK(centered_moment(2, Rational(1, 5)) == Rational(4, 25));
  CHECK_THROWS(centered_moment(0, Rational(1, 2)));
  CHECK_THROWS(centered_moment(2, Rational(3, 2)));
}

TEST_CASE("centered moment equals the two-point expectation") {
  for (int den = 2; den <= 10; ++den)
    for (int num = 0; num <= den; ++num) {
      const Rational p(num, den);
      for (int q = 1; q <= 12; ++q) {
        const Rational direct =
            p * pow(Rational(1 - p), static_cast<unsigned>(q)) + (1 - p) * pow(Rational(-p), static_cast<unsigned>(q));
        CHECK(centered_moment(q, p) == direct);
      }
    }
}

TEST_CASE("raw moments are idempotent") {
  CHECK(raw_moment(1, Rational(1, 3)) == Rational(1, 3));
  CHECK(raw_moment(7, Rational(1, 3)) == Rational(1, 3));
  CHECK(raw_moment(2, Rational(0)) == 0);
}

TEST_CASE("moment bound and nonnegativity for p <= 1/2") {
  CHECK(moment_bound_holds(2, Rational(1, 2)));
  CHECK(moment_bound_holds(5, Rational(1, 4)));
  CHECK(moment_bound_holds(2, Rational(1, 10)));
  for (int k = 1; k <= 10; ++k) {
    const Rational p(k, 20);
    for (int q = 2; q <= 12; ++q) {
      CHECK(centered_moment(q, p) >= 0);
      CHECK(moment_bound_holds(q, p));
    }
  }
  CHECK_THROWS(moment_bound_holds(2, Rational(3, 5)));
  CHECK_THROWS(moment_bound_holds(1, Rational(1, 4)));
}
