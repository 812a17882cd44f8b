#include "rmtlab/bernoulli_moments.hpp"

#include <stdexcept>

namespace rmtlab::moments {

namespace {

void require_probability(const Rational& p) {
  if (p < 0 || p > 1) throw std::invalid_argument("probability outside [0, 1]: " + to_string(p));
}

}  // namespace

Rational centered_moment(int q, const Rational& p) {
  if (q < 1) throw std::invalid_argument("centered_moment: q must be >= 1");
  require_probability(p);
  const Rational one_minus = 1 - p;
  const auto e = static_cast<unsigned>(q - 1);
  return p * one_minus * (pow(one_minus, e) - pow(Rational(-p), e));
}

Rational raw_moment(int q, const Rational& p) {
  if (q < 1) throw std::invalid_argument("raw_moment: q must be >= 1");
  require_probability(p);
  return p;
}

bool moment_bound_holds(int q, const Rational& p) {
  if (q < 2) throw std::invalid_argument("moment_bound_holds: q must be >= 2");
  if (p <= 0 || p * 2 > 1) throw std::invalid_argument("moment_bound_holds: requires 0 < p <= 1/2");
  const Rational moment = centered_moment(q, p);
  const Rational one_minus = 1 - p;
  const Rational bound = p * pow(one_minus, static_cast<unsigned>(q)) * (1 + p / one_minus);
  return moment >= 0 && moment <= bound;
}

}  // namespace rmtlab::moments
