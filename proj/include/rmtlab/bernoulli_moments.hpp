// Moments of a Bernoulli(p) entry a and of its centered shift a - p.
#pragma once

#include "rmtlab/exact.hpp"

namespace rmtlab::moments {

/// E[(a - p)^q] = p(1-p) [(1-p)^{q-1} - (-p)^{q-1}]. Zero for q == 1.
/// Requires q >= 1 and 0 <= p <= 1 (std::invalid_argument otherwise).
Rational centered_moment(int q, const Rational& p);

/// E[a^q] = p, since a takes values in {0, 1}.
Rational raw_moment(int q, const Rational& p);

/// 0 <= E[(a-p)^q] <= p(1-p)^q (1 + p/(1-p)), checked exactly.
/// Requires q >= 2 and 0 < p <= 1/2.
bool moment_bound_holds(int q, const Rational& p);

}  // namespace rmtlab::moments
