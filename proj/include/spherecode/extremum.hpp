#pragma once

#include <utility>
#include <vector>

#include "spherecode/polynomial.hpp"
#include "spherecode/rational.hpp"

namespace spherecode {

// Certified extremum: for a maximum, value >= true max; for a minimum,
// value <= true min. exact means the bound is attained and equal.
struct Extremum {
  Rational value;
  bool exact = true;
};

// max of p over [a, b] by critical-point analysis; irrational critical
// points are handled by interval evaluation on their isolating boxes.
Extremum polynomial_max(const RationalPoly& p, const Rational& a, const Rational& b);

// max of f(t)/(t - s) over (s, b]. When f(s) = 0 the quotient is a
// polynomial and the maximum is over [s, b]; otherwise f(s) < 0 is required
// (the one-sided limit at s dives to -infinity and cannot be the supremum).
Extremum slope_quotient_max(const RationalPoly& f, const Rational& s, const Rational& b);

// min over [a, b] of max_j |f(t) / (t - x_j)^{m_j}| for rational roots x_j
// of f with multiplicities m_j. Candidates: endpoints, zeros and critical
// points of each quotient, and branch crossings.
Extremum minimax_root_quotients(const RationalPoly& f,
                                const std::vector<std::pair<Rational, int>>& roots,
                                const Rational& a, const Rational& b);

}  // namespace spherecode
