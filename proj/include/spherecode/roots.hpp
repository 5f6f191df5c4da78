#pragma once

#include <optional>
#include <vector>

#include "spherecode/polynomial.hpp"
#include "spherecode/rational.hpp"

namespace spherecode {

// One real root, either exact (rational) or boxed in an isolating interval
// lo < root < hi with the endpoints themselves not roots.
struct RootEntry {
  bool exact = true;
  Rational value;           // valid when exact
  Rational lo, hi;          // valid when !exact
  int multiplicity = 1;

  double approx() const {
    return exact ? value.to_double() : (lo.to_double() + hi.to_double()) / 2.0;
  }
};

struct RootList {
  std::vector<RootEntry> entries;  // strictly increasing root positions
};

struct NonpositivityVerdict {
  bool holds = false;
  std::optional<Rational> witness;  // point with p(witness) > 0 when !holds
};

// Exact decision of p(t) <= 0 for all t in [a, b]. The zero polynomial
// holds trivially. Requires a < b.
NonpositivityVerdict nonpositive_on_interval(const RationalPoly& p, const Rational& a,
                                             const Rational& b);

// All real roots of p in the closed interval [a, b] with exact
// multiplicities. Rational roots are reported exactly; irrational roots as
// isolating intervals shrunk below width 10^-30. Requires a <= b, p != 0.
RootList real_roots_with_multiplicity(const RationalPoly& p, const Rational& a,
                                      const Rational& b);

// Number of distinct real roots of p in the closed interval [a, b].
int count_distinct_roots(const RationalPoly& p, const Rational& a, const Rational& b);

// Square-free factorization: returns (factor, multiplicity) pairs with the
// factors pairwise coprime, each with positive integer leading coefficient.
std::vector<std::pair<RationalPoly, int>> squarefree_decomposition(const RationalPoly& p);

// The rational with smallest denominator (then numerator) strictly inside
// (lo, hi). Used to pin down rational roots without integer factoring.
Rational simplest_rational_between(const Rational& lo, const Rational& hi);

}  // namespace spherecode
