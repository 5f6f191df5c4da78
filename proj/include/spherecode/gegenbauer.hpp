#pragma once

#include <vector>

#include "spherecode/polynomial.hpp"
#include "spherecode/rational.hpp"

namespace spherecode {

// Dimension-d Gegenbauer polynomials normalized to Q_i(1) = 1, by the
// three-term recursion Q_{i+1} = ((2i+d-2) t Q_i - i Q_{i-1}) / (i+d-2)
// seeded with Q_0 = 1, Q_1 = t and applied for every i >= 1.
Rational gegenbauer_eval(int dim, int order, const Rational& t);
double gegenbauer_eval(int dim, int order, double t);

// Power-basis coefficients of Q_i; degree is exactly i.
RationalPoly gegenbauer_monomial(int dim, int order);

// A polynomial written as sum_i coeffs[i] * Q_i for a fixed dimension.
struct GegenbauerExpansion {
  int dim = 2;
  std::vector<Rational> coeffs;  // index = Gegenbauer order

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

// Exact change of basis into {Q_i}; the transform is triangular, so the
// coefficients come from back-substitution starting at the top degree.
GegenbauerExpansion expand(int dim, const RationalPoly& p);

// Inverse of expand: sum of coeffs[i] * Q_i in the power basis.
RationalPoly reconstruct(const GegenbauerExpansion& e);

}  // namespace spherecode
