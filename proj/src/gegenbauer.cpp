#include "spherecode/gegenbauer.hpp"

#include <stdexcept>

namespace spherecode {

namespace {

void check_args(int dim, int order) {
  if (dim < 2) throw std::invalid_argument("gegenbauer: dim must be >= 2");
  if (order < 0) throw std::invalid_argument("gegenbauer: order must be >= 0");
}

}  // namespace

Rational gegenbauer_eval(int dim, int order, const Rational& t) {
  check_args(dim, order);
  if (order == 0) return Rational(1);
  Rational prev(1);  // Q_0
  Rational cur = t;  // Q_1
  for (int i = 1; i < order; ++i) {
    Rational next = (Rational(2 * i + dim - 2) * t * cur - Rational(i) * prev) /
                    Rational(i + dim - 2);
    prev = cur;
    cur = next;
  }
  return cur;
}

double gegenbauer_eval(int dim, int order, double t) {
  check_args(dim, order);
  if (order == 0) return 1.0;
  double prev = 1.0;
  double cur = t;
  for (int i = 1; i < order; ++i) {
    double next = ((2 * i + dim - 2) * t * cur - i * prev) / (i + dim - 2);
    prev = cur;
    cur = next;
  }
  return cur;
}

RationalPoly gegenbauer_monomial(int dim, int order) {
  check_args(dim, order);
  RationalPoly prev = RationalPoly::constant(Rational(1));
  if (order == 0) return prev;
  RationalPoly cur = RationalPoly::variable();
  const RationalPoly t = RationalPoly::variable();
  for (int i = 1; i < order; ++i) {
    RationalPoly next =
        (Rational(2 * i + dim - 2) * (t * cur) - Rational(i) * prev) *
        (Rational(1) / Rational(i + dim - 2));
    prev = cur;
    cur = next;
  }
  return cur;
}

GegenbauerExpansion expand(int dim, const RationalPoly& p) {
  if (dim < 2) throw std::invalid_argument("expand: dim must be >= 2");
  GegenbauerExpansion e;
  e.dim = dim;
  if (p.is_zero()) return e;

  const int k = p.degree();
  std::vector<RationalPoly> basis(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) basis[static_cast<std::size_t>(i)] = gegenbauer_monomial(dim, i);

  e.coeffs.assign(static_cast<std::size_t>(k) + 1, Rational(0));
  RationalPoly rest = p;
  for (int i = k; i >= 0; --i) {
    if (rest.degree() < i) continue;
    Rational fi = rest.coeff(i) / basis[static_cast<std::size_t>(i)].leading();
    e.coeffs[static_cast<std::size_t>(i)] = fi;
    rest -= fi * basis[static_cast<std::size_t>(i)];
  }
  if (!rest.is_zero()) throw std::logic_error("expand: back-substitution left a remainder");
  return e;
}

RationalPoly reconstruct(const GegenbauerExpansion& e) {
  RationalPoly p;
  for (std::size_t i = 0; i < e.coeffs.size(); ++i) {
    if (e.coeffs[i] == Rational(0)) continue;
    p += e.coeffs[i] * gegenbauer_monomial(e.dim, static_cast<int>(i));
  }
  return p;
}

}  // namespace spherecode
