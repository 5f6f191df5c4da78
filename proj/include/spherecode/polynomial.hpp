#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spherecode/rational.hpp"

namespace spherecode {

// Dense univariate polynomial over an exact or floating scalar type.
// coeffs()[k] is the coefficient of t^k; trailing zeros are trimmed, so
// degree() == -1 exactly for the zero polynomial.
template <class T>
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<T> c) : c_(c) { trim(); }
  explicit Polynomial(std::vector<T> c) : c_(std::move(c)) { trim(); }

  static Polynomial constant(T v) { return Polynomial({std::move(v)}); }
  static Polynomial variable() { return Polynomial({T(0), T(1)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<T>& coeffs() const { return c_; }

  T coeff(int k) const {
    if (k < 0 || k > degree()) return T(0);
    return c_[static_cast<std::size_t>(k)];
  }
  const T& leading() const {
    if (is_zero()) throw std::logic_error("Polynomial: leading of zero");
    return c_.back();
  }

  T operator()(const T& t) const {
    T acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  double eval_double(double t) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + coeff_double(*it);
    return acc;
  }

  Polynomial derivative() const {
    if (degree() < 1) return Polynomial();
    std::vector<T> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * T(static_cast<long>(k));
    return Polynomial(std::move(d));
  }

  Polynomial operator-() const {
    std::vector<T> r(c_);
    for (auto& v : r) v = -v;
    return Polynomial(std::move(r));
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(r));
  }

  friend Polynomial operator*(const T& s, Polynomial p) {
    for (auto& v : p.c_) v = v * s;
    p.trim();
    return p;
  }
  friend Polynomial operator*(Polynomial p, const T& s) { return s * std::move(p); }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  // Euclidean division over a field scalar: *this = q*div + r with deg r < deg div.
  std::pair<Polynomial, Polynomial> divide(const Polynomial& div) const {
    if (div.is_zero()) throw std::domain_error("Polynomial: division by zero polynomial");
    Polynomial rem = *this;
    if (rem.degree() < div.degree()) return {Polynomial(), rem};
    std::vector<T> q(static_cast<std::size_t>(rem.degree() - div.degree() + 1), T(0));
    while (!rem.is_zero() && rem.degree() >= div.degree()) {
      const int shift = rem.degree() - div.degree();
      T factor = rem.leading() / div.leading();
      q[static_cast<std::size_t>(shift)] = factor;
      std::vector<T> sub(static_cast<std::size_t>(shift), T(0));
      sub.insert(sub.end(), div.c_.begin(), div.c_.end());
      for (auto& v : sub) v = v * factor;
      rem -= Polynomial(std::move(sub));
    }
    return {Polynomial(std::move(q)), rem};
  }

  // Division that must be exact; throws if a remainder is left.
  Polynomial exact_divide(const Polynomial& div) const {
    auto [q, r] = divide(div);
    if (!r.is_zero()) throw std::domain_error("Polynomial: inexact division");
    return q;
  }

  // scale * prod (t - root_i)^mult_i
  static Polynomial from_roots(const std::vector<std::pair<T, int>>& roots, const T& scale) {
    Polynomial p = constant(scale);
    for (const auto& [root, mult] : roots) {
      Polynomial lin({-root, T(1)});
      for (int k = 0; k < mult; ++k) p = p * lin;
    }
    return p;
  }

  std::string str(const std::string& var = "t") const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
      const T& v = c_[static_cast<std::size_t>(k)];
      if (v == T(0)) continue;
      if (!first) os << " + ";
      os << "(" << coeff_str(v) << ")";
      if (k >= 1) os << "*" << var;
      if (k >= 2) os << "^" << k;
      first = false;
    }
    return os.str();
  }

 private:
  static double coeff_double(const Rational& v) { return v.to_double(); }
  static double coeff_double(double v) { return v; }
  static std::string coeff_str(const Rational& v) { return v.str(); }
  static std::string coeff_str(double v) { return std::to_string(v); }

  void trim() {
    while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
  }

  std::vector<T> c_;
};

using RationalPoly = Polynomial<Rational>;

}  // namespace spherecode
