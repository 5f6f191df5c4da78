#include "spherecode/extremum.hpp"

#include <optional>
#include <stdexcept>

#include "spherecode/roots.hpp"

namespace spherecode {

namespace {

struct QInterval {
  Rational lo, hi;
};

QInterval iv_point(const Rational& v) { return {v, v}; }

QInterval iv_mul(const QInterval& a, const QInterval& b) {
  Rational p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return {min(min(p1, p2), min(p3, p4)), max(max(p1, p2), max(p3, p4))};
}

QInterval iv_div(const QInterval& n, const QInterval& d) {
  if (d.lo.sign() <= 0 && d.hi.sign() >= 0)
    throw std::domain_error("interval division through zero");
  QInterval inv{Rational(1) / d.hi, Rational(1) / d.lo};
  return iv_mul(n, inv);
}

QInterval iv_abs(const QInterval& a) {
  if (a.lo.sign() >= 0) return a;
  if (a.hi.sign() <= 0) return {-a.hi, -a.lo};
  return {Rational(0), max(-a.lo, a.hi)};
}

QInterval eval_interval(const RationalPoly& p, const QInterval& t) {
  QInterval acc{Rational(0), Rational(0)};
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) {
    acc = iv_mul(acc, t);
    acc.lo += *it;
    acc.hi += *it;
  }
  return acc;
}

// Collects exact values and interval enclosures of candidate points and
// folds them into a certified max or min.
class ExtremumFold {
 public:
  explicit ExtremumFold(bool maximize) : maximize_(maximize) {}

  void add_exact(const Rational& v) {
    if (!best_exact_ || better(v, *best_exact_)) best_exact_ = v;
  }

  void add_interval(const QInterval& v) {
    const Rational& bound = maximize_ ? v.hi : v.lo;       // certified side
    const Rational& attained = maximize_ ? v.lo : v.hi;    // definitely reached
    if (!best_bound_ || better(bound, *best_bound_)) best_bound_ = bound;
    if (!best_attained_ || better(attained, *best_attained_)) best_attained_ = attained;
  }

  Extremum result() const {
    if (!best_exact_ && !best_bound_)
      throw std::logic_error("extremum fold: no candidates");
    Extremum e;
    if (!best_bound_) {
      e.value = *best_exact_;
      e.exact = true;
      return e;
    }
    if (best_exact_ && !better(*best_bound_, *best_exact_)) {
      // every interval candidate is dominated by the best exact one
      e.value = *best_exact_;
      e.exact = true;
      return e;
    }
    e.value = *best_bound_;
    e.exact = false;
    return e;
  }

 private:
  bool better(const Rational& x, const Rational& y) const {
    return maximize_ ? x > y : x < y;
  }
  bool maximize_;
  std::optional<Rational> best_exact_;
  std::optional<Rational> best_bound_;
  std::optional<Rational> best_attained_;
};

}  // namespace

Extremum polynomial_max(const RationalPoly& p, const Rational& a, const Rational& b) {
  if (b < a) throw std::invalid_argument("polynomial_max: a > b");
  ExtremumFold fold(/*maximize=*/true);
  fold.add_exact(p(a));
  if (a != b) fold.add_exact(p(b));
  RationalPoly dp = p.derivative();
  if (!dp.is_zero() && a != b) {
    for (const auto& c : real_roots_with_multiplicity(dp, a, b).entries) {
      if (c.exact)
        fold.add_exact(p(c.value));
      else
        fold.add_interval(eval_interval(p, {c.lo, c.hi}));
    }
  }
  return fold.result();
}

Extremum slope_quotient_max(const RationalPoly& f, const Rational& s, const Rational& b) {
  if (!(s < b)) throw std::invalid_argument("slope_quotient_max: requires s < b");
  const Rational fs = f(s);
  if (fs.is_zero()) {
    RationalPoly g = f.exact_divide(RationalPoly({-s, Rational(1)}));
    return polynomial_max(g, s, b);
  }
  if (fs.sign() > 0)
    throw std::domain_error("slope_quotient_max: f(s) > 0 makes the quotient unbounded");
  const RationalPoly den({-s, Rational(1)});
  ExtremumFold fold(/*maximize=*/true);
  fold.add_exact(f(b) / (b - s));
  // critical points of f/(t-s): roots of f'(t)(t-s) - f(t)
  RationalPoly crit = f.derivative() * den - f;
  if (!crit.is_zero()) {
    for (const auto& c : real_roots_with_multiplicity(crit, s, b).entries) {
      if (c.exact) {
        if (c.value == s) continue;  // excluded endpoint (limit is -inf)
        fold.add_exact(f(c.value) / (c.value - s));
      } else {
        QInterval box{c.lo, c.hi};
        if (!(s < box.lo)) continue;  // abuts the excluded endpoint; f < 0 there
        fold.add_interval(iv_div(eval_interval(f, box), eval_interval(den, box)));
      }
    }
  }
  return fold.result();
}

Extremum minimax_root_quotients(const RationalPoly& f,
                                const std::vector<std::pair<Rational, int>>& roots,
                                const Rational& a, const Rational& b) {
  if (roots.empty()) throw std::invalid_argument("minimax_root_quotients: no roots");
  if (!(a < b)) throw std::invalid_argument("minimax_root_quotients: requires a < b");
  std::vector<RationalPoly> quot;
  quot.reserve(roots.size());
  for (const auto& [x, m] : roots) {
    RationalPoly q = f;
    const RationalPoly lin({-x, Rational(1)});
    for (int k = 0; k < m; ++k) q = q.exact_divide(lin);
    quot.push_back(std::move(q));
  }

  auto h_exact = [&quot](const Rational& t) {
    Rational best(0);
    for (const auto& q : quot) {
      Rational v = abs(q(t));
      if (v > best) best = v;
    }
    return best;
  };
  auto h_interval = [&quot](const QInterval& t) {
    QInterval best{Rational(0), Rational(0)};
    bool first = true;
    for (const auto& q : quot) {
      QInterval v = iv_abs(eval_interval(q, t));
      if (first) {
        best = v;
        first = false;
      } else {  // interval max
        best.lo = max(best.lo, v.lo);
        best.hi = max(best.hi, v.hi);
      }
    }
    return best;
  };

  ExtremumFold fold(/*maximize=*/false);
  auto add_candidate_roots = [&](const RationalPoly& p) {
    if (p.is_zero()) return;
    if (p.degree() < 1) return;
    for (const auto& c : real_roots_with_multiplicity(p, a, b).entries) {
      if (c.exact)
        fold.add_exact(h_exact(c.value));
      else
        fold.add_interval(h_interval({c.lo, c.hi}));
    }
  };

  fold.add_exact(h_exact(a));
  fold.add_exact(h_exact(b));
  for (std::size_t j = 0; j < quot.size(); ++j) {
    add_candidate_roots(quot[j]);               // kinks of |p_j|
    add_candidate_roots(quot[j].derivative());  // interior critical points
    for (std::size_t i = 0; i < j; ++i) {
      add_candidate_roots(quot[i] - quot[j]);   // branch crossings
      add_candidate_roots(quot[i] + quot[j]);
    }
  }
  return fold.result();
}

}  // namespace spherecode
