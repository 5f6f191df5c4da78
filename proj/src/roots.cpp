#include "spherecode/roots.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace spherecode {

namespace {

// Sturm-chain internals run on primitive integer polynomials: pseudo
// remainders with content stripping keep coefficient growth polynomial.
using ZPoly = std::vector<mpz_class>;  // index = power, trailing zeros trimmed

void zp_trim(ZPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int zp_degree(const ZPoly& p) { return static_cast<int>(p.size()) - 1; }

mpz_class zp_content(const ZPoly& p) {
  mpz_class g = 0;
  for (const auto& c : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;  // 0 only for the zero polynomial
}

void zp_make_primitive(ZPoly& p) {
  mpz_class g = zp_content(p);
  if (g == 0 || g == 1) return;
  for (auto& c : p) c /= g;
}

ZPoly zp_derivative(const ZPoly& p) {
  if (p.size() <= 1) return {};
  ZPoly d(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = p[k] * static_cast<long>(k);
  zp_trim(d);
  return d;
}

ZPoly to_zpoly(const RationalPoly& p) {
  ZPoly z;
  if (p.is_zero()) return z;
  mpz_class lcm = 1;
  for (const auto& c : p.coeffs())
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.den().get_mpz_t());
  z.resize(p.coeffs().size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    const Rational& c = p.coeffs()[k];
    z[k] = c.num() * (lcm / c.den());
  }
  zp_make_primitive(z);
  return z;
}

RationalPoly to_rational_poly(const ZPoly& z) {
  std::vector<Rational> c(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) c[k] = Rational(z[k]);
  return RationalPoly(std::move(c));
}

int zp_sign_at(const ZPoly& p, const Rational& x) {
  mpq_class acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x.raw() + mpq_class(*it);
  return sgn(acc);
}

// Pseudo remainder scaled by a positive power of the leading coefficient,
// so the sign matches the true remainder of f by g; content-stripped.
ZPoly zp_pseudo_rem(const ZPoly& f, const ZPoly& g) {
  if (g.empty()) throw std::domain_error("zp_pseudo_rem: zero divisor");
  ZPoly r = f;
  zp_trim(r);
  const int dg = zp_degree(g);
  const mpz_class& lg = g.back();
  int e = zp_degree(r) - dg + 1;
  if (e < 0) e = 0;
  if (sgn(lg) < 0 && (e % 2) != 0) ++e;  // keep the overall multiplier positive
  mpz_class mult;
  mpz_pow_ui(mult.get_mpz_t(), lg.get_mpz_t(), static_cast<unsigned long>(e));
  for (auto& c : r) c *= mult;
  while (zp_degree(r) >= dg && !r.empty()) {
    const int shift = zp_degree(r) - dg;
    mpz_class q = r.back() / lg;  // exact by the pseudo-division invariant
    for (int k = 0; k <= dg; ++k)
      r[static_cast<std::size_t>(k + shift)] -= q * g[static_cast<std::size_t>(k)];
    if (!r.empty() && r.back() != 0) {
      // leading term did not cancel exactly; divide via full scaling step
      // (cannot happen when mult includes lg^(deg gap + 1))
      throw std::logic_error("zp_pseudo_rem: non-exact cancellation");
    }
    zp_trim(r);
  }
  zp_make_primitive(r);
  return r;
}

ZPoly zp_gcd(ZPoly a, ZPoly b) {
  zp_trim(a);
  zp_trim(b);
  zp_make_primitive(a);
  zp_make_primitive(b);
  while (!b.empty()) {
    ZPoly r = zp_pseudo_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty() && sgn(a.back()) < 0)
    for (auto& c : a) c = -c;
  return a;
}

struct SturmChain {
  std::vector<ZPoly> seq;

  int variations_at(const Rational& x) const {
    int count = 0, last = 0;
    for (const auto& p : seq) {
      int s = zp_sign_at(p, x);
      if (s == 0) continue;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  }

  // Distinct roots in the half-open interval (a, b].
  int roots_in(const Rational& a, const Rational& b) const {
    return variations_at(a) - variations_at(b);
  }
};

SturmChain sturm_chain(const ZPoly& p) {
  SturmChain chain;
  ZPoly s0 = p;
  zp_make_primitive(s0);
  chain.seq.push_back(s0);
  ZPoly s1 = zp_derivative(s0);
  while (!s1.empty()) {
    chain.seq.push_back(s1);
    ZPoly r = zp_pseudo_rem(chain.seq[chain.seq.size() - 2], s1);
    for (auto& c : r) c = -c;
    s1 = std::move(r);
  }
  return chain;
}

struct IsolatedRoot {
  bool exact;
  Rational value;   // when exact
  Rational lo, hi;  // when !exact; open interval, sign change across it
};

const Rational& root_width_target() {
  static const Rational w = Rational(1, 1000000000L) * Rational(1, 1000000000L) *
                            Rational(1, 1000000000L) * Rational(1, 1000L);  // 10^-30
  return w;
}

// Isolates all roots of a square-free q in the open interval (a, b);
// q(a) != 0 and q(b) != 0 must hold on entry.
std::vector<IsolatedRoot> isolate_squarefree_open(ZPoly q, Rational a, Rational b) {
  std::vector<IsolatedRoot> out;
restart:
  if (zp_degree(q) < 1) return out;
  SturmChain chain = sturm_chain(q);
  struct Seg {
    Rational lo, hi;
    int count;
  };
  std::vector<Seg> work;
  {
    // (a, b] count minus a possible root at b (excluded from the open interval)
    int n = chain.roots_in(a, b);
    if (zp_sign_at(q, b) == 0)
      throw std::logic_error("isolate_squarefree_open: root at right endpoint");
    if (n > 0) work.push_back({a, b, n});
  }
  std::vector<Seg> isolated;
  while (!work.empty()) {
    Seg s = work.back();
    work.pop_back();
    if (s.count == 1) {
      isolated.push_back(s);
      continue;
    }
    Rational mid = (s.lo + s.hi) / Rational(2);
    if (zp_sign_at(q, mid) == 0) {
      // Exact rational root discovered: record, deflate, start over.
      out.push_back({true, mid, Rational(0), Rational(0)});
      RationalPoly qq = to_rational_poly(q);
      RationalPoly lin({-mid, Rational(1)});
      q = to_zpoly(qq.exact_divide(lin));
      goto restart;
    }
    int left = chain.roots_in(s.lo, mid);
    int right = s.count - left;
    if (left > 0) work.push_back({s.lo, mid, left});
    if (right > 0) work.push_back({mid, s.hi, right});
  }
  // Shrink each isolating interval, then try to recognize a rational root.
  for (auto& s : isolated) {
    while (s.hi - s.lo > root_width_target()) {
      Rational mid = (s.lo + s.hi) / Rational(2);
      int sm = zp_sign_at(q, mid);
      if (sm == 0) {
        out.push_back({true, mid, Rational(0), Rational(0)});
        goto next_isolated;
      }
      if (sm == zp_sign_at(q, s.lo))
        s.lo = mid;
      else
        s.hi = mid;
    }
    {
      Rational cand = simplest_rational_between(s.lo, s.hi);
      if (zp_sign_at(q, cand) == 0)
        out.push_back({true, cand, Rational(0), Rational(0)});
      else
        out.push_back({false, Rational(0), s.lo, s.hi});
    }
  next_isolated:;
  }
  return out;
}

// Roots of a square-free factor in the closed [a, b]: endpoint roots are
// split off exactly and the factor deflated before open-interval isolation.
std::vector<IsolatedRoot> isolate_squarefree_closed(const RationalPoly& f, const Rational& a,
                                                    const Rational& b) {
  std::vector<IsolatedRoot> out;
  RationalPoly g = f;
  for (const Rational& end : {a, b}) {
    if (!g.is_zero() && g.degree() >= 1 && g(end) == Rational(0)) {
      out.push_back({true, end, Rational(0), Rational(0)});
      g = g.exact_divide(RationalPoly({-end, Rational(1)}));
    } else if (g.degree() == 0) {
      break;
    }
  }
  if (a == b) return out;
  if (g.degree() >= 1) {
    auto inner = isolate_squarefree_open(to_zpoly(g), a, b);
    out.insert(out.end(), inner.begin(), inner.end());
  }
  return out;
}

Rational entry_position(const RootEntry& e) { return e.exact ? e.value : e.lo; }

struct QInterval {
  Rational lo, hi;
};

QInterval iv_add(const QInterval& a, const Rational& c) { return {a.lo + c, a.hi + c}; }

QInterval iv_mul(const QInterval& a, const QInterval& b) {
  Rational p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return {min(min(p1, p2), min(p3, p4)), max(max(p1, p2), max(p3, p4))};
}

// Rigorous range enclosure of p over [t.lo, t.hi] by interval Horner.
QInterval eval_interval(const RationalPoly& p, const QInterval& t) {
  QInterval acc{Rational(0), Rational(0)};
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it)
    acc = iv_add(iv_mul(acc, t), *it);
  return acc;
}

}  // namespace

Rational simplest_rational_between(const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) throw std::invalid_argument("simplest_rational_between: empty interval");
  if (lo.sign() < 0 && hi.sign() > 0) return Rational(0);
  if (hi.sign() <= 0) return -simplest_rational_between(-hi, -lo);
  // 0 <= lo < hi. Walk the Stern-Brocot tree via the continued fraction of lo.
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), lo.num().get_mpz_t(), lo.den().get_mpz_t());
  Rational n(fl + 1);
  if (n < hi) return n;
  Rational base(fl);
  Rational inner = simplest_rational_between(Rational(1) / (hi - base), Rational(1) / (lo - base));
  return base + Rational(1) / inner;
}

std::vector<std::pair<RationalPoly, int>> squarefree_decomposition(const RationalPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("squarefree_decomposition: zero polynomial");
  std::vector<std::pair<RationalPoly, int>> out;
  if (p.degree() == 0) return out;

  auto poly_gcd = [](const RationalPoly& x, const RationalPoly& y) {
    return to_rational_poly(zp_gcd(to_zpoly(x), to_zpoly(y)));
  };

  // Yun's algorithm over characteristic zero.
  RationalPoly d = p.derivative();
  RationalPoly g = poly_gcd(p, d);
  if (g.degree() == 0) {
    out.emplace_back(to_rational_poly(to_zpoly(p)), 1);
    return out;
  }
  RationalPoly b = p.exact_divide(g);
  RationalPoly c = d.exact_divide(g);
  RationalPoly w = c - b.derivative();
  int mult = 1;
  while (b.degree() >= 1) {
    RationalPoly a = poly_gcd(b, w);
    if (a.degree() >= 1) out.emplace_back(a, mult);
    b = b.exact_divide(a);
    c = w.exact_divide(a);
    w = c - b.derivative();
    ++mult;
  }
  return out;
}

int count_distinct_roots(const RationalPoly& p, const Rational& a, const Rational& b) {
  if (p.is_zero()) throw std::invalid_argument("count_distinct_roots: zero polynomial");
  if (b < a) throw std::invalid_argument("count_distinct_roots: a > b");
  RootList rl = real_roots_with_multiplicity(p, a, b);
  return static_cast<int>(rl.entries.size());
}

RootList real_roots_with_multiplicity(const RationalPoly& p, const Rational& a,
                                      const Rational& b) {
  if (p.is_zero()) throw std::invalid_argument("real_roots: zero polynomial");
  if (b < a) throw std::invalid_argument("real_roots: a > b");
  RootList out;
  auto factors = squarefree_decomposition(p);
  for (const auto& [factor, mult] : factors) {
    for (const auto& iso : isolate_squarefree_closed(factor, a, b)) {
      RootEntry e;
      e.exact = iso.exact;
      e.value = iso.value;
      e.lo = iso.lo;
      e.hi = iso.hi;
      e.multiplicity = mult;
      out.entries.push_back(std::move(e));
    }
  }
  // Roots of distinct Yun factors are distinct; overlap can only be an
  // isolating interval straddling another entry. Bisect such intervals away.
  auto refine_against = [&factors](RootEntry& e, const Rational& point) {
    const RationalPoly* owner = nullptr;
    for (const auto& [factor, mult] : factors)
      if (mult == e.multiplicity) owner = &factor;
    while (e.lo < point && point < e.hi) {
      Rational mid = (e.lo + e.hi) / Rational(2);
      if (mid == point) mid = (e.lo + mid) / Rational(2);
      ZPoly zq = to_zpoly(*owner);
      if (zp_sign_at(zq, mid) == zp_sign_at(zq, e.lo))
        e.lo = mid;
      else
        e.hi = mid;
    }
  };
  for (std::size_t i = 0; i < out.entries.size(); ++i)
    for (std::size_t j = 0; j < out.entries.size(); ++j) {
      if (i == j) continue;
      RootEntry& e = out.entries[i];
      const RootEntry& o = out.entries[j];
      if (e.exact) continue;
      if (o.exact) {
        refine_against(e, o.value);
      } else if (!(e.hi <= o.lo || o.hi <= e.lo)) {
        refine_against(e, (o.lo + o.hi) / Rational(2));
      }
    }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const RootEntry& x, const RootEntry& y) {
              return entry_position(x) < entry_position(y);
            });
  return out;
}

NonpositivityVerdict nonpositive_on_interval(const RationalPoly& p, const Rational& a,
                                             const Rational& b) {
  if (!(a < b)) throw std::invalid_argument("nonpositive_on_interval: requires a < b");
  NonpositivityVerdict v;
  if (p.is_zero()) {
    v.holds = true;
    return v;
  }
  if (p(a).sign() > 0) {
    v.holds = false;
    v.witness = a;
    return v;
  }
  if (p(b).sign() > 0) {
    v.holds = false;
    v.witness = b;
    return v;
  }
  RationalPoly dp = p.derivative();
  if (dp.is_zero()) {  // constant polynomial, already checked at endpoints
    v.holds = true;
    return v;
  }
  ZPoly zp = to_zpoly(p);
  RootList crits = real_roots_with_multiplicity(dp, a, b);
  for (const auto& c : crits.entries) {
    if (c.exact) {
      if (p(c.value).sign() > 0) {
        v.holds = false;
        v.witness = c.value;
        return v;
      }
      continue;
    }
    // Irrational critical point boxed in (lo, hi). Either p shares the root
    // (value 0 there) or interval evaluation decides the sign of p at it
    // after enough shrinking.
    Rational lo = c.lo, hi = c.hi;
    ZPoly zshared = zp_gcd(zp, to_zpoly(dp));
    if (zp_degree(zshared) >= 1) {
      SturmChain sc = sturm_chain(zshared);
      if (sc.roots_in(lo, hi) > 0) continue;  // p vanishes at the critical point
    }
    // The box holds exactly one root of dp; bisect on the dp chain to keep it.
    SturmChain dpc = sturm_chain(to_zpoly(dp));
    while (true) {
      QInterval range = eval_interval(p, {lo, hi});
      if (range.hi.sign() < 0) break;  // p < 0 throughout the box
      if (range.lo.sign() > 0) {
        v.holds = false;
        v.witness = (lo + hi) / Rational(2);
        return v;
      }
      Rational mid = (lo + hi) / Rational(2);
      if (dpc.roots_in(lo, mid) > 0)
        hi = mid;
      else
        lo = mid;
    }
  }
  v.holds = true;
  return v;
}

}  // namespace spherecode
