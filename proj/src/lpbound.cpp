#include "spherecode/lpbound.hpp"

#include <algorithm>
#include <cmath>

#include "spherecode/extremum.hpp"

namespace spherecode {

namespace {

RationalPoly certificate_poly(const GegenbauerExpansion& e) { return reconstruct(e); }

std::vector<std::pair<Rational, int>> rational_roots_or_throw(const RootList& roots) {
  std::vector<std::pair<Rational, int>> out;
  for (const auto& r : roots.entries) {
    if (!r.exact)
      throw std::domain_error(
          "weak_stability_constants: certificate has an irrational root; the exact M' engine "
          "requires rational roots");
    out.emplace_back(r.value, r.multiplicity);
  }
  return out;
}

}  // namespace

Certificate verify_certificate(int dim, const GegenbauerExpansion& e, const Rational& s) {
  if (e.degree() < 1) throw CertificateError("certificate degree k must be >= 1", "");
  if (e.dim != dim) throw CertificateError("expansion dimension does not match", "");
  if (!(e.coeffs[0] > Rational(0))) throw CertificateError("f_0 must be positive", "");
  for (std::size_t i = 1; i < e.coeffs.size(); ++i)
    if (e.coeffs[i] < Rational(0))
      throw CertificateError("f_" + std::to_string(i) + " must be nonnegative", "");
  Certificate cert;
  cert.dim = dim;
  cert.s = s;
  cert.expansion = e;
  cert.poly = certificate_poly(e);
  auto verdict = nonpositive_on_interval(cert.poly, Rational(-1), s);
  if (!verdict.holds)
    throw CertificateError("f must be nonpositive on [-1, s]",
                           verdict.witness ? verdict.witness->str() : "");
  cert.roots = real_roots_with_multiplicity(cert.poly, Rational(-1), s);
  cert.max_multiplicity = 1;
  for (const auto& r : cert.roots.entries)
    cert.max_multiplicity = std::max(cert.max_multiplicity, r.multiplicity);
  cert.bound = cert.poly(Rational(1)) / e.coeffs[0];
  return cert;
}

Certificate e8_certificate() {
  RationalPoly f = RationalPoly::from_roots(
      {{Rational(-1), 1}, {Rational(-1, 2), 2}, {Rational(0), 2}, {Rational(1, 2), 1}},
      Rational(320, 3));
  return verify_certificate(8, expand(8, f), Rational(1, 2));
}

Certificate leech_certificate() {
  RationalPoly f = RationalPoly::from_roots({{Rational(-1), 1},
                                             {Rational(-1, 2), 2},
                                             {Rational(-1, 4), 2},
                                             {Rational(0), 2},
                                             {Rational(1, 4), 2},
                                             {Rational(1, 2), 1}},
                                            Rational(1490944, 15));
  return verify_certificate(24, expand(24, f), Rational(1, 2));
}

Certificate cross_polytope_certificate(int d) {
  // f(t) = t(t+1) = 1/d Q_0 + Q_1 + (d-1)/d Q_2, tight at N = 2d.
  RationalPoly f = RationalPoly::from_roots({{Rational(-1), 1}, {Rational(0), 1}}, Rational(1));
  return verify_certificate(d, expand(d, f), Rational(0));
}

Rational lp_slack_exact(const SphericalCode& c, const GegenbauerExpansion& e, int threads) {
  if (!c.exact) throw std::logic_error("lp_slack_exact: code has no exact model");
  if (c.dim != e.dim) throw std::invalid_argument("lp_slack: dimension mismatch");
  const long long n = c.size();
  const long long n0 = c.exact->norm_sq;
  RationalPoly f = certificate_poly(e);
  auto hist = exact_dot_histogram(c, threads);
  Rational offdiag(0);
  for (long long k = -n0; k <= n0; ++k) {
    long long cnt = hist[static_cast<std::size_t>(k + n0)];
    if (cnt == 0) continue;
    offdiag += Rational(cnt) * f(Rational(k, n0));
  }
  return Rational(n) * f(Rational(1)) + offdiag - Rational(n) * Rational(n) * e.coeffs[0];
}

double lp_slack(const SphericalCode& c, const GegenbauerExpansion& e) {
  if (c.dim != e.dim) throw std::invalid_argument("lp_slack: dimension mismatch");
  const long n = c.size();
  RationalPoly f = certificate_poly(e);
  double offdiag = 0.0;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      if (i == j) continue;
      offdiag += f.eval_double(c.points.row(i).dot(c.points.row(j)));
    }
  return n * f.eval_double(1.0) + offdiag -
         static_cast<double>(n) * static_cast<double>(n) * e.coeffs[0].to_double();
}

std::vector<Rational> component_sums_exact(const SphericalCode& c, const GegenbauerExpansion& e,
                                           int threads) {
  if (!c.exact) throw std::logic_error("component_sums_exact: code has no exact model");
  if (c.dim != e.dim) throw std::invalid_argument("component_sums: dimension mismatch");
  const long long n = c.size();
  const long long n0 = c.exact->norm_sq;
  auto hist = exact_dot_histogram(c, threads);
  std::vector<Rational> sums;
  for (int i = 1; i <= e.degree(); ++i) {
    Rational s = Rational(n);  // diagonal contributes N * Q_i(1) = N
    for (long long k = -n0; k <= n0; ++k) {
      long long cnt = hist[static_cast<std::size_t>(k + n0)];
      if (cnt == 0) continue;
      s += Rational(cnt) * gegenbauer_eval(e.dim, i, Rational(k, n0));
    }
    sums.push_back(s);
  }
  return sums;
}

std::vector<double> component_sums(const SphericalCode& c, const GegenbauerExpansion& e) {
  if (c.dim != e.dim) throw std::invalid_argument("component_sums: dimension mismatch");
  const long n = c.size();
  std::vector<double> sums;
  for (int i = 1; i <= e.degree(); ++i) {
    double s = 0.0;
    for (long a = 0; a < n; ++a)
      for (long b = 0; b < n; ++b)
        s += gegenbauer_eval(e.dim, i, a == b ? 1.0 : c.points.row(a).dot(c.points.row(b)));
    sums.push_back(s);
  }
  return sums;
}

TightnessReport tightness_report(const SphericalCode& c, const Certificate& cert, int threads) {
  TightnessReport rep;
  if (!c.exact) throw std::logic_error("tightness_report: code has no exact model");
  if (max_offdiag_exact(c, threads) > cert.s) {
    rep.applicable = false;
    return rep;
  }
  rep.lp_slack = lp_slack_exact(c, cert.expansion, threads);
  rep.component_sums = component_sums_exact(c, cert.expansion, threads);
  rep.is_tight = rep.lp_slack.is_zero();
  for (const auto& s : rep.component_sums)
    if (!s.is_zero()) rep.is_tight = false;
  return rep;
}

WeakStabilityConstants weak_stability_constants(const Certificate& cert, long n_points) {
  WeakStabilityConstants w;
  w.m = cert.max_multiplicity;

  // r: minimal root of f inside (s, 1), else 1. An isolating interval is
  // replaced by its lower edge, refined until it clears s; that
  // under-approximation keeps the [s, (s+r)/2] window and eps_geom mutually
  // consistent.
  w.r = Rational(1);
  if (cert.s < Rational(1)) {
    RootList above = real_roots_with_multiplicity(cert.poly, cert.s, Rational(1));
    auto factors = squarefree_decomposition(cert.poly);
    for (auto e : above.entries) {
      if (e.exact) {
        if (e.value <= cert.s || e.value >= Rational(1)) continue;
        w.r = e.value;
        break;
      }
      RationalPoly g;
      for (const auto& [factor, mult] : factors)
        if (mult == e.multiplicity) g = factor;
      // strip possible roots at the window endpoints so sign bisection works
      for (const Rational& pt : {cert.s, Rational(1)})
        if (g.degree() >= 1 && g(pt) == Rational(0))
          g = g.exact_divide(RationalPoly({-pt, Rational(1)}));
      while (!(e.lo > cert.s)) {
        Rational mid = (e.lo + e.hi) / Rational(2);
        if (g(mid).sign() == g(e.lo).sign())
          e.lo = mid;
        else
          e.hi = mid;
      }
      w.r = e.lo;
      break;
    }
  }

  const Rational proof_hi = (cert.s + w.r) / Rational(2);
  Extremum m_proof = slope_quotient_max(cert.poly, cert.s, proof_hi);
  w.M = m_proof.value.to_double();
  w.M_exact = m_proof.value;
  w.M_is_exact = m_proof.exact;

  Extremum m_full = slope_quotient_max(cert.poly, cert.s, Rational(1));
  w.M_full = m_full.value.to_double();
  w.M_full_exact = m_full.value;
  w.M_full_is_exact = m_full.exact;

  auto roots = rational_roots_or_throw(cert.roots);
  Extremum mp = minimax_root_quotients(cert.poly, roots, Rational(-1), Rational(1));
  w.Mprime = mp.value.to_double();
  w.Mprime_exact = mp.value;
  w.Mprime_is_exact = mp.exact;

  const Rational nn(n_points);
  Rational k_exact = (nn * nn - nn - Rational(1)) * m_proof.value / mp.value;
  w.K = std::max(k_exact.to_double(), 1.0);
  w.eps_count = (cert.expansion.coeffs[0] / (nn * m_proof.value)).to_double();
  w.eps_geom = ((w.r - cert.s) / Rational(2)).to_double();
  return w;
}

Rational slope_constant(const Certificate& cert) {
  Extremum m = slope_quotient_max(cert.poly, cert.s, Rational(1));
  if (!m.exact)
    throw std::domain_error("slope_constant: maximum not attained at an exact point");
  return m.value;
}

SAlphaReport s_alpha_sums(const SphericalCode& c, const std::vector<Rational>& refs, double tol,
                          int degree, int threads) {
  Census cen = census(c, refs, tol, threads);
  if (cen.catchall > 0) {
    std::string where = cen.stray ? " first stray pair (" + std::to_string(cen.stray->first) +
                                        ", " + std::to_string(cen.stray->second) + ")"
                                  : "";
    throw std::domain_error("s_alpha_sums: census has a nonempty catch-all;" + where);
  }
  SAlphaReport rep;
  rep.alphas = refs;
  rep.sums.assign(refs.size(), 0.0);

  const long n = c.size();
  std::vector<double> refd(refs.size());
  for (std::size_t r = 0; r < refs.size(); ++r) refd[r] = refs[r].to_double();
  if (c.exact) {
    const long long n0 = c.exact->norm_sq;
    auto hist = exact_dot_histogram(c, threads);
    for (long long k = -n0; k <= n0; ++k) {
      long long cnt = hist[static_cast<std::size_t>(k + n0)];
      if (cnt == 0) continue;
      double v = static_cast<double>(k) / static_cast<double>(n0);
      std::size_t best = 0;
      for (std::size_t r = 1; r < refd.size(); ++r)
        if (std::abs(v - refd[r]) < std::abs(v - refd[best])) best = r;
      rep.sums[best] += cnt * (v - refd[best]);
    }
  } else {
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) {
        if (i == j) continue;
        double v = c.points.row(i).dot(c.points.row(j));
        std::size_t best = 0;
        for (std::size_t r = 1; r < refd.size(); ++r)
          if (std::abs(v - refd[r]) < std::abs(v - refd[best])) best = r;
        rep.sums[best] += v - refd[best];
      }
  }
  // First-order effect of the sums on each component sum: the derivative of
  // Q_i at the bucket reference weighs the accumulated deviation.
  for (int i = 1; i <= degree; ++i) {
    RationalPoly dq = gegenbauer_monomial(c.dim, i).derivative();
    double lin = 0.0;
    for (std::size_t r = 0; r < refs.size(); ++r)
      lin += dq.eval_double(refd[r]) * rep.sums[r];
    rep.linearized.push_back(lin);
  }
  return rep;
}

}  // namespace spherecode
