#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "spherecode/codes.hpp"
#include "spherecode/gegenbauer.hpp"
#include "spherecode/roots.hpp"

namespace spherecode {

// Raised when an expansion fails the certificate conditions; names the
// violated condition and carries a witness point where applicable.
class CertificateError : public std::runtime_error {
 public:
  CertificateError(std::string condition, std::string witness)
      : std::runtime_error(condition + (witness.empty() ? "" : " (witness t = " + witness + ")")),
        condition_(std::move(condition)),
        witness_(std::move(witness)) {}
  const std::string& condition() const { return condition_; }
  const std::string& witness() const { return witness_; }

 private:
  std::string condition_, witness_;
};

struct Certificate {
  int dim = 2;
  Rational s;
  GegenbauerExpansion expansion;
  RationalPoly poly;       // expansion in the power basis
  RootList roots;          // roots of poly in [-1, s]
  int max_multiplicity = 1;
  Rational bound;          // f(1) / f_0
};

// Checks f_0 > 0, f_i >= 0 for i >= 1, k >= 1, and f <= 0 on [-1, s]; all in
// exact arithmetic. Throws CertificateError on any violation.
Certificate verify_certificate(int dim, const GegenbauerExpansion& e, const Rational& s);

// The two lattice certificates and the cross-polytope family, built from
// their factored forms and expanded exactly.
Certificate e8_certificate();
Certificate leech_certificate();
Certificate cross_polytope_certificate(int d);

// N f(1) + sum_{x != y} f(<x,y>) - N^2 f_0  (Delsarte primal slack).
Rational lp_slack_exact(const SphericalCode& c, const GegenbauerExpansion& e, int threads = 0);
double lp_slack(const SphericalCode& c, const GegenbauerExpansion& e);

// For i = 1..k: sum over all ordered pairs (diagonal included) of
// Q_i(<x,y>). Exact path goes through the dot histogram.
std::vector<Rational> component_sums_exact(const SphericalCode& c, const GegenbauerExpansion& e,
                                           int threads = 0);
std::vector<double> component_sums(const SphericalCode& c, const GegenbauerExpansion& e);

struct TightnessReport {
  bool applicable = true;  // false when max_offdiag(c) > cert.s
  Rational lp_slack;
  std::vector<Rational> component_sums;
  bool is_tight = false;
};

TightnessReport tightness_report(const SphericalCode& c, const Certificate& cert,
                                 int threads = 0);

struct WeakStabilityConstants {
  Rational r;          // minimal root of f in (s, 1), else 1
  int m = 1;           // largest root multiplicity on [-1, s]
  double M = 0;        // max f(t)/(t-s) on [s, (s+r)/2]
  double M_full = 0;   // same maximum taken over [s, 1]
  double Mprime = 0;   // min over [-1,1] of max_j |f/(t-x_j)^{m_j}|
  double K = 1;        // max{(N^2-N-1) M/M', 1}
  double eps_count = 0;  // f_0 / (N M)
  double eps_geom = 0;   // (r - s)/2
  Rational M_exact, M_full_exact, Mprime_exact;
  bool M_is_exact = false, M_full_is_exact = false, Mprime_is_exact = false;
};

WeakStabilityConstants weak_stability_constants(const Certificate& cert, long n_points);

// Exact value of max over [s, 1] of f(t)/(t - s); throws if the maximum is
// not attained at an exactly representable point.
Rational slope_constant(const Certificate& cert);

struct SAlphaReport {
  std::vector<Rational> alphas;
  std::vector<double> sums;        // S_alpha over ordered pairs x != y
  std::vector<double> linearized;  // for i = 1..k: sum_alpha Q_i'(alpha) S_alpha
};

// Requires the census over refs (at tol) to have an empty catch-all;
// errors naming the first stray pair otherwise.
SAlphaReport s_alpha_sums(const SphericalCode& c, const std::vector<Rational>& refs, double tol,
                          int degree, int threads = 0);

}  // namespace spherecode
