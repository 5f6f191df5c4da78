#pragma once

#include <string>
#include <vector>

#include "spherecode/codes.hpp"
#include "spherecode/gegenbauer.hpp"
#include "spherecode/lpbound.hpp"
#include "spherecode/perturb.hpp"
#include "spherecode/polynomial.hpp"
#include "spherecode/specstab.hpp"

namespace spherecode {

// Polynomials: {"basis":"monomial"|"gegenbauer","dim":d,"coeffs":["p/q",...]}
std::string poly_to_json(const RationalPoly& p, int dim);
std::string expansion_to_json(const GegenbauerExpansion& e);

// Certificates: {"dim":d,"s":"p/q","coeffs":["p/q",...]}
std::string certificate_to_json(int dim, const Rational& s,
                                const std::vector<Rational>& coeffs);
struct CertificateFile {
  int dim;
  Rational s;
  GegenbauerExpansion expansion;
};
CertificateFile read_certificate(const std::string& path);
void write_certificate(const std::string& path, int dim, const Rational& s,
                       const std::vector<Rational>& coeffs);

// Code files: header "d N mode", N coordinate rows, and in exact mode a
// trailing "/sqrt(n0)" annotation line.
void write_code(const std::string& path, const SphericalCode& c);
SphericalCode read_code(const std::string& path);

// Census as CSV: alpha,count,max_deviation (catch-all row labelled so).
std::string census_to_csv(const Census& c);

// Matrices as CSV rows.
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(const std::string& path);

std::string sqrt_alignment_to_json(const SqrtAlignment& a);
std::string weak_constants_to_json(const WeakStabilityConstants& w);
std::string tightness_to_json(const TightnessReport& r);

std::string sweep_to_csv(const SweepReport& r);
std::string sweep_summary_to_json(const SweepReport& r);
std::string sweep_plot_data(const std::vector<double>& eps_list, const SweepReport& r);

}  // namespace spherecode
