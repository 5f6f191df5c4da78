#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

#include "spherecode/codes.hpp"

namespace spherecode {

struct SpectralData {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // columns match eigenvalues
  int rank = 0;                  // eigenvalues above rank_tol
  double rank_tol = 0.0;
};

// Full decomposition by cyclic Jacobi sweeps to an off-diagonal Frobenius
// residual of 1e-13 * ||M||_F; deterministic for a fixed input.
SpectralData sym_eig(const Eigen::MatrixXd& m, double tol = 1e-12);

// min of (smallest positive eigenvalue, smallest gap between consecutive
// distinct eigenvalues), clustering at rank_tol.
double delta_gap(const SpectralData& spec);

// 85 N^5 max(sqrt(||B||), 1) / Delta.
double remark_K(const Eigen::MatrixXd& b);

class SqrtPairError : public std::runtime_error {
 public:
  explicit SqrtPairError(const std::string& what) : std::runtime_error(what) {}
};

struct SqrtAlignment {
  Eigen::MatrixXd P, Q;    // PSD square roots of A and B
  double delta = 0.0;      // max-norm distance of the inputs
  double Delta = 0.0;      // spectral gap of B
  double K = 0.0;          // remark constant
  double max_dev = 0.0;    // ||P - Q||_max
  bool bound_satisfied = false;
};

// The constructive square-root pairing: eigenbasis of B, eigenvectors of
// A in that basis, per-eigenspace orthonormal matches via
// near_orthonormal_basis, and the orthogonal F mapping one onto the other.
// Refuses inputs with mismatched rank or with delta outside
// 14 N^4 / Delta * delta < 1/(2N).
SqrtAlignment aligned_sqrt_pair(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// Columns of u are d nearly orthonormal unit vectors with mutual inner
// products bounded by eps < 1/(2d); returns the symmetric-orthogonalization
// basis, which stays within 2 d eps of each input column.
Eigen::MatrixXd near_orthonormal_basis(const Eigen::MatrixXd& u, double eps);

struct AlmostPerp {
  Eigen::VectorXd z_perp;
  double bound = 0.0;
  double actual_angle = 0.0;
};

// x a unit vector, columns of z a linearly independent set of d-1 unit
// vectors with |<x, z_i>| <= delta: the unit normal on x's side, the angle
// bound (pi/2) sqrt((d-1)/lambda_1(G)) delta, and the attained angle.
AlmostPerp almost_perp(const Eigen::VectorXd& x, const Eigen::MatrixXd& z, double delta);

// Factorizes a PSD unit-diagonal Gram matrix of rank <= d into N unit
// points of R^d.
SphericalCode factor_code(const Eigen::MatrixXd& g, int d, double tol = 1e-9);

// Diagnostic for N <= 12: every principal minor of size > d vanishes and
// every one of size <= d is nonnegative, by direct enumeration.
bool principal_minor_check(const Eigen::MatrixXd& g, int d, double tol = 1e-9);

// (pi/2) sqrt(d) * 85 N^5 max(sqrt(||B||),1)/Delta * K_weak, in log10 to
// survive the astronomically large inputs.
double strong_stability_constant_log10(double n_points, int d, double norm_b, double delta_gap,
                                       double closeness_log10);
double strong_stability_constant(const Eigen::MatrixXd& b, double k_weak, int d);

// Gram spectrum of a tight code without a dense eigensolve: eigenvalue N/d
// with multiplicity d and 0 otherwise, certified by the exact census trace
// identity sum_pairs <x,y>^2 + N = N^2/d.
struct TightGramSpectrum {
  double eigenvalue = 0.0;  // = N/d
  int multiplicity = 0;     // = d
  double delta_gap = 0.0;   // = N/d
};
TightGramSpectrum tight_gram_spectrum(const SphericalCode& c, int threads = 0);

}  // namespace spherecode
