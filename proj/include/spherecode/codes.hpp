#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spherecode/rational.hpp"

namespace spherecode {

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

// Integer coordinate model with one shared squared norm: every row z
// satisfies <z, z> = norm_sq, and the unit points are rows / sqrt(norm_sq).
// The ambient width may exceed the code dimension (simplex and the lattice
// cross-section codes live in a dim-dimensional subspace of a wider
// integer ambient space); Gram entries stay exactly rational either way.
struct ExactModel {
  IntMatrix coords;      // N x w, w >= dim
  long long norm_sq = 1;
};

struct SphericalCode {
  int dim = 2;
  Eigen::MatrixXd points;  // N x dim, unit rows
  std::optional<ExactModel> exact;
  std::string label;
  std::optional<Rational> threshold;                // catalog max inner product s
  std::vector<Rational> reference_inner_products;   // catalog off-diagonal values

  long long size() const { return points.rows(); }
};

// Catalog construction. Accepted names:
//   simplex(d,N)      N <= d+1 points, inner products -1/(N-1)
//   cross_polytope(d) 2d points, inner products {-1, 0}
//   ngon(N)           planar N-gon
//   icosahedron       12 points in R^3
//   cell600           120 points in R^4 (binary icosahedral quaternions)
//   e8_roots          240 points in R^8
//   leech_minimal     196560 points in R^24
//   kissing(d)        d in {5,6,7,22,23}, cross-sections of e8/leech
SphericalCode generate(const std::string& name);

double gram(const SphericalCode& c, long i, long j);
Rational gram_exact(const SphericalCode& c, long i, long j);

double max_offdiag(const SphericalCode& c, int threads = 0);
Rational max_offdiag_exact(const SphericalCode& c, int threads = 0);

// Histogram of off-diagonal inner products against sorted rational
// reference values. Assignment is nearest-reference with a deviation cap of
// 0.1; float mode additionally requires the deviation to stay within tol.
// Pairs outside every bucket land in the catch-all, never an error.
struct Census {
  std::vector<Rational> reference_values;
  std::vector<long long> counts;  // ordered pairs x != y, per reference
  long long catchall = 0;
  double max_deviation = 0.0;
  std::optional<std::pair<long, long>> stray;  // first catch-all pair when known

  long long total_pairs() const {
    long long t = catchall;
    for (long long c : counts) t += c;
    return t;
  }
};

Census census(const SphericalCode& c, const std::vector<Rational>& refs, double tol,
              int threads = 0);

// #{k : <x_i, x_k> and <x_j, x_k> both within tol of value}; exact codes
// compare rationally and ignore tol.
long long common_neighbor_count(const SphericalCode& c, long i, long j, const Rational& value,
                                double tol);

// Extended binary Golay code, bordered quadratic-residue construction; all
// 4096 words as 24-bit masks, sorted.
const std::vector<std::uint32_t>& golay_codewords();

// Membership test for the Leech lattice scaled so the minimal shell has
// squared norm 32: coordinates all congruent to m mod 2 for m in {0,1},
// ((x_i - m)/2 mod 2) a Golay word, and sum x_i = 4m mod 8.
bool is_leech_vector(const Eigen::Matrix<long long, 1, Eigen::Dynamic>& x);

// Raw off-diagonal dot-value histogram of an exact-model code: slot k + n0
// counts ordered pairs with integer dot k. Parallel and deterministic.
std::vector<long long> exact_dot_histogram(const SphericalCode& c, int threads = 0);

}  // namespace spherecode
