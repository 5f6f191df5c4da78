#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "spherecode/codes.hpp"
#include "spherecode/lpbound.hpp"

namespace spherecode {

enum class PerturbStrategy { tangent_noise, pair_stretch };

PerturbStrategy parse_strategy(const std::string& name);
std::string strategy_name(PerturbStrategy s);

// Deterministic (d, N, s+eps)-code near a tight catalog code: unit rows and
// max_offdiag <= s + eps, enforced by halving the noise magnitude on
// violation (up to 100 backtracks). eps = 0 returns the code unchanged.
SphericalCode perturb_code(const SphericalCode& c, double eps, PerturbStrategy strategy,
                           std::uint64_t seed);

struct Closeness {
  std::vector<long> matching;  // index into B for each point of A
  double gram_max_dev = 0.0;
};

// Matching by two-pass alignment: greedy match, orthogonal alignment,
// optimal re-match on angles, re-alignment; the reported deviation is the
// max entry distance of the Gram matrices under the final matching (an
// upper bound for the optimum over all permutations).
Closeness code_closeness(const SphericalCode& a, const SphericalCode& b);

struct Alignment {
  Eigen::MatrixXd rotation;  // orthogonal, reflections allowed
  double max_spherical_distance = 0.0;
};

// Least-squares orthogonal alignment of A onto B under the matching
// (polar factor of the cross-covariance).
Alignment align_codes(const SphericalCode& a, const SphericalCode& b,
                      const std::vector<long>& matching);

// Determinant of [[1, a, 1/2+d1, 1/2+d2], [a, 1, 1/2+d3, 1/2+d4],
// [1/2+d1, 1/2+d3, 1, b], [1/2+d2, 1/2+d4, b, 1]]; with all d_i = 0 it
// equals (1-a)(1-b)(ab + a + b).
template <class T>
T four_point_det(const T& alpha, const T& beta, const T& d1, const T& d2, const T& d3,
                 const T& d4) {
  const T half = T(1) / T(2);
  const T m[4][4] = {{T(1), alpha, half + d1, half + d2},
                     {alpha, T(1), half + d3, half + d4},
                     {half + d1, half + d3, T(1), beta},
                     {half + d2, half + d4, beta, T(1)}};
  auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
    return m[r0][c0] * (m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]) -
           m[r0][c1] * (m[r1][c0] * m[r2][c2] - m[r1][c2] * m[r2][c0]) +
           m[r0][c2] * (m[r1][c0] * m[r2][c1] - m[r1][c1] * m[r2][c0]);
  };
  return m[0][0] * det3(1, 2, 3, 1, 2, 3) - m[0][1] * det3(1, 2, 3, 0, 2, 3) +
         m[0][2] * det3(1, 2, 3, 0, 1, 3) - m[0][3] * det3(1, 2, 3, 0, 1, 2);
}

struct PerturbationTrial {
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  PerturbStrategy strategy = PerturbStrategy::tangent_noise;
  double achieved_max_offdiag = 0.0;
  double gram_max_dev = 0.0;
  double aligned_max_angle = 0.0;
};

struct SweepReport {
  std::vector<PerturbationTrial> trials;
  double fitted_exponent = 0.0;   // log-log slope of median gram_max_dev vs eps
  double fitted_prefactor = 0.0;
  std::vector<double> median_gram_dev;  // one per epsilon, in grid order
};

// Perturb/measure/align per trial; per-trial seeds derive from
// (seed, eps index, trial index), so results are schedule independent.
SweepReport stability_sweep(const SphericalCode& c, const Certificate& cert,
                            const std::vector<double>& eps_list, int trials_per_eps,
                            std::uint64_t seed, int threads = 0);

// Minimum-cost assignment (square cost matrix), O(N^3).
std::vector<long> solve_assignment(const Eigen::MatrixXd& cost);

}  // namespace spherecode
