#include "spherecode/specstab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <vector>

namespace spherecode {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Clusters ascending eigenvalues into groups separated by more than tol.
std::vector<std::pair<int, int>> cluster_ranges(const Eigen::VectorXd& vals, double tol) {
  std::vector<std::pair<int, int>> ranges;
  int start = 0;
  for (int i = 1; i <= vals.size(); ++i) {
    if (i == vals.size() || vals(i) - vals(i - 1) > tol) {
      ranges.emplace_back(start, i);
      start = i;
    }
  }
  return ranges;
}

}  // namespace

SpectralData sym_eig(const Eigen::MatrixXd& m, double tol) {
  const long n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("sym_eig: matrix must be square");
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw std::invalid_argument("sym_eig: matrix is not symmetric within tol");

  Eigen::MatrixXd a = (m + m.transpose()) / 2.0;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double norm = a.norm();
  const double target = 1e-13 * std::max(norm, 1e-300);

  auto offdiag_norm = [&a, n]() {
    double s = 0;
    for (long p = 0; p < n; ++p)
      for (long q = p + 1; q < n; ++q) s += 2.0 * a(p, q) * a(p, q);
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && offdiag_norm() > target; ++sweep) {
    for (long p = 0; p < n - 1; ++p)
      for (long q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        Eigen::VectorXd ap = a.col(p), aq = a.col(q);
        a.col(p) = c * ap - s * aq;
        a.col(q) = s * ap + c * aq;
        Eigen::RowVectorXd rp = a.row(p), rq = a.row(q);
        a.row(p) = c * rp - s * rq;
        a.row(q) = s * rp + c * rq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        Eigen::VectorXd vp = v.col(p), vq = v.col(q);
        v.col(p) = c * vp - s * vq;
        v.col(q) = s * vp + c * vq;
      }
  }

  SpectralData out;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Eigen::VectorXd diag = a.diagonal();
  std::stable_sort(order.begin(), order.end(),
                   [&diag](int x, int y) { return diag(x) < diag(y); });
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (long k = 0; k < n; ++k) {
    out.eigenvalues(k) = diag(order[static_cast<std::size_t>(k)]);
    Eigen::VectorXd col = v.col(order[static_cast<std::size_t>(k)]);
    long imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    if (col(imax) < 0) col = -col;  // deterministic sign convention
    out.eigenvectors.col(k) = col;
  }
  out.rank_tol = 1e-10 * static_cast<double>(n) * std::max(norm, 1e-300);
  out.rank = 0;
  for (long k = 0; k < n; ++k)
    if (out.eigenvalues(k) > out.rank_tol) ++out.rank;
  return out;
}

double delta_gap(const SpectralData& spec) {
  const long n = spec.eigenvalues.size();
  std::vector<double> distinct;
  for (long i = 0; i < n; ++i) {
    if (!distinct.empty() && spec.eigenvalues(i) - distinct.back() <= spec.rank_tol) continue;
    distinct.push_back(spec.eigenvalues(i));
  }
  double smallest_positive = 0.0;
  for (double v : distinct)
    if (v > spec.rank_tol) {
      smallest_positive = v;
      break;
    }
  if (smallest_positive == 0.0) throw std::domain_error("delta_gap: no positive eigenvalue");
  double gap = smallest_positive;
  for (std::size_t i = 1; i < distinct.size(); ++i)
    gap = std::min(gap, distinct[i] - distinct[i - 1]);
  return std::min(gap, smallest_positive);
}

double remark_K(const Eigen::MatrixXd& b) {
  const double n = static_cast<double>(b.rows());
  if (b.rows() < 2) throw std::invalid_argument("remark_K: N >= 2 required");
  SpectralData spec = sym_eig(b);
  const double norm = std::max(std::abs(spec.eigenvalues(0)),
                               std::abs(spec.eigenvalues(spec.eigenvalues.size() - 1)));
  if (norm <= spec.rank_tol) throw std::domain_error("remark_K: zero matrix");
  return 85.0 * std::pow(n, 5) * std::max(std::sqrt(norm), 1.0) / delta_gap(spec);
}

Eigen::MatrixXd near_orthonormal_basis(const Eigen::MatrixXd& u, double eps) {
  const long d = u.cols();
  if (d < 1) throw std::invalid_argument("near_orthonormal_basis: empty frame");
  if (d >= 2 && !(eps < 1.0 / (2.0 * static_cast<double>(d))))
    throw std::invalid_argument("near_orthonormal_basis: requires eps < 1/(2d)");
  Eigen::MatrixXd gram = u.transpose() * u;
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j)
      if (i != j && std::abs(gram(i, j)) > eps + 1e-12)
        throw std::invalid_argument("near_orthonormal_basis: frame exceeds the stated eps");
  SpectralData spec = sym_eig(gram);
  if (spec.eigenvalues(0) <= 0)
    throw std::invalid_argument("near_orthonormal_basis: frame is rank deficient");
  Eigen::VectorXd inv_sqrt = spec.eigenvalues.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd w =
      u * spec.eigenvectors * inv_sqrt.asDiagonal() * spec.eigenvectors.transpose();
  return w;
}

SqrtAlignment aligned_sqrt_pair(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const long n = b.rows();
  if (a.rows() != n || a.cols() != n || b.cols() != n)
    throw std::invalid_argument("aligned_sqrt_pair: size mismatch");
  SpectralData sb = sym_eig(b);
  if (sb.eigenvalues(0) < -sb.rank_tol)
    throw SqrtPairError("aligned_sqrt_pair: B is not positive semi-definite");
  SpectralData sa_probe = sym_eig(a);
  int rank_a = 0;
  for (long k = 0; k < n; ++k)
    if (std::abs(sa_probe.eigenvalues(k)) > sa_probe.rank_tol) ++rank_a;
  if (rank_a != sb.rank)
    throw SqrtPairError("aligned_sqrt_pair: rank(A) = " + std::to_string(rank_a) +
                        " differs from rank(B) = " + std::to_string(sb.rank));

  SqrtAlignment out;
  out.delta = (a - b).cwiseAbs().maxCoeff();
  out.Delta = delta_gap(sb);
  const double nn = static_cast<double>(n);
  out.K = 85.0 * std::pow(nn, 5) *
          std::max(std::sqrt(sb.eigenvalues(sb.eigenvalues.size() - 1)), 1.0) / out.Delta;
  // admissibility: 14 N^4 / Delta * delta < 1/(2N)
  if (!(14.0 * std::pow(nn, 4) / out.Delta * out.delta < 1.0 / (2.0 * nn)))
    throw SqrtPairError("aligned_sqrt_pair: refused, 14*N^4/Delta*delta = " +
                        std::to_string(14.0 * std::pow(nn, 4) / out.Delta * out.delta) +
                        " is not below 1/(2N) = " + std::to_string(1.0 / (2.0 * nn)));

  const int r = sb.rank;
  // Coordinates in B's eigenbasis; D is diagonal there with the positive
  // cluster structure of sb.
  const Eigen::MatrixXd& vb = sb.eigenvectors;
  Eigen::MatrixXd a_bar = vb.transpose() * a * vb;
  a_bar = (a_bar + a_bar.transpose()) / 2.0;
  SpectralData sa = sym_eig(a_bar);

  // Cluster the positive eigenvalues of B into eigenspaces L_j (coordinate
  // blocks of the eigenbasis), using the Delta/2 separation regime.
  // positions n-r..n-1 of the eigenbasis hold the positive part, ascending
  Eigen::VectorXd pos_vals(r);
  for (int k = 0; k < r; ++k) pos_vals(k) = sb.eigenvalues(n - r + k);
  auto clusters = cluster_ranges(pos_vals, out.Delta / 2.0);

  // Match each eigenvector of a_bar with mu > Delta/2 to its cluster; the
  // rest belong to the kernel side.
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
  {
    std::vector<std::vector<int>> members(clusters.size());
    std::vector<int> kernel_members;
    for (long k = 0; k < n; ++k) {
      const double m = sa.eigenvalues(k);
      if (m > out.Delta / 2.0) {
        int best = -1;
        for (std::size_t cidx = 0; cidx < clusters.size(); ++cidx) {
          const double lam = pos_vals(clusters[cidx].first);
          if (std::abs(m - lam) < out.Delta / 2.0) best = static_cast<int>(cidx);
        }
        if (best < 0)
          throw SqrtPairError("aligned_sqrt_pair: an eigenvalue of A matches no eigenspace of B");
        members[static_cast<std::size_t>(best)].push_back(static_cast<int>(k));
      } else {
        kernel_members.push_back(static_cast<int>(k));
      }
    }
    if (static_cast<int>(kernel_members.size()) != n - r)
      throw SqrtPairError("aligned_sqrt_pair: kernel dimensions disagree");

    // Per eigenspace: project the matched eigenvectors onto the coordinate
    // block, normalize, and orthonormalize via the symmetric basis.
    for (std::size_t cidx = 0; cidx < clusters.size(); ++cidx) {
      auto [c0, c1] = clusters[cidx];
      const int dim_l = c1 - c0;
      if (static_cast<int>(members[cidx].size()) != dim_l)
        throw SqrtPairError("aligned_sqrt_pair: eigenspace multiplicities disagree");
      const long base = n - r + c0;  // coordinate offset of L_j
      Eigen::MatrixXd proj(dim_l, dim_l);
      for (int t = 0; t < dim_l; ++t) {
        Eigen::VectorXd vcol = sa.eigenvectors.col(members[cidx][static_cast<std::size_t>(t)]);
        Eigen::VectorXd pl = vcol.segment(base, dim_l);
        const double norm = pl.norm();
        if (norm < 0.75)
          throw SqrtPairError("aligned_sqrt_pair: eigenvector strays from its eigenspace");
        proj.col(t) = pl / norm;
      }
      double worst = 0.0;
      for (int i = 0; i < dim_l; ++i)
        for (int j = i + 1; j < dim_l; ++j)
          worst = std::max(worst, std::abs(proj.col(i).dot(proj.col(j))));
      Eigen::MatrixXd wl =
          dim_l == 1 ? proj
                     : near_orthonormal_basis(
                           proj, std::max(std::nextafter(worst, 1.0), 1e-15));
      for (int t = 0; t < dim_l; ++t) {
        const int slot = members[cidx][static_cast<std::size_t>(t)];
        w.col(slot).segment(base, dim_l) = wl.col(t);
        mu(slot) = sa.eigenvalues(slot);
      }
    }
    // Kernel side: project onto the first n-r coordinates.
    if (!kernel_members.empty()) {
      const int dim_k = n - r;
      Eigen::MatrixXd proj(dim_k, dim_k);
      for (int t = 0; t < dim_k; ++t) {
        Eigen::VectorXd vcol = sa.eigenvectors.col(kernel_members[static_cast<std::size_t>(t)]);
        Eigen::VectorXd pl = vcol.segment(0, dim_k);
        const double norm = pl.norm();
        if (norm < 0.75)
          throw SqrtPairError("aligned_sqrt_pair: kernel eigenvector strays from the kernel");
        proj.col(t) = pl / norm;
      }
      double worst = 0.0;
      for (int i = 0; i < dim_k; ++i)
        for (int j = i + 1; j < dim_k; ++j)
          worst = std::max(worst, std::abs(proj.col(i).dot(proj.col(j))));
      Eigen::MatrixXd wl =
          dim_k == 1 ? proj
                     : near_orthonormal_basis(
                           proj, std::max(std::nextafter(worst, 1.0), 1e-15));
      for (int t = 0; t < dim_k; ++t) {
        const int slot = kernel_members[static_cast<std::size_t>(t)];
        w.col(slot).segment(0, dim_k) = wl.col(t);
        mu(slot) = std::max(sa.eigenvalues(slot), 0.0);
      }
    }
  }

  // F maps w_i to v_i; the clustered block form F^T a_bar F = W diag(mu) W^T
  // is exactly block-diagonal, and its PSD square root W sqrt(mu) W^T gives
  // P with P^2 = A up to roundoff.
  Eigen::MatrixXd f = sa.eigenvectors * w.transpose();
  Eigen::MatrixXd sqrt_block = w * mu.cwiseMax(0.0).cwiseSqrt().asDiagonal() * w.transpose();
  out.P = vb * f * sqrt_block * f.transpose() * vb.transpose();
  out.P = (out.P + out.P.transpose()) / 2.0;
  out.Q = vb * sb.eigenvalues.cwiseMax(0.0).cwiseSqrt().asDiagonal() * vb.transpose();
  out.Q = (out.Q + out.Q.transpose()) / 2.0;
  out.max_dev = (out.P - out.Q).cwiseAbs().maxCoeff();
  out.bound_satisfied = out.max_dev <= out.K * out.delta + 1e-12;
  return out;
}

AlmostPerp almost_perp(const Eigen::VectorXd& x, const Eigen::MatrixXd& z, double delta) {
  const long d = x.size();
  if (z.rows() != d || z.cols() != d - 1)
    throw std::invalid_argument("almost_perp: z must hold d-1 vectors of R^d");
  for (long i = 0; i < d - 1; ++i)
    if (std::abs(x.dot(z.col(i))) > delta)
      throw std::invalid_argument("almost_perp: |<x, z_i>| exceeds delta");
  Eigen::MatrixXd gram = z.transpose() * z;
  SpectralData spec = sym_eig(gram);
  if (spec.eigenvalues(0) <= 1e-12)
    throw std::invalid_argument("almost_perp: z is rank deficient");

  // Unit normal to span(z) on the side of x.
  Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(z).householderQ();
  Eigen::VectorXd normal = q.col(d - 1);
  if (x.dot(normal) < 0) normal = -normal;

  AlmostPerp out;
  out.z_perp = normal;
  out.bound = (kPi / 2.0) *
              std::sqrt(static_cast<double>(d - 1) / spec.eigenvalues(0)) * delta;
  out.actual_angle = std::acos(std::clamp(x.dot(normal), -1.0, 1.0));
  return out;
}

SphericalCode factor_code(const Eigen::MatrixXd& g, int d, double tol) {
  const long n = g.rows();
  if (g.cols() != n) throw std::invalid_argument("factor_code: matrix must be square");
  for (long i = 0; i < n; ++i)
    if (std::abs(g(i, i) - 1.0) > tol)
      throw std::invalid_argument("factor_code: diagonal must be all ones");
  SpectralData spec = sym_eig(g);
  if (spec.eigenvalues(0) < -tol)
    throw std::domain_error("factor_code: negative eigenvalue " +
                            std::to_string(spec.eigenvalues(0)));
  for (long k = 0; k + d < n; ++k)
    if (spec.eigenvalues(k) > spec.rank_tol)
      throw std::domain_error("factor_code: rank exceeds d");
  SphericalCode c;
  c.dim = d;
  c.label = "factored";
  c.points.resize(n, d);
  for (int k = 0; k < d; ++k) {
    const long idx = n - 1 - k;
    const double lam = std::max(spec.eigenvalues(idx), 0.0);
    c.points.col(k) = std::sqrt(lam) * spec.eigenvectors.col(idx);
  }
  for (long i = 0; i < n; ++i) c.points.row(i).normalize();
  return c;
}

bool principal_minor_check(const Eigen::MatrixXd& g, int d, double tol) {
  const int n = static_cast<int>(g.rows());
  if (n > 12) throw std::invalid_argument("principal_minor_check: diagnostic limited to N <= 12");
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    const int size = std::popcount(mask);
    std::vector<int> idx;
    for (int k = 0; k < n; ++k)
      if (mask >> k & 1) idx.push_back(k);
    Eigen::MatrixXd sub(size, size);
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) sub(i, j) = g(idx[static_cast<std::size_t>(i)],
                                                   idx[static_cast<std::size_t>(j)]);
    const double det = sub.determinant();
    if (size > d && std::abs(det) > tol) return false;
    if (size <= d && det < -tol) return false;
  }
  return true;
}

double strong_stability_constant_log10(double n_points, int d, double norm_b, double delta_gap,
                                       double closeness_log10) {
  return std::log10(kPi / 2.0) + 0.5 * std::log10(static_cast<double>(d)) + std::log10(85.0) +
         5.0 * std::log10(n_points) + std::log10(std::max(std::sqrt(norm_b), 1.0)) -
         std::log10(delta_gap) + closeness_log10;
}

double strong_stability_constant(const Eigen::MatrixXd& b, double k_weak, int d) {
  return (kPi / 2.0) * std::sqrt(static_cast<double>(d)) * remark_K(b) * k_weak;
}

TightGramSpectrum tight_gram_spectrum(const SphericalCode& c, int threads) {
  if (!c.exact) throw std::logic_error("tight_gram_spectrum: code has no exact model");
  const long long n = c.size();
  const long long n0 = c.exact->norm_sq;
  // sum of lambda = N and sum of lambda^2 = N^2/d force the spectrum
  // {N/d with multiplicity d, 0} for a PSD rank-<=d Gram matrix.
  auto hist = exact_dot_histogram(c, threads);
  Rational trace_sq(0);
  for (long long k = -n0; k <= n0; ++k) {
    long long cnt = hist[static_cast<std::size_t>(k + n0)];
    if (cnt == 0) continue;
    Rational v(k, n0);
    trace_sq += Rational(cnt) * v * v;
  }
  trace_sq += Rational(n);  // diagonal
  if (trace_sq != Rational(n) * Rational(n) / Rational(c.dim))
    throw std::domain_error("tight_gram_spectrum: trace identity fails; code is not a tight "
                            "projective 2-design");
  TightGramSpectrum out;
  out.eigenvalue = static_cast<double>(n) / c.dim;
  out.multiplicity = c.dim;
  out.delta_gap = out.eigenvalue;
  return out;
}

}  // namespace spherecode
