#include "spherecode/codes.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <thread>

namespace spherecode {

namespace {

int hardware_threads(int requested) {
  if (requested > 0) return requested;
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

void run_partitioned(long total, int threads, const std::function<void(int, long, long)>& fn) {
  threads = std::min<long>(threads, std::max<long>(total, 1));
  std::vector<std::thread> pool;
  long chunk = (total + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    long lo = t * chunk, hi = std::min<long>(total, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(fn, t, lo, hi);
  }
  for (auto& th : pool) th.join();
}

Eigen::MatrixXd unit_points_from_exact(const IntMatrix& z, long long n0, int dim) {
  const long n = z.rows(), w = z.cols();
  Eigen::MatrixXd zd = z.cast<double>() / std::sqrt(static_cast<double>(n0));
  if (w == dim) return zd;
  // Rows span a dim-dimensional subspace; project onto an orthonormal basis
  // of that span (modified Gram-Schmidt over the rows).
  Eigen::MatrixXd basis(dim, w);
  int have = 0;
  for (long i = 0; i < n && have < dim; ++i) {
    Eigen::VectorXd v = zd.row(i).transpose();
    for (int k = 0; k < have; ++k) v -= basis.row(k).dot(v) * basis.row(k).transpose();
    double nv = v.norm();
    if (nv > 1e-9) basis.row(have++) = (v / nv).transpose();
  }
  if (have < dim) throw std::logic_error("exact model rows do not span the stated dimension");
  return zd * basis.transpose();
}

void finish_exact_code(SphericalCode& c) {
  c.points = unit_points_from_exact(c.exact->coords, c.exact->norm_sq, c.dim);
}

// ---------------------------------------------------------------------------
// Catalog constructions
// ---------------------------------------------------------------------------

SphericalCode make_simplex(int d, int n) {
  if (d < 2 || n < 2 || n > d + 1) throw std::invalid_argument("simplex: need 2 <= N <= d+1");
  SphericalCode c;
  c.dim = d;
  c.label = "simplex(" + std::to_string(d) + "," + std::to_string(n) + ")";
  ExactModel m;
  m.coords = IntMatrix::Constant(n, n, -1);
  for (int i = 0; i < n; ++i) m.coords(i, i) += n;
  m.norm_sq = static_cast<long long>(n) * (n - 1);
  c.exact = std::move(m);
  c.threshold = Rational(-1, n - 1);
  c.reference_inner_products = {Rational(-1, n - 1)};
  finish_exact_code(c);
  return c;
}

SphericalCode make_cross_polytope(int d) {
  if (d < 2) throw std::invalid_argument("cross_polytope: d >= 2");
  SphericalCode c;
  c.dim = d;
  c.label = "cross_polytope(" + std::to_string(d) + ")";
  ExactModel m;
  m.coords = IntMatrix::Zero(2 * d, d);
  for (int i = 0; i < d; ++i) {
    m.coords(2 * i, i) = 1;
    m.coords(2 * i + 1, i) = -1;
  }
  m.norm_sq = 1;
  c.exact = std::move(m);
  c.threshold = Rational(0);
  c.reference_inner_products = {Rational(-1), Rational(0)};
  finish_exact_code(c);
  return c;
}

SphericalCode make_ngon(int n) {
  if (n < 3) throw std::invalid_argument("ngon: N >= 3");
  SphericalCode c;
  c.dim = 2;
  c.label = "ngon(" + std::to_string(n) + ")";
  c.points.resize(n, 2);
  for (int j = 0; j < n; ++j) {
    double a = 2.0 * M_PI * j / n;
    c.points(j, 0) = std::cos(a);
    c.points(j, 1) = std::sin(a);
  }
  return c;
}

SphericalCode make_icosahedron() {
  SphericalCode c;
  c.dim = 3;
  c.label = "icosahedron";
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double s = 1.0 / std::sqrt(1.0 + phi * phi);
  c.points.resize(12, 3);
  int r = 0;
  for (int axis = 0; axis < 3; ++axis)
    for (int s1 : {1, -1})
      for (int s2 : {1, -1}) {
        Eigen::RowVector3d v = Eigen::RowVector3d::Zero();
        v((axis + 1) % 3) = s1 * 1.0;
        v((axis + 2) % 3) = s2 * phi;
        c.points.row(r++) = v * s;
      }
  return c;
}

SphericalCode make_cell600() {
  SphericalCode c;
  c.dim = 4;
  c.label = "cell600";
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::RowVector4d> pts;
  for (int axis = 0; axis < 4; ++axis)
    for (int sgn : {1, -1}) {
      Eigen::RowVector4d v = Eigen::RowVector4d::Zero();
      v(axis) = sgn;
      pts.push_back(v);
    }
  for (int mask = 0; mask < 16; ++mask) {
    Eigen::RowVector4d v;
    for (int k = 0; k < 4; ++k) v(k) = (mask >> k & 1) ? 0.5 : -0.5;
    pts.push_back(v);
  }
  // Even permutations of (phi, 1, 1/phi, 0)/2 with free signs on the
  // nonzero slots.
  const int even_perm[12][4] = {{0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}, {1, 0, 3, 2},
                                {1, 2, 0, 3}, {1, 3, 2, 0}, {2, 0, 1, 3}, {2, 1, 3, 0},
                                {2, 3, 0, 1}, {3, 0, 2, 1}, {3, 1, 0, 2}, {3, 2, 1, 0}};
  const double base[4] = {phi / 2.0, 0.5, 1.0 / (2.0 * phi), 0.0};
  for (const auto& p : even_perm)
    for (int s0 : {1, -1})
      for (int s1 : {1, -1})
        for (int s2 : {1, -1}) {
          const int sg[4] = {s0, s1, s2, 1};
          Eigen::RowVector4d v;
          for (int k = 0; k < 4; ++k) v(p[k]) = sg[k] * base[k];
          pts.push_back(v);
        }
  c.points.resize(static_cast<long>(pts.size()), 4);
  for (std::size_t i = 0; i < pts.size(); ++i) c.points.row(static_cast<long>(i)) = pts[i];
  return c;
}

SphericalCode make_e8() {
  SphericalCode c;
  c.dim = 8;
  c.label = "e8_roots";
  ExactModel m;
  m.coords = IntMatrix::Zero(240, 8);
  long r = 0;
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j)
      for (int si : {2, -2})
        for (int sj : {2, -2}) {
          m.coords(r, i) = si;
          m.coords(r, j) = sj;
          ++r;
        }
  for (int mask = 0; mask < 256; ++mask) {
    if (std::popcount(static_cast<unsigned>(mask)) % 2 != 0) continue;
    for (int k = 0; k < 8; ++k) m.coords(r, k) = (mask >> k & 1) ? -1 : 1;
    ++r;
  }
  if (r != 240) throw std::logic_error("e8 enumeration produced wrong count");
  m.norm_sq = 8;
  c.exact = std::move(m);
  c.threshold = Rational(1, 2);
  c.reference_inner_products = {Rational(-1), Rational(-1, 2), Rational(0), Rational(1, 2)};
  finish_exact_code(c);
  return c;
}

// ---------------------------------------------------------------------------
// Golay code and Leech lattice
// ---------------------------------------------------------------------------

std::vector<std::uint32_t> build_golay() {
  // Generator [I | B]: B is the bordered circulant on the quadratic
  // residues mod 11 (including 0), with an all-ones border row/column.
  const bool qr[11] = {true, true, false, true, true, true,
                       false, false, false, true, false};  // {0,1,3,4,5,9}
  std::uint32_t basis[12];
  for (int i = 0; i < 12; ++i) {
    std::uint32_t row = 1u << i;  // identity part, bits 0..11
    for (int j = 0; j < 12; ++j) {
      bool bit;
      if (i < 11 && j < 11)
        bit = qr[((i - j) % 11 + 11) % 11];
      else if (i == 11 && j == 11)
        bit = false;
      else
        bit = true;  // border
      if (bit) row |= 1u << (12 + j);
    }
    basis[i] = row;
  }
  std::vector<std::uint32_t> words(4096);
  for (std::uint32_t msg = 0; msg < 4096; ++msg) {
    std::uint32_t w = 0;
    for (int i = 0; i < 12; ++i)
      if (msg >> i & 1) w ^= basis[i];
    words[msg] = w;
  }
  std::sort(words.begin(), words.end());
  // Weight distribution (1, 759, 2576, 759, 1) at weights (0, 8, 12, 16, 24)
  // certifies the construction.
  long hist[25] = {0};
  for (auto w : words) ++hist[std::popcount(w)];
  if (hist[0] != 1 || hist[8] != 759 || hist[12] != 2576 || hist[16] != 759 || hist[24] != 1)
    throw std::logic_error("golay generator produced a wrong weight distribution");
  return words;
}

bool golay_contains(std::uint32_t w) {
  const auto& words = golay_codewords();
  return std::binary_search(words.begin(), words.end(), w);
}

SphericalCode make_leech() {
  SphericalCode c;
  c.dim = 24;
  c.label = "leech_minimal";
  std::vector<std::array<long long, 24>> vecs;
  vecs.reserve(196560);
  Eigen::Matrix<long long, 1, Eigen::Dynamic> cand(24);

  auto push_if_member = [&](const std::array<long long, 24>& v) {
    for (int k = 0; k < 24; ++k) cand(k) = v[k];
    if (is_leech_vector(cand)) vecs.push_back(v);
  };

  // Shape (+-4^2, 0^22)
  for (int i = 0; i < 24; ++i)
    for (int j = i + 1; j < 24; ++j)
      for (int si : {4, -4})
        for (int sj : {4, -4}) {
          std::array<long long, 24> v{};
          v[i] = si;
          v[j] = sj;
          push_if_member(v);
        }
  // Shape (+-2^8, 0^16) over octad supports
  for (std::uint32_t w : golay_codewords()) {
    if (std::popcount(w) != 8) continue;
    int pos[8], np = 0;
    for (int k = 0; k < 24; ++k)
      if (w >> k & 1) pos[np++] = k;
    for (int mask = 0; mask < 256; ++mask) {
      std::array<long long, 24> v{};
      for (int k = 0; k < 8; ++k) v[pos[k]] = (mask >> k & 1) ? -2 : 2;
      push_if_member(v);
    }
  }
  // Shape (-+3, +-1^23): word fixes the signs, the +-3 slot runs over all
  // positions.
  for (std::uint32_t w : golay_codewords())
    for (int p = 0; p < 24; ++p) {
      std::array<long long, 24> v{};
      for (int k = 0; k < 24; ++k) v[k] = (w >> k & 1) ? -1 : 1;
      v[p] = (w >> p & 1) ? 3 : -3;
      push_if_member(v);
    }

  if (vecs.size() != 196560)
    throw std::logic_error("leech shell enumeration produced " + std::to_string(vecs.size()) +
                           " vectors instead of 196560");
  ExactModel m;
  m.coords = IntMatrix(196560, 24);
  for (std::size_t i = 0; i < vecs.size(); ++i)
    for (int k = 0; k < 24; ++k) m.coords(static_cast<long>(i), k) = vecs[i][k];
  m.norm_sq = 32;
  c.exact = std::move(m);
  c.threshold = Rational(1, 2);
  c.reference_inner_products = {Rational(-1),   Rational(-1, 2), Rational(-1, 4),
                                Rational(0),    Rational(1, 4),  Rational(1, 2)};
  finish_exact_code(c);
  return c;
}

// Sub-code of `base`: points z whose exact dot with every anchor row equals
// target, remapped to rows scale*z - sum(anchors).
SphericalCode make_cross_section(const SphericalCode& base, const std::vector<long>& anchors,
                                 long long target, int dim, const std::string& label) {
  const IntMatrix& z = base.exact->coords;
  const long n = z.rows();
  const long long scale = static_cast<long long>(anchors.size()) + 1;
  Eigen::Matrix<long long, 1, Eigen::Dynamic> shift =
      Eigen::Matrix<long long, 1, Eigen::Dynamic>::Zero(z.cols());
  for (long a : anchors) shift += z.row(a);
  std::vector<long> rows;
  for (long i = 0; i < n; ++i) {
    bool ok = true;
    for (long a : anchors)
      if (z.row(i).dot(z.row(a)) != target) {
        ok = false;
        break;
      }
    if (ok) rows.push_back(i);
  }
  SphericalCode c;
  c.dim = dim;
  c.label = label;
  ExactModel m;
  m.coords = IntMatrix(static_cast<long>(rows.size()), z.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    m.coords.row(static_cast<long>(i)) = scale * z.row(rows[i]) - shift;
  m.norm_sq = m.coords.row(0).dot(m.coords.row(0));
  for (long i = 1; i < m.coords.rows(); ++i)
    if (m.coords.row(i).dot(m.coords.row(i)) != m.norm_sq)
      throw std::logic_error("cross-section rows do not share a squared norm");
  c.exact = std::move(m);
  finish_exact_code(c);
  return c;
}

// First point pair/triple of the base code with all pairwise dots equal to
// half the squared norm (inner product 1/2), found by ordered scan.
std::vector<long> find_half_clique(const SphericalCode& base, int size) {
  const IntMatrix& z = base.exact->coords;
  const long long half = base.exact->norm_sq / 2;
  std::vector<long> clique{0};
  for (long i = 1; i < z.rows() && static_cast<int>(clique.size()) < size; ++i) {
    bool ok = true;
    for (long a : clique)
      if (z.row(i).dot(z.row(a)) != half) {
        ok = false;
        break;
      }
    if (ok) clique.push_back(i);
  }
  if (static_cast<int>(clique.size()) != size)
    throw std::logic_error("could not find the requested clique");
  return clique;
}

SphericalCode make_kissing(int d) {
  switch (d) {
    case 7: {
      SphericalCode e8 = make_e8();
      auto c = make_cross_section(e8, find_half_clique(e8, 1), 4, 7, "kissing(7)");
      c.threshold = Rational(1, 3);
      c.reference_inner_products = {Rational(-1), Rational(-1, 3), Rational(1, 3)};
      return c;
    }
    case 6: {
      SphericalCode e8 = make_e8();
      auto c = make_cross_section(e8, find_half_clique(e8, 2), 4, 6, "kissing(6)");
      c.threshold = Rational(1, 4);
      c.reference_inner_products = {Rational(-1, 2), Rational(1, 4)};
      return c;
    }
    case 5: {
      SphericalCode e8 = make_e8();
      auto c = make_cross_section(e8, find_half_clique(e8, 3), 4, 5, "kissing(5)");
      c.threshold = Rational(1, 5);
      c.reference_inner_products = {Rational(-3, 5), Rational(1, 5)};
      return c;
    }
    case 23: {
      SphericalCode leech = make_leech();
      auto c = make_cross_section(leech, find_half_clique(leech, 1), 16, 23, "kissing(23)");
      c.threshold = Rational(1, 3);
      c.reference_inner_products = {Rational(-1), Rational(-1, 3), Rational(0), Rational(1, 3)};
      return c;
    }
    case 22: {
      SphericalCode leech = make_leech();
      auto c = make_cross_section(leech, find_half_clique(leech, 2), 16, 22, "kissing(22)");
      c.threshold = Rational(1, 4);
      c.reference_inner_products = {Rational(-1, 2), Rational(-1, 8), Rational(1, 4)};
      return c;
    }
    default:
      throw std::invalid_argument("kissing: d must be one of {5,6,7,22,23}");
  }
}

std::vector<long> parse_int_args(const std::string& name, std::size_t open) {
  if (name.back() != ')') throw std::invalid_argument("generate: malformed name '" + name + "'");
  std::vector<long> args;
  std::string body = name.substr(open + 1, name.size() - open - 2);
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t comma = body.find(',', pos);
    std::string tok = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    args.push_back(std::stol(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return args;
}

}  // namespace

const std::vector<std::uint32_t>& golay_codewords() {
  static const std::vector<std::uint32_t> words = build_golay();
  return words;
}

bool is_leech_vector(const Eigen::Matrix<long long, 1, Eigen::Dynamic>& x) {
  if (x.cols() != 24) return false;
  const long long m = ((x(0) % 2) + 2) % 2;
  long long sum = 0;
  std::uint32_t word = 0;
  for (int k = 0; k < 24; ++k) {
    long long xi = x(k);
    if (((xi % 2) + 2) % 2 != m) return false;
    long long h = (xi - m) / 2;
    if ((((h % 2) + 2) % 2) == 1) word |= 1u << k;
    sum += xi;
  }
  if (((sum - 4 * m) % 8 + 8) % 8 != 0) return false;
  return golay_contains(word);
}

SphericalCode generate(const std::string& name) {
  std::size_t open = name.find('(');
  std::string head = name.substr(0, open);
  if (head == "e8_roots") return make_e8();
  if (head == "leech_minimal") return make_leech();
  if (head == "icosahedron") return make_icosahedron();
  if (head == "cell600") return make_cell600();
  if (open == std::string::npos)
    throw std::invalid_argument("generate: unknown code '" + name + "'");
  auto args = parse_int_args(name, open);
  if (head == "simplex" && args.size() == 2)
    return make_simplex(static_cast<int>(args[0]), static_cast<int>(args[1]));
  if (head == "cross_polytope" && args.size() == 1)
    return make_cross_polytope(static_cast<int>(args[0]));
  if (head == "ngon" && args.size() == 1) return make_ngon(static_cast<int>(args[0]));
  if (head == "kissing" && args.size() == 1) return make_kissing(static_cast<int>(args[0]));
  throw std::invalid_argument("generate: unknown code '" + name + "'");
}

double gram(const SphericalCode& c, long i, long j) {
  if (i < 0 || j < 0 || i >= c.size() || j >= c.size())
    throw std::out_of_range("gram: index out of range");
  return c.points.row(i).dot(c.points.row(j));
}

Rational gram_exact(const SphericalCode& c, long i, long j) {
  if (!c.exact) throw std::logic_error("gram_exact: code has no exact model");
  if (i < 0 || j < 0 || i >= c.size() || j >= c.size())
    throw std::out_of_range("gram_exact: index out of range");
  long long dot = c.exact->coords.row(i).dot(c.exact->coords.row(j));
  return Rational(dot, c.exact->norm_sq);
}

std::vector<long long> exact_dot_histogram(const SphericalCode& c, int threads) {
  if (!c.exact) throw std::logic_error("exact_dot_histogram: no exact model");
  const IntMatrix& z = c.exact->coords;
  const long n = z.rows();
  const long long n0 = c.exact->norm_sq;
  const std::size_t bins = static_cast<std::size_t>(2 * n0 + 1);
  const int nt = hardware_threads(threads);

  std::vector<std::vector<long long>> local(static_cast<std::size_t>(nt),
                                            std::vector<long long>(bins, 0));
  if (n <= 4096) {
    run_partitioned(n, nt, [&](int t, long lo, long hi) {
      auto& h = local[static_cast<std::size_t>(t)];
      for (long i = lo; i < hi; ++i)
        for (long j = 0; j < n; ++j) {
          if (i == j) continue;
          long long d = z.row(i).dot(z.row(j));
          ++h[static_cast<std::size_t>(d + n0)];
        }
    });
  } else {
    // Blocked GEMM in doubles: entries are small integers, so the products
    // are exact; this is the only path that touches Leech-scale codes.
    const long blk = 1024;
    const long nb = (n + blk - 1) / blk;
    Eigen::MatrixXd zd = z.cast<double>();
    std::vector<std::pair<long, long>> tiles;
    for (long bi = 0; bi < nb; ++bi)
      for (long bj = bi; bj < nb; ++bj) tiles.emplace_back(bi, bj);
    run_partitioned(static_cast<long>(tiles.size()), nt, [&](int t, long lo, long hi) {
      auto& h = local[static_cast<std::size_t>(t)];
      for (long k = lo; k < hi; ++k) {
        auto [bi, bj] = tiles[static_cast<std::size_t>(k)];
        const long i0 = bi * blk, i1 = std::min(n, i0 + blk);
        const long j0 = bj * blk, j1 = std::min(n, j0 + blk);
        Eigen::MatrixXd prod = zd.middleRows(i0, i1 - i0) * zd.middleRows(j0, j1 - j0).transpose();
        if (bi == bj) {
          for (long a = 0; a < prod.rows(); ++a)
            for (long b = a + 1; b < prod.cols(); ++b) {
              long long d = static_cast<long long>(std::llround(prod(a, b)));
              h[static_cast<std::size_t>(d + n0)] += 2;
            }
        } else {
          for (long a = 0; a < prod.rows(); ++a)
            for (long b = 0; b < prod.cols(); ++b) {
              long long d = static_cast<long long>(std::llround(prod(a, b)));
              h[static_cast<std::size_t>(d + n0)] += 2;
            }
        }
      }
    });
  }
  std::vector<long long> hist(bins, 0);
  for (const auto& h : local)
    for (std::size_t k = 0; k < bins; ++k) hist[k] += h[k];
  return hist;
}

Rational max_offdiag_exact(const SphericalCode& c, int threads) {
  if (c.size() < 2) throw std::invalid_argument("max_offdiag: N >= 2 required");
  auto hist = exact_dot_histogram(c, threads);
  const long long n0 = c.exact->norm_sq;
  for (long long k = 2 * n0; k >= 0; --k)
    if (hist[static_cast<std::size_t>(k)] > 0) return Rational(k - n0, n0);
  throw std::logic_error("max_offdiag_exact: empty histogram");
}

double max_offdiag(const SphericalCode& c, int threads) {
  if (c.size() < 2) throw std::invalid_argument("max_offdiag: N >= 2 required");
  if (c.exact) return max_offdiag_exact(c, threads).to_double();
  const long n = c.size();
  double best = -2.0;
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j)
      best = std::max(best, c.points.row(i).dot(c.points.row(j)));
  return best;
}

Census census(const SphericalCode& c, const std::vector<Rational>& refs, double tol,
              int threads) {
  for (std::size_t k = 1; k < refs.size(); ++k)
    if (!(refs[k - 1] < refs[k]))
      throw std::invalid_argument("census: reference values must be strictly sorted");
  if (tol < 0) throw std::invalid_argument("census: tol must be >= 0");
  Census out;
  out.reference_values = refs;
  out.counts.assign(refs.size(), 0);

  const double cap = 0.1;
  if (c.exact) {
    const long long n0 = c.exact->norm_sq;
    auto hist = exact_dot_histogram(c, threads);
    // Exact mode ignores tol: membership is nearest reference within the cap,
    // decided rationally.
    for (long long k = -n0; k <= n0; ++k) {
      long long cnt = hist[static_cast<std::size_t>(k + n0)];
      if (cnt == 0) continue;
      Rational v(k, n0);
      int best = -1;
      Rational best_dev;
      for (std::size_t r = 0; r < refs.size(); ++r) {
        Rational dev = abs(v - refs[r]);
        if (best < 0 || dev < best_dev) {
          best = static_cast<int>(r);
          best_dev = dev;
        }
      }
      if (best >= 0 && best_dev <= Rational(1, 10)) {
        out.counts[static_cast<std::size_t>(best)] += cnt;
        out.max_deviation = std::max(out.max_deviation, best_dev.to_double());
      } else {
        out.catchall += cnt;
      }
    }
    if (out.catchall > 0) {
      // locate one stray pair deterministically for diagnostics
      const IntMatrix& z = c.exact->coords;
      for (long i = 0; i < c.size() && !out.stray; ++i)
        for (long j = 0; j < c.size(); ++j) {
          if (i == j) continue;
          long long d = z.row(i).dot(z.row(j));
          Rational v(d, n0);
          bool in_bucket = false;
          for (const auto& r : refs)
            if (abs(v - r) <= Rational(1, 10)) {
              in_bucket = true;
              break;
            }
          if (!in_bucket) {
            out.stray = std::make_pair(i, j);
            break;
          }
        }
    }
    return out;
  }

  const long n = c.size();
  const int nt = hardware_threads(threads);
  std::vector<double> refd(refs.size());
  for (std::size_t r = 0; r < refs.size(); ++r) refd[r] = refs[r].to_double();
  struct Local {
    std::vector<long long> counts;
    long long catchall = 0;
    double max_dev = 0.0;
    std::optional<std::pair<long, long>> stray;
  };
  std::vector<Local> local(static_cast<std::size_t>(nt));
  for (auto& l : local) l.counts.assign(refs.size(), 0);
  run_partitioned(n, nt, [&](int t, long lo, long hi) {
    Local& l = local[static_cast<std::size_t>(t)];
    for (long i = lo; i < hi; ++i)
      for (long j = 0; j < n; ++j) {
        if (i == j) continue;
        double v = c.points.row(i).dot(c.points.row(j));
        int best = -1;
        double best_dev = 0.0;
        for (std::size_t r = 0; r < refd.size(); ++r) {
          double dev = std::abs(v - refd[r]);
          if (best < 0 || dev < best_dev) {
            best = static_cast<int>(r);
            best_dev = dev;
          }
        }
        if (best >= 0 && best_dev <= cap && best_dev <= tol) {
          ++l.counts[static_cast<std::size_t>(best)];
          l.max_dev = std::max(l.max_dev, best_dev);
        } else {
          ++l.catchall;
          if (!l.stray) l.stray = std::make_pair(i, j);
        }
      }
  });
  for (const auto& l : local) {
    for (std::size_t r = 0; r < refs.size(); ++r) out.counts[r] += l.counts[r];
    out.catchall += l.catchall;
    out.max_deviation = std::max(out.max_deviation, l.max_dev);
    if (!out.stray && l.stray) out.stray = l.stray;
  }
  return out;
}

long long common_neighbor_count(const SphericalCode& c, long i, long j, const Rational& value,
                                double tol) {
  if (i == j) throw std::invalid_argument("common_neighbor_count: i != j required");
  const long n = c.size();
  long long count = 0;
  if (c.exact) {
    const IntMatrix& z = c.exact->coords;
    const long long n0 = c.exact->norm_sq;
    // <z_i, z_k>/n0 == p/q  <=>  q * <z_i, z_k> == p * n0
    const mpz_class target = value.num() * n0;
    const mpz_class q = value.den();
    for (long k = 0; k < n; ++k) {
      if (k == i || k == j) continue;
      if (q * z.row(i).dot(z.row(k)) == target && q * z.row(j).dot(z.row(k)) == target) ++count;
    }
    return count;
  }
  const double v = value.to_double();
  for (long k = 0; k < n; ++k) {
    if (k == i || k == j) continue;
    if (std::abs(c.points.row(i).dot(c.points.row(k)) - v) <= tol &&
        std::abs(c.points.row(j).dot(c.points.row(k)) - v) <= tol)
      ++count;
  }
  return count;
}

}  // namespace spherecode
