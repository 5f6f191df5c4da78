#include "spherecode/perturb.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace spherecode {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double max_offdiag_points(const Eigen::MatrixXd& pts) {
  const long n = pts.rows();
  double best = -2.0;
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j) best = std::max(best, pts.row(i).dot(pts.row(j)));
  return best;
}

SphericalCode with_points(const SphericalCode& c, Eigen::MatrixXd pts, const std::string& tag) {
  SphericalCode out;
  out.dim = c.dim;
  out.points = std::move(pts);
  out.label = c.label + tag;
  return out;
}

double threshold_of(const SphericalCode& c) {
  if (c.threshold) return c.threshold->to_double();
  throw std::invalid_argument("perturb_code: code carries no catalog threshold");
}

}  // namespace

PerturbStrategy parse_strategy(const std::string& name) {
  if (name == "tangent_noise") return PerturbStrategy::tangent_noise;
  if (name == "pair_stretch") return PerturbStrategy::pair_stretch;
  throw std::invalid_argument("unknown perturbation strategy '" + name + "'");
}

std::string strategy_name(PerturbStrategy s) {
  return s == PerturbStrategy::tangent_noise ? "tangent_noise" : "pair_stretch";
}

SphericalCode perturb_code(const SphericalCode& c, double eps, PerturbStrategy strategy,
                           std::uint64_t seed) {
  if (eps < 0) throw std::invalid_argument("perturb_code: eps must be >= 0");
  if (eps == 0.0) return with_points(c, c.points, "");
  const double s = threshold_of(c);
  const double cap = s + eps;
  const long n = c.size();
  const int d = c.dim;
  std::mt19937_64 rng(splitmix64(seed));

  if (strategy == PerturbStrategy::tangent_noise) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd noise(n, d);
    for (long i = 0; i < n; ++i)
      for (int k = 0; k < d; ++k) noise(i, k) = gauss(rng);
    double eta = eps / 8.0;
    for (int attempt = 0; attempt <= 100; ++attempt) {
      Eigen::MatrixXd pts = c.points;
      for (long i = 0; i < n; ++i) {
        Eigen::RowVectorXd g = noise.row(i);
        g -= g.dot(pts.row(i)) * pts.row(i);  // tangent component
        pts.row(i) = (pts.row(i) + eta * g).normalized();
      }
      if (max_offdiag_points(pts) <= cap)
        return with_points(c, std::move(pts), "+tangent_noise");
      eta /= 2.0;
    }
    throw std::runtime_error("perturb_code: could not satisfy the inner-product cap");
  }

  // pair_stretch: rotate one endpoint of selected threshold pairs so their
  // inner product lands exactly at s + eps.
  if (cap >= 1.0)
    throw std::runtime_error("perturb_code: s + eps >= 1 is unreachable for distinct points");
  std::vector<std::pair<long, long>> s_pairs;
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j)
      if (std::abs(c.points.row(i).dot(c.points.row(j)) - s) < 1e-12) s_pairs.emplace_back(i, j);
  if (s_pairs.empty()) throw std::runtime_error("perturb_code: no pairs at the threshold");
  std::shuffle(s_pairs.begin(), s_pairs.end(), rng);

  std::size_t take = std::max<std::size_t>(1, s_pairs.size() / 4);
  for (int attempt = 0; attempt <= 100; ++attempt) {
    Eigen::MatrixXd pts = c.points;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    std::size_t done = 0;
    for (const auto& [i, j] : s_pairs) {
      if (done >= take) break;
      if (used[static_cast<std::size_t>(i)] || used[static_cast<std::size_t>(j)]) continue;
      used[static_cast<std::size_t>(i)] = used[static_cast<std::size_t>(j)] = true;
      Eigen::RowVectorXd x = pts.row(i), y = pts.row(j);
      Eigen::RowVectorXd y_tan = (y - y.dot(x) * x).normalized();
      pts.row(j) = cap * x + std::sqrt(1.0 - cap * cap) * y_tan;
      ++done;
    }
    if (max_offdiag_points(pts) <= cap + 1e-15)
      return with_points(c, std::move(pts), "+pair_stretch");
    take = std::max<std::size_t>(1, take / 2);
    if (take == 1 && attempt > 50) break;
  }
  throw std::runtime_error("perturb_code: could not satisfy the inner-product cap");
}

std::vector<long> solve_assignment(const Eigen::MatrixXd& cost) {
  // Standard potentials + augmenting-path assignment (rows onto columns).
  const long n = cost.rows();
  if (cost.cols() != n) throw std::invalid_argument("solve_assignment: cost must be square");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n + 1)), v(static_cast<std::size_t>(n + 1));
  std::vector<long> way(static_cast<std::size_t>(n + 1)), p(static_cast<std::size_t>(n + 1), 0);
  for (long i = 1; i <= n; ++i) {
    p[0] = i;
    long j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
    std::vector<bool> used(static_cast<std::size_t>(n + 1), false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      long i0 = p[static_cast<std::size_t>(j0)], j1 = 0;
      double delta = inf;
      for (long j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                     v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (long j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      long j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }
  std::vector<long> match(static_cast<std::size_t>(n));
  for (long j = 1; j <= n; ++j)
    if (p[static_cast<std::size_t>(j)] > 0)
      match[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return match;
}

Alignment align_codes(const SphericalCode& a, const SphericalCode& b,
                      const std::vector<long>& matching) {
  const long n = a.size();
  if (b.size() != n || static_cast<long>(matching.size()) != n)
    throw std::invalid_argument("align_codes: size mismatch");
  const int d = a.dim;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (long i = 0; i < n; ++i)
    cov += b.points.row(matching[static_cast<std::size_t>(i)]).transpose() * a.points.row(i);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues()(d - 1) <= 0 && svd.singularValues()(0) <= 0)
    throw std::runtime_error("align_codes: degenerate cross-covariance");
  Alignment out;
  out.rotation = svd.matrixU() * svd.matrixV().transpose();
  double worst = 0.0;
  for (long i = 0; i < n; ++i) {
    double dot = (out.rotation * a.points.row(i).transpose())
                     .dot(b.points.row(matching[static_cast<std::size_t>(i)]).transpose());
    worst = std::max(worst, std::acos(std::clamp(dot, -1.0, 1.0)));
  }
  out.max_spherical_distance = worst;
  return out;
}

Closeness code_closeness(const SphericalCode& a, const SphericalCode& b) {
  const long n = a.size();
  if (b.size() != n || a.dim != b.dim)
    throw std::invalid_argument("code_closeness: codes must share N and d");

  // Pass 1: greedy nearest matching on raw positions.
  std::vector<long> match(static_cast<std::size_t>(n), -1);
  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  for (long i = 0; i < n; ++i) {
    long best = -1;
    double best_dot = -2.0;
    for (long j = 0; j < n; ++j) {
      if (taken[static_cast<std::size_t>(j)]) continue;
      double dot = a.points.row(i).dot(b.points.row(j));
      if (dot > best_dot) {
        best_dot = dot;
        best = j;
      }
    }
    match[static_cast<std::size_t>(i)] = best;
    taken[static_cast<std::size_t>(best)] = true;
  }
  Alignment first = align_codes(a, b, match);

  // Pass 2: optimal assignment on angles after alignment, then re-align.
  Eigen::MatrixXd rotated = a.points * first.rotation.transpose();
  Eigen::MatrixXd cost(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      cost(i, j) = std::acos(std::clamp(rotated.row(i).dot(b.points.row(j)), -1.0, 1.0));
  Closeness out;
  out.matching = solve_assignment(cost);

  double dev = 0.0;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      double ga = a.points.row(i).dot(a.points.row(j));
      double gb = b.points.row(out.matching[static_cast<std::size_t>(i)])
                      .dot(b.points.row(out.matching[static_cast<std::size_t>(j)]));
      dev = std::max(dev, std::abs(ga - gb));
    }
  out.gram_max_dev = dev;
  return out;
}

SweepReport stability_sweep(const SphericalCode& c, const Certificate& cert,
                            const std::vector<double>& eps_list, int trials_per_eps,
                            std::uint64_t seed, int threads) {
  if (eps_list.empty() || trials_per_eps < 1)
    throw std::invalid_argument("stability_sweep: empty grid");
  if (!c.threshold || *c.threshold != cert.s)
    throw std::invalid_argument("stability_sweep: code threshold does not match certificate");

  SweepReport rep;
  rep.trials.resize(eps_list.size() * static_cast<std::size_t>(trials_per_eps));

  auto run_trial = [&](std::size_t ei, int t) {
    const double eps = eps_list[ei];
    const std::uint64_t trial_seed =
        splitmix64(seed ^ splitmix64(0x100 + ei) ^ splitmix64(0x10000 + static_cast<std::uint64_t>(t)));
    PerturbationTrial trial;
    trial.epsilon = eps;
    trial.seed = trial_seed;
    trial.strategy = PerturbStrategy::tangent_noise;
    SphericalCode pert = perturb_code(c, eps, PerturbStrategy::tangent_noise, trial_seed);
    trial.achieved_max_offdiag = max_offdiag_points(pert.points);
    Closeness close = code_closeness(c, pert);
    trial.gram_max_dev = close.gram_max_dev;
    Alignment align = align_codes(c, pert, close.matching);
    trial.aligned_max_angle = align.max_spherical_distance;
    rep.trials[ei * static_cast<std::size_t>(trials_per_eps) + static_cast<std::size_t>(t)] =
        trial;
  };

  int nt = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (nt < 1) nt = 1;
  const long total = static_cast<long>(rep.trials.size());
  std::vector<std::thread> pool;
  std::atomic<long> next{0};
  for (int w = 0; w < std::min<long>(nt, total); ++w)
    pool.emplace_back([&]() {
      for (long k = next.fetch_add(1); k < total; k = next.fetch_add(1))
        run_trial(static_cast<std::size_t>(k) / static_cast<std::size_t>(trials_per_eps),
                  static_cast<int>(k % trials_per_eps));
    });
  for (auto& th : pool) th.join();

  // Median deviation per epsilon, then least-squares in log-log space.
  rep.median_gram_dev.resize(eps_list.size());
  for (std::size_t ei = 0; ei < eps_list.size(); ++ei) {
    std::vector<double> devs;
    for (int t = 0; t < trials_per_eps; ++t)
      devs.push_back(rep.trials[ei * static_cast<std::size_t>(trials_per_eps) +
                                static_cast<std::size_t>(t)]
                         .gram_max_dev);
    std::sort(devs.begin(), devs.end());
    rep.median_gram_dev[ei] = devs[devs.size() / 2];
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long m = 0;
  for (std::size_t ei = 0; ei < eps_list.size(); ++ei) {
    if (eps_list[ei] <= 0 || rep.median_gram_dev[ei] <= 0) continue;
    double x = std::log(eps_list[ei]), y = std::log(rep.median_gram_dev[ei]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2) {
    rep.fitted_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep.fitted_prefactor = std::exp((sy - rep.fitted_exponent * sx) / m);
  }
  return rep;
}

}  // namespace spherecode
