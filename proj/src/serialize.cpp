#include "spherecode/serialize.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spherecode {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json rationals_to_json(const std::vector<Rational>& v) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : v) arr.push_back(r.str());
  return arr;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string poly_to_json(const RationalPoly& p, int dim) {
  ordered_json j;
  j["basis"] = "monomial";
  j["dim"] = dim;
  j["coeffs"] = rationals_to_json(p.coeffs());
  return j.dump();
}

std::string expansion_to_json(const GegenbauerExpansion& e) {
  ordered_json j;
  j["basis"] = "gegenbauer";
  j["dim"] = e.dim;
  j["coeffs"] = rationals_to_json(e.coeffs);
  return j.dump();
}

std::string certificate_to_json(int dim, const Rational& s,
                                const std::vector<Rational>& coeffs) {
  ordered_json j;
  j["dim"] = dim;
  j["s"] = s.str();
  j["coeffs"] = rationals_to_json(coeffs);
  return j.dump();
}

CertificateFile read_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open certificate file '" + path + "'");
  ordered_json j = ordered_json::parse(in);
  CertificateFile f;
  f.dim = j.at("dim").get<int>();
  f.s = Rational::from_string(j.at("s").get<std::string>());
  f.expansion.dim = f.dim;
  for (const auto& c : j.at("coeffs"))
    f.expansion.coeffs.push_back(Rational::from_string(c.get<std::string>()));
  return f;
}

void write_certificate(const std::string& path, int dim, const Rational& s,
                       const std::vector<Rational>& coeffs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write certificate file '" + path + "'");
  out << certificate_to_json(dim, s, coeffs) << "\n";
}

void write_code(const std::string& path, const SphericalCode& c) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write code file '" + path + "'");
  const bool exact = c.exact.has_value();
  out << c.dim << " " << c.size() << " " << (exact ? "exact" : "float") << "\n";
  if (exact) {
    const IntMatrix& z = c.exact->coords;
    for (long i = 0; i < z.rows(); ++i) {
      for (long k = 0; k < z.cols(); ++k) out << (k ? " " : "") << z(i, k);
      out << "\n";
    }
    out << "/sqrt(" << c.exact->norm_sq << ")\n";
  } else {
    for (long i = 0; i < c.points.rows(); ++i) {
      for (long k = 0; k < c.points.cols(); ++k)
        out << (k ? " " : "") << format_double(c.points(i, k));
      out << "\n";
    }
  }
}

SphericalCode read_code(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open code file '" + path + "'");
  int dim;
  long n;
  std::string mode;
  if (!(in >> dim >> n >> mode)) throw std::runtime_error("malformed code header in " + path);
  std::string rest;
  std::getline(in, rest);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::string annotation;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '/') {
      annotation = line;
      break;
    }
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    rows.push_back(std::move(toks));
  }
  if (static_cast<long>(rows.size()) != n)
    throw std::runtime_error("code file row count mismatch in " + path);
  SphericalCode c;
  c.dim = dim;
  if (mode == "exact") {
    if (annotation.rfind("/sqrt(", 0) != 0)
      throw std::runtime_error("exact code file missing /sqrt(n0) line in " + path);
    long long n0 = std::stoll(annotation.substr(6, annotation.size() - 7));
    ExactModel m;
    m.norm_sq = n0;
    m.coords.resize(n, static_cast<long>(rows[0].size()));
    for (long i = 0; i < n; ++i)
      for (std::size_t k = 0; k < rows[static_cast<std::size_t>(i)].size(); ++k)
        m.coords(i, static_cast<long>(k)) =
            std::stoll(rows[static_cast<std::size_t>(i)][k]);
    c.exact = std::move(m);
    // reconstruct float points the same way generate() does
    Eigen::MatrixXd zd =
        c.exact->coords.cast<double>() / std::sqrt(static_cast<double>(n0));
    if (c.exact->coords.cols() == dim) {
      c.points = zd;
    } else {
      Eigen::MatrixXd basis(dim, c.exact->coords.cols());
      int have = 0;
      for (long i = 0; i < n && have < dim; ++i) {
        Eigen::VectorXd v = zd.row(i).transpose();
        for (int k = 0; k < have; ++k) v -= basis.row(k).dot(v) * basis.row(k).transpose();
        double nv = v.norm();
        if (nv > 1e-9) basis.row(have++) = (v / nv).transpose();
      }
      if (have < dim) throw std::runtime_error("exact code rows do not span dim in " + path);
      c.points = zd * basis.transpose();
    }
  } else if (mode == "float") {
    c.points.resize(n, dim);
    for (long i = 0; i < n; ++i) {
      if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != dim)
        throw std::runtime_error("float code row width mismatch in " + path);
      for (int k = 0; k < dim; ++k)
        c.points(i, k) = std::stod(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
    }
  } else {
    throw std::runtime_error("unknown code mode '" + mode + "' in " + path);
  }
  c.label = path;
  return c;
}

std::string census_to_csv(const Census& c) {
  std::ostringstream out;
  out << "alpha,count,max_deviation\n";
  for (std::size_t r = 0; r < c.reference_values.size(); ++r)
    out << c.reference_values[r].str() << "," << c.counts[r] << ","
        << format_double(c.max_deviation) << "\n";
  if (c.catchall > 0) out << "catchall," << c.catchall << ",\n";
  return out.str();
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix file '" + path + "'");
  for (long i = 0; i < m.rows(); ++i) {
    for (long j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << "\n";
  }
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("empty matrix file " + path);
  Eigen::MatrixXd m(static_cast<long>(rows.size()), static_cast<long>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size())
      throw std::runtime_error("ragged matrix file " + path);
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<long>(i), static_cast<long>(j)) = rows[i][j];
  }
  return m;
}

std::string sqrt_alignment_to_json(const SqrtAlignment& a) {
  ordered_json j;
  j["delta"] = a.delta;
  j["Delta"] = a.Delta;
  j["K"] = a.K;
  j["max_dev"] = a.max_dev;
  j["bound"] = a.K * a.delta;
  j["margin"] = a.K * a.delta - a.max_dev;
  j["bound_satisfied"] = a.bound_satisfied;
  return j.dump();
}

std::string weak_constants_to_json(const WeakStabilityConstants& w) {
  ordered_json j;
  j["m"] = w.m;
  j["r"] = w.r.str();
  j["M"] = w.M_is_exact ? ordered_json(w.M_exact.str()) : ordered_json(w.M);
  j["M_full_interval"] =
      w.M_full_is_exact ? ordered_json(w.M_full_exact.str()) : ordered_json(w.M_full);
  j["Mprime"] = w.Mprime_is_exact ? ordered_json(w.Mprime_exact.str()) : ordered_json(w.Mprime);
  j["K"] = w.K;
  j["eps_count"] = w.eps_count;
  j["eps_geom"] = w.eps_geom;
  return j.dump();
}

std::string tightness_to_json(const TightnessReport& r) {
  ordered_json j;
  j["applicable"] = r.applicable;
  if (r.applicable) {
    j["lp_slack"] = r.lp_slack.str();
    ordered_json sums = ordered_json::array();
    for (const auto& s : r.component_sums) sums.push_back(s.str());
    j["component_sums"] = sums;
    j["is_tight"] = r.is_tight;
  }
  return j.dump();
}

std::string sweep_to_csv(const SweepReport& r) {
  std::ostringstream out;
  out << "epsilon,trial,gram_max_dev,aligned_max_angle\n";
  std::size_t idx = 0;
  double last_eps = -1.0;
  int trial = 0;
  for (const auto& t : r.trials) {
    if (t.epsilon != last_eps) {
      trial = 0;
      last_eps = t.epsilon;
    }
    out << format_double(t.epsilon) << "," << trial++ << "," << format_double(t.gram_max_dev)
        << "," << format_double(t.aligned_max_angle) << "\n";
    ++idx;
  }
  return out.str();
}

std::string sweep_summary_to_json(const SweepReport& r) {
  ordered_json j;
  j["fitted_exponent"] = r.fitted_exponent;
  j["fitted_prefactor"] = r.fitted_prefactor;
  j["median_gram_dev"] = r.median_gram_dev;
  return j.dump();
}

std::string sweep_plot_data(const std::vector<double>& eps_list, const SweepReport& r) {
  std::ostringstream out;
  out << "# epsilon median_gram_max_dev\n";
  for (std::size_t i = 0; i < eps_list.size() && i < r.median_gram_dev.size(); ++i)
    out << format_double(eps_list[i]) << " " << format_double(r.median_gram_dev[i]) << "\n";
  return out.str();
}

}  // namespace spherecode
