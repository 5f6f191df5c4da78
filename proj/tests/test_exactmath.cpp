#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "spherecode/gegenbauer.hpp"
#include "spherecode/polynomial.hpp"
#include "spherecode/rational.hpp"
#include "spherecode/roots.hpp"

using namespace spherecode;

namespace {

Rational Q(long n, long d = 1) { return Rational(n, d); }

RationalPoly e8_poly() {
  return RationalPoly::from_roots(
      {{Q(-1), 1}, {Q(-1, 2), 2}, {Q(0), 2}, {Q(1, 2), 1}}, Q(320, 3));
}

RationalPoly leech_poly() {
  return RationalPoly::from_roots({{Q(-1), 1},
                                   {Q(-1, 2), 2},
                                   {Q(-1, 4), 2},
                                   {Q(0), 2},
                                   {Q(1, 4), 2},
                                   {Q(1, 2), 1}},
                                  Q(1490944, 15));
}

RationalPoly random_poly(std::mt19937_64& rng, int max_deg) {
  std::uniform_int_distribution<int> deg(0, max_deg);
  std::uniform_int_distribution<long> num(-12, 12);
  std::uniform_int_distribution<long> den(1, 9);
  std::vector<Rational> c(static_cast<std::size_t>(deg(rng)) + 1);
  for (auto& v : c) v = Q(num(rng), den(rng));
  return RationalPoly(std::move(c));
}

// Adaptive Simpson on [a, b]; plain recursion with interval-halving error
// control, used as the quadrature oracle.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int depth = 24) {
  auto simpson = [&f](double lo, double hi) {
    return (hi - lo) / 6.0 * (f(lo) + 4.0 * f((lo + hi) / 2.0) + f(hi));
  };
  std::function<double(double, double, double, int)> rec =
      [&](double lo, double hi, double whole, int d) {
        double mid = (lo + hi) / 2.0;
        double left = simpson(lo, mid), right = simpson(mid, hi);
        if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol)
          return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, left, d - 1) + rec(mid, hi, right, d - 1);
      };
  return rec(a, b, simpson(a, b), depth);
}

}  // namespace

TEST_CASE("rational basics") {
  CHECK(Rational(2, 4) == Q(1, 2));
  CHECK(Rational(-2, -4) == Q(1, 2));
  CHECK(Rational(2, -4) == Q(-1, 2));
  CHECK(Rational::from_string("-3/9") == Q(-1, 3));
  CHECK(Rational::from_string("7").str() == "7");
  CHECK(Q(1, 3).str() == "1/3");
  CHECK((Q(1, 2) + Q(1, 3)) == Q(5, 6));
  CHECK(pow(Q(2, 3), 3) == Q(8, 27));
  CHECK(abs(Q(-5, 4)) == Q(5, 4));
  CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("polynomial arithmetic and division") {
  RationalPoly p({Q(1), Q(2), Q(1)});  // (t+1)^2
  RationalPoly lin({Q(1), Q(1)});
  CHECK(p.exact_divide(lin) == lin);
  CHECK(p(Q(2)) == Q(9));
  CHECK(p.derivative() == RationalPoly({Q(2), Q(2)}));
  auto [q, r] = RationalPoly({Q(1), Q(0), Q(1)}).divide(RationalPoly({Q(1), Q(1)}));
  CHECK(q == RationalPoly({Q(-1), Q(1)}));
  CHECK(r == RationalPoly({Q(2)}));
  CHECK(RationalPoly().is_zero());
}

TEST_CASE("gegenbauer evaluation matches the closed forms") {
  CHECK(gegenbauer_eval(8, 0, Q(3, 7)) == Q(1));
  CHECK(gegenbauer_eval(8, 2, Q(1, 2)) == Q(1, 7));
  CHECK(gegenbauer_eval(24, 2, Q(-1, 4)) == Q(1, 46));
  for (int d = 2; d <= 24; ++d)
    for (int i = 0; i <= 12; ++i) CHECK(gegenbauer_eval(d, i, Q(1)) == Q(1));
}

TEST_CASE("gegenbauer monomial forms") {
  CHECK(gegenbauer_monomial(8, 1) == RationalPoly({Q(0), Q(1)}));
  CHECK(gegenbauer_monomial(8, 2) == RationalPoly({Q(-1, 7), Q(0), Q(8, 7)}));
  CHECK(gegenbauer_monomial(24, 0) == RationalPoly({Q(1)}));
  for (int i = 0; i <= 10; ++i) CHECK(gegenbauer_monomial(11, i).degree() == i);
}

TEST_CASE("expansion of the lattice certificates") {
  GegenbauerExpansion e8 = expand(8, e8_poly());
  std::vector<Rational> want8 = {Q(1),         Q(16, 7),      Q(200, 63), Q(832, 231),
                                 Q(1216, 429), Q(5120, 3003), Q(2560, 4641)};
  REQUIRE(e8.coeffs.size() == want8.size());
  for (std::size_t i = 0; i < want8.size(); ++i) CHECK(e8.coeffs[i] == want8[i]);

  GegenbauerExpansion leech = expand(24, leech_poly());
  std::vector<Rational> want24 = {Q(1),
                                  Q(48, 23),
                                  Q(1144, 425),
                                  Q(12992, 3825),
                                  Q(73888, 22185),
                                  Q(2169856, 687735),
                                  Q(59062016, 25365285),
                                  Q(4472832, 2753575),
                                  Q(23855104, 28956015),
                                  Q(7340032, 20376455),
                                  Q(7340032, 80848515)};
  REQUIRE(leech.coeffs.size() == want24.size());
  for (std::size_t i = 0; i < want24.size(); ++i) CHECK(leech.coeffs[i] == want24[i]);
}

TEST_CASE("expand of a basis element is a unit vector") {
  GegenbauerExpansion e = expand(6, gegenbauer_monomial(6, 3));
  REQUIRE(e.coeffs.size() == 4);
  CHECK(e.coeffs[0] == Q(0));
  CHECK(e.coeffs[1] == Q(0));
  CHECK(e.coeffs[2] == Q(0));
  CHECK(e.coeffs[3] == Q(1));
}

TEST_CASE("reconstruct inverts expand") {
  GegenbauerExpansion one;
  one.dim = 8;
  one.coeffs = {Q(1)};
  CHECK(reconstruct(one) == RationalPoly({Q(1)}));

  GegenbauerExpansion t;
  t.dim = 24;
  t.coeffs = {Q(0), Q(1)};
  CHECK(reconstruct(t) == RationalPoly({Q(0), Q(1)}));

  CHECK(reconstruct(expand(8, e8_poly())) == e8_poly());

  std::mt19937_64 rng(20260810);
  for (int trial = 0; trial < 100; ++trial) {
    RationalPoly p = random_poly(rng, 12);
    int dim = 2 + static_cast<int>(rng() % 23);
    CHECK(reconstruct(expand(dim, p)) == p);
  }
}

TEST_CASE("gegenbauer orthogonality under the weight, by quadrature") {
  for (int d = 2; d <= 24; ++d) {
    for (int i = 0; i <= 10; ++i)
      for (int j = i + 1; j <= 10; ++j) {
        // substitute t = cos(theta): the weight becomes sin(theta)^(d-2)
        auto f = [d, i, j](double theta) {
          double t = std::cos(theta);
          return gegenbauer_eval(d, i, t) * gegenbauer_eval(d, j, t) *
                 std::pow(std::sin(theta), d - 2);
        };
        double integral = adaptive_simpson(f, 0.0, M_PI, 1e-13);
        CHECK(std::abs(integral) < 1e-10);
      }
  }
}

TEST_CASE("nonpositivity of the e8 certificate polynomial") {
  auto ok = nonpositive_on_interval(e8_poly(), Q(-1), Q(1, 2));
  CHECK(ok.holds);

  auto bad = nonpositive_on_interval(e8_poly(), Q(-1), Q(3, 4));
  CHECK_FALSE(bad.holds);
  REQUIRE(bad.witness.has_value());
  CHECK(*bad.witness > Q(1, 2));
  CHECK(*bad.witness <= Q(3, 4));
  CHECK(e8_poly()(*bad.witness) > Q(0));

  auto sq = nonpositive_on_interval(RationalPoly({Q(0), Q(0), Q(1)}), Q(-1), Q(1));
  CHECK_FALSE(sq.holds);
  REQUIRE(sq.witness.has_value());
  CHECK(*sq.witness != Q(0));

  CHECK(nonpositive_on_interval(RationalPoly(), Q(-1), Q(1)).holds);
  CHECK(nonpositive_on_interval(leech_poly(), Q(-1), Q(1, 2)).holds);
}

TEST_CASE("nonpositivity agrees with dense sampling") {
  std::mt19937_64 rng(424242);
  int false_count = 0;
  for (int trial = 0; trial < 50; ++trial) {
    RationalPoly p = random_poly(rng, 8);
    if (p.is_zero()) continue;
    auto verdict = nonpositive_on_interval(p, Q(-1), Q(1));
    bool sampled_positive = false;
    for (int k = 0; k <= 10000; ++k) {
      double t = -1.0 + 2.0 * k / 10000.0;
      if (p.eval_double(t) > 1e-12) {
        sampled_positive = true;
        break;
      }
    }
    if (verdict.holds) {
      CHECK_FALSE(sampled_positive);
    } else {
      ++false_count;
      REQUIRE(verdict.witness.has_value());
      CHECK(p(*verdict.witness) > Q(0));
    }
  }
  CHECK(false_count > 0);  // the random family must exercise both branches
}

TEST_CASE("root isolation with multiplicities") {
  RootList e8 = real_roots_with_multiplicity(e8_poly(), Q(-1), Q(1, 2));
  REQUIRE(e8.entries.size() == 4);
  CHECK(e8.entries[0].exact);
  CHECK(e8.entries[0].value == Q(-1));
  CHECK(e8.entries[0].multiplicity == 1);
  CHECK(e8.entries[1].value == Q(-1, 2));
  CHECK(e8.entries[1].multiplicity == 2);
  CHECK(e8.entries[2].value == Q(0));
  CHECK(e8.entries[2].multiplicity == 2);
  CHECK(e8.entries[3].value == Q(1, 2));
  CHECK(e8.entries[3].multiplicity == 1);

  RootList leech = real_roots_with_multiplicity(leech_poly(), Q(-1), Q(1, 2));
  REQUIRE(leech.entries.size() == 6);
  std::vector<std::pair<Rational, int>> want = {{Q(-1), 1},    {Q(-1, 2), 2}, {Q(-1, 4), 2},
                                                {Q(0), 2},     {Q(1, 4), 2},  {Q(1, 2), 1}};
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(leech.entries[i].exact);
    CHECK(leech.entries[i].value == want[i].first);
    CHECK(leech.entries[i].multiplicity == want[i].second);
  }
}

TEST_CASE("irrational roots are boxed tightly") {
  RationalPoly p({Q(-2), Q(0), Q(1)});  // t^2 - 2
  RootList roots = real_roots_with_multiplicity(p, Q(0), Q(2));
  REQUIRE(roots.entries.size() == 1);
  const auto& r = roots.entries[0];
  CHECK_FALSE(r.exact);
  CHECK(r.multiplicity == 1);
  CHECK(r.lo.to_double() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r.hi - r.lo <= Q(1, 1000000));
  CHECK(r.lo * r.lo < Q(2));
  CHECK(r.hi * r.hi > Q(2));
}

TEST_CASE("repeated and endpoint roots") {
  // (t - 1/3)^3 (t + 2)^2
  RationalPoly p = RationalPoly::from_roots({{Q(1, 3), 3}, {Q(-2), 2}}, Q(1));
  RootList roots = real_roots_with_multiplicity(p, Q(-2), Q(1));
  REQUIRE(roots.entries.size() == 2);
  CHECK(roots.entries[0].value == Q(-2));
  CHECK(roots.entries[0].multiplicity == 2);
  CHECK(roots.entries[1].value == Q(1, 3));
  CHECK(roots.entries[1].multiplicity == 3);

  CHECK(count_distinct_roots(p, Q(0), Q(1)) == 1);
  CHECK(count_distinct_roots(p, Q(-3), Q(-2)) == 1);
}

TEST_CASE("simplest rational in an interval") {
  CHECK(simplest_rational_between(Q(1, 3), Q(1, 2)) == Q(2, 5));
  CHECK(simplest_rational_between(Q(-1, 2), Q(1, 3)) == Q(0));
  CHECK(simplest_rational_between(Q(5, 2), Q(7, 2)) == Q(3));
  CHECK(simplest_rational_between(Q(-7, 2), Q(-5, 2)) == Q(-3));
  Rational v = simplest_rational_between(Q(499999, 1000000), Q(500001, 1000000));
  CHECK(v == Q(1, 2));
}
