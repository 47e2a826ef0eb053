#include <doctest.h>

#include <cmath>
#include <random>

#include "primemean/error.hpp"
#include "primemean/series.hpp"
#include "series_oracles.hpp"

using namespace pmean;
using namespace oracle;

TEST_CASE("series_exp round trips through the formal log, order 12") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Q> e(kMaxSeriesOrder);
    for (auto& x : e) x = random_rational(rng);
    const std::vector<Q> g = series_exp<Q>(e);
    REQUIRE(g.size() == e.size() + 1);
    CHECK(g[0] == 1);
    CHECK(formal_log(g) == e);
    CHECK(g == exp_by_powers(e));
  }
}

TEST_CASE("series_exp small cases") {
  // exp(x) = 1 + x + x^2/2 + x^3/6
  CHECK(series_exp<Q>({1, 0, 0}) == std::vector<Q>{1, 1, Q(1, 2), Q(1, 6)});
  CHECK(series_exp<Q>({}) == std::vector<Q>{1});
  const auto gd = series_exp<double>({0.5, -0.25});
  CHECK(gd[1] == 0.5);
  CHECK(gd[2] == doctest::Approx(-0.25 + 0.125));
  CHECK_THROWS_AS(series_exp<Q>(std::vector<Q>(13, Q(1))), InvalidArgument);
}

TEST_CASE("L_j recurrence") {
  for (int r = 2; r <= kMaxSeriesOrder; ++r)
    for (int j = 2; j <= r; ++j) {
      CAPTURE(j);
      CAPTURE(r);
      CHECK(lj_recurrence_check(j, r));
    }
  CHECK(lj_recurrence_check(2, 6));
  CHECK(lj_recurrence_check(3, 8));
  CHECK(lj_recurrence_check(5, 5));
}

TEST_CASE("li and L_j coefficients") {
  CHECK(li_coeffs<Q>(5) == std::vector<Q>{1, 1, 2, 6, 24});
  CHECK(lj_coeffs<Q>(3, 6) == std::vector<Q>{1, 3, 12, 60});
  CHECK(lj_coeffs<Q>(1, 4) == li_coeffs<Q>(4));
  CHECK_THROWS_AS(li_coeffs<Q>(0), InvalidArgument);
  CHECK_THROWS_AS(li_coeffs<Q>(13), InvalidArgument);
  CHECK_THROWS_AS(lj_coeffs<Q>(5, 4), InvalidArgument);
}

TEST_CASE("s2 coefficients match symbolic reassembly") {
  std::mt19937_64 rng(99);
  for (int r = 1; r <= 6; ++r)
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Q> d(r + 1);
      for (auto& x : d) x = random_rational(rng);
      CHECK(s2_coeffs_from_d<Q>(d) == s2_reassembled(d));
    }
  // d = (1, 0, ...): only L_1 = li contributes, c_i = -(i-1)!
  CHECK(s2_coeffs_from_d<Q>({1, 0, 0, 0}) == std::vector<Q>{-1, -1, -2});
  CHECK_THROWS_AS(s2_coeffs_from_d<Q>({Q(1)}), InvalidArgument);
}

TEST_CASE("leading-order evaluator") {
  const PrimeModel kappa = builtin("kappa");
  Expansion<double> ex;
  ex.e = {1.0};
  CHECK(theorem1_eval(kappa, 0.25, ex, 1000) == doctest::Approx(250.0));
  const PrimeModel two = builtin("two_omega");
  const double L = std::log(1e6);
  CHECK(theorem1_eval(two, 2.0, ex, 1'000'000) == doctest::Approx(2.0 * std::pow(L, std::log(2.0))));
  ex.e = {1.0, 0.5, -2.0};
  CHECK(theorem1_log_eval(kappa, 0.25, ex, 1000) ==
        doctest::Approx(std::log(0.25) + std::log(1000.0) +
                        std::log(1 + 0.5 / std::log(1000.0) - 2 / std::pow(std::log(1000.0), 2))));
  CHECK_THROWS_AS(theorem1_eval(kappa, 0.25, ex, 2), InvalidArgument);
  ex.e = {2.0};
  CHECK_THROWS_AS(theorem1_eval(kappa, 0.25, ex, 100), InvalidArgument);
}

TEST_CASE("expansion evaluation") {
  Expansion<double> ex{1.0, 0.5, {2.0, 3.0}};
  const double n = 1e5, L = std::log(n);
  CHECK(ex(n) == doctest::Approx(L + 0.5 * std::log(L) + 2.0 + 3.0 / L));
  CHECK(ex.order() == 1);
}
