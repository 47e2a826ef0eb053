#include <doctest.h>

#include <cmath>
#include <random>

#include "primemean/error.hpp"
#include "primemean/fit.hpp"

using namespace pmean;

namespace {

std::vector<FitSample> synthetic(const std::vector<double>& c, double c0, Integer lo, Integer hi, std::size_t m) {
  std::vector<FitSample> out;
  for (std::size_t i = 0; i < m; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(m - 1);
    const auto n = static_cast<Integer>(std::llround(std::exp(std::log(lo) + t * std::log(double(hi) / lo))));
    const double L = std::log(static_cast<double>(n));
    double v = c0, inv = 1;
    for (double cj : c) {
      inv /= L;
      v += cj * inv;
    }
    out.push_back({n, v});
  }
  return out;
}

}  // namespace

TEST_CASE("basis members are recovered") {
  const auto s = synthetic({0, 1}, 0, 10'000, 100'000'000, 12);
  const FitResult f = fit_coefficients(s, 2);
  REQUIRE(f.coefficients.size() == 2);
  CHECK(f.coefficients[0] == doctest::Approx(0).scale(1));
  CHECK(f.coefficients[1] == doctest::Approx(1).epsilon(1e-9));
  CHECK(f.residual_norm < 1e-12);
  CHECK(f.window.n_min == 10'000);
  CHECK(f.window.n_max == 100'000'000);
  CHECK(f.window.points == 12);
  CHECK_FALSE(f.with_constant);
}

TEST_CASE("random coefficients recovered with and without a constant") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int order = 1; order <= 3; ++order)
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> c(order);
      for (auto& x : c) x = u(rng);
      const double c0 = u(rng);
      const FitResult with = fit_coefficients(synthetic(c, c0, 1000, 100'000'000, 20), order, true);
      CHECK(with.coefficients[0] == doctest::Approx(c0).epsilon(1e-6));
      for (int j = 0; j < order; ++j) CHECK(with.coefficients[j + 1] == doctest::Approx(c[j]).epsilon(1e-5));
      const FitResult without = fit_coefficients(synthetic(c, 0, 1000, 100'000'000, 20), order);
      for (int j = 0; j < order; ++j) CHECK(without.coefficients[j] == doctest::Approx(c[j]).epsilon(1e-6));
    }
}

TEST_CASE("constant-only fit is the mean") {
  std::vector<FitSample> s{{1000, 1.0}, {2000, 2.0}, {3000, 3.0}};
  const FitResult f = fit_coefficients(s, 0, true);
  REQUIRE(f.coefficients.size() == 1);
  CHECK(f.coefficients[0] == doctest::Approx(2.0));
  CHECK(f.residual_norm == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("preconditions and conditioning") {
  const auto s = synthetic({1}, 0, 10'000, 100'000, 3);
  CHECK_THROWS_AS(fit_coefficients(s, 2), InvalidArgument);
  CHECK_THROWS_AS(fit_coefficients({{50, 1.0}, {60, 1.0}, {70, 1.0}}, 1), InvalidArgument);
  CHECK_THROWS_AS(fit_coefficients({{500, 1.0}, {500, 1.0}, {700, 1.0}}, 1), InvalidArgument);
  CHECK_THROWS_AS(fit_coefficients(s, 13), InvalidArgument);
  // order 10 over a narrow window is hopeless
  try {
    (void)fit_coefficients(synthetic({1}, 0, 1'000'000, 1'000'100, 40), 10, true);
    FAIL("expected IllConditioned");
  } catch (const IllConditioned& e) {
    CHECK(e.condition() > kMaxCondition);
    CHECK(e.exit_code() == 5);
  }
}
