#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "primemean/error.hpp"
#include "primemean/model_spec.hpp"
#include "primemean/primesums.hpp"

using namespace pmean;

TEST_CASE("expression grammar") {
  CHECK(Expression::parse("1 + 2 * 3").evaluate(0, 0) == 7);
  CHECK(Expression::parse("(1 + 2) * 3").evaluate(0, 0) == 9);
  CHECK(Expression::parse("2 ^ 3 ^ 2").evaluate(0, 0) == 512);
  CHECK(Expression::parse("-2 ^ 2").evaluate(0, 0) == -4);
  CHECK(Expression::parse("p - 1").evaluate(7, 0) == 6);
  CHECK(Expression::parse("p^a - p^(a-1)").evaluate(3, 2) == 6);
  CHECK(Expression::parse("p × 2 ÷ 4").evaluate(6, 0) == 3);
  CHECK(Expression::parse("p − 1").evaluate(5, 0) == 4);
  CHECK(Expression::parse("a + 1").uses_a());
  CHECK_FALSE(Expression::parse("p + 1").uses_a());
  for (const char* bad : {"", "1 +", "(p", "p)", "x", "2 ** 3", "p 1"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(Expression::parse(bad), InvalidArgument);
  }
}

TEST_CASE("custom phi matches the built-in model") {
  const PrimeModel custom = parse_model_spec(R"(# Euler totient
name = my_phi
d = 1
alpha = 1
delta = 1
K = 1
f(p) = p - 1
f(p^a) = p^a - p^(a-1)
)");
  CHECK(custom.name() == "my_phi");
  CHECK_FALSE(custom.strongly_multiplicative());
  const PrimeModel phi = builtin("euler_phi");
  for (Integer n : {1, 4, 10, 999, 5000})
    CHECK(log_geomean_identity(custom, n).value == doctest::Approx(log_geomean_identity(phi, n).value));
  CHECK(custom.identity() != phi.identity());
}

TEST_CASE("strongly multiplicative custom model") {
  const PrimeModel m = parse_model_spec("name = k2\nd = 2\nalpha = 1\ndelta = inf\nK = 0\nf(p) = p^2\n");
  CHECK(m.strongly_multiplicative());
  CHECK(m.exact_leading());
  const PrimeModel kappa = builtin("kappa");
  CHECK(log_geomean_identity(m, 1000).value == doctest::Approx(2 * log_geomean_identity(kappa, 1000).value));
}

TEST_CASE("invalid model files") {
  const char* base = "name = x\nd = 1\nalpha = 1\ndelta = 1\nK = 1\n";
  CHECK_THROWS_AS(parse_model_spec(std::string(base)), InvalidArgument);                     // no f(p)
  CHECK_THROWS_AS(parse_model_spec(std::string(base) + "f(p) = p - 1\ncolour = red\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_model_spec(std::string(base) + "f(p) = p - 1\nf(p) = p\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_model_spec(std::string(base) + "f(p) = p - a\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_model_spec(std::string(base) + "f(p) = 1 - p\n"), InvalidArgument);  // not positive
  CHECK_THROWS_AS(parse_model_spec(std::string(base) + "f(p) = p - 1\nf(p^a) = p^a\n"), InvalidArgument);
  // declared K too small for the observed error
  CHECK_THROWS_AS(parse_model_spec("name = x\nd = 1\nalpha = 1\ndelta = 1\nK = 1\nf(p) = p - 3\n"),
                  InvalidArgument);
  CHECK_THROWS_AS(parse_model_spec("name = x\nd = one\nalpha = 1\ndelta = 1\nK = 1\nf(p) = p\n"),
                  InvalidArgument);
  CHECK_THROWS_AS(parse_model_spec("just words\n"), InvalidArgument);
  CHECK_THROWS_AS(load_model_file("/nonexistent/model.txt"), InvalidArgument);
}

TEST_CASE("load from file") {
  const std::string path = (std::filesystem::temp_directory_path() / "pmean-model-test.txt").string();
  {
    std::ofstream out(path);
    out << "name = sig\nd = 1\nalpha = 1\ndelta = 1\nK = 1\nf(p) = p + 1\nf(p^a) = (p^(a+1) - 1) / (p - 1)\n";
  }
  const PrimeModel m = load_model_file(path);
  std::filesystem::remove(path);
  CHECK(log_geomean_identity(m, 3000).value == doctest::Approx(log_geomean_identity(builtin("sigma"), 3000).value));
}
