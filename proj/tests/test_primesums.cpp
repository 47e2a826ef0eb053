#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "primemean/checkpoint_cache.hpp"
#include "primemean/error.hpp"
#include "primemean/primesums.hpp"

using namespace pmean;

namespace {

const char* const kModels[] = {"kappa", "two_omega", "euler_phi", "sigma", "divisor_d", "jordan_2"};

SumsReport run(const std::string& model, std::vector<Integer> points, unsigned threads = 1,
               Integer segment = kDefaultSegmentSize) {
  SumsOptions opt;
  opt.threads = threads;
  opt.segment_size = segment;
  return sums_stream(builtin(model), CheckpointGrid(std::move(points)), opt);
}

}  // namespace

TEST_CASE("sums at n = 10") {
  const auto rep = run("kappa", {10});
  REQUIRE(rep.rows.size() == 1);
  const auto& r = rep.rows[0];
  CHECK(r.n == 10);
  CHECK(r.s1 == 11);
  CHECK(r.s2.value() == doctest::Approx(std::log(151200.0)).epsilon(1e-14));
  CHECK(r.s2.value() == doctest::Approx(11.926359).epsilon(1e-7));
  CHECK(r.s3.value() == 0.0);
  CHECK(r.f1.value() == doctest::Approx(1.0 / 3 + 3.0 / 7).epsilon(1e-14));
  CHECK(r.f2.value() == doctest::Approx(1.0 / 3 + 3.0 / 7 + 0.5 + 0.25 + 1.0 / 9).epsilon(1e-14));
  CHECK(r.f2.value() == doctest::Approx(1.623016).epsilon(1e-6));
  CHECK(r.r.value() == doctest::Approx(std::log(3.0) / 3 + 3 * std::log(7.0) / 7).epsilon(1e-14));
  CHECK(r.m.value() == doctest::Approx(1.312652).epsilon(1e-6));
  CHECK(r.u.value() == doctest::Approx(22.0 / 3).epsilon(1e-14));
  CHECK(rep.has_u);
  CHECK(r.err_bound() < 1e-13);
}

TEST_CASE("identity and brute force examples") {
  const SpfTable t = spf_build(100);
  CHECK(log_geomean_identity(builtin("kappa"), 10).value == doctest::Approx(std::log(151200.0)));
  CHECK(log_geomean_identity(builtin("euler_phi"), 4).value == doctest::Approx(std::log(4.0)));
  CHECK(log_geomean_bruteforce(builtin("kappa"), 10, t).value == doctest::Approx(std::log(151200.0)));
  CHECK(log_geomean_bruteforce(builtin("divisor_d"), 4, t).value == doctest::Approx(std::log(12.0)));
  // 2^omega over 1..6 is 1, 2, 2, 2, 2, 4 with product 64
  CHECK(log_geomean_bruteforce(builtin("two_omega"), 6, t).value == doctest::Approx(6 * std::log(2.0)));
  CHECK(log_geomean_identity(builtin("two_omega"), 6).value == doctest::Approx(6 * std::log(2.0)));
  for (const char* m : kModels) {
    CHECK(log_geomean_identity(builtin(m), 1).value == 0.0);
    CHECK(log_geomean_bruteforce(builtin(m), 1, t).value == 0.0);
  }
}

TEST_CASE("identity equals brute force for n <= 2000") {
  const SpfTable t = spf_build(2000);
  const auto primes = primes_up_to(2000);
  for (const char* m : kModels) {
    const PrimeModel model = builtin(m);
    for (Integer n = 1; n <= 2000; ++n) {
      const double a = log_geomean_identity(model, n, primes).value;
      const double b = log_geomean_bruteforce(model, n, t).value;
      if (std::abs(a - b) > 1e-9 * std::max<double>(1, n)) {
        FAIL_CHECK(m << " n=" << n << " identity " << a << " brute " << b);
      }
    }
  }
}

TEST_CASE("small helpers") {
  const SpfTable t = spf_build(1000);
  CHECK(omega_summatory(10, t) == 11);
  CHECK(omega_summatory(1, t) == 0);
  CHECK(omega_summatory(30, t) == run("kappa", {30}).rows[0].s1);
  CHECK(u_of_x(10, t).value == doctest::Approx(22.0 / 3));
  CHECK(u_of_x(2, t).value == 1.0);
  CHECK(u_of_x(4, t).value == doctest::Approx(2.5));
  CHECK_THROWS_AS(u_of_x(1, t), InvalidArgument);
  CHECK(r_sum(10).value == doctest::Approx(1.200165).epsilon(1e-6));
  CHECK(r_sum(2).value == 0.0);
  CHECK(mertens_m_of_x(10).value == doctest::Approx(1.312652).epsilon(1e-6));
  CHECK(mertens_m_of_x(2).value == doctest::Approx(std::log(2.0) / 2));
  const std::vector<Integer> xs{2, 10, 319};
  const auto ms = mertens_m_at(xs);
  CHECK(ms[1] == mertens_m_of_x(10).value);
  CHECK(ms[2] == mertens_m_of_x(319).value);
}

TEST_CASE("Rosser-Schoenfeld examples") {
  const double E = -1.332582275733220;
  CHECK(rs_inequality_detail(319, mertens_m_of_x(319).value, E).holds());
  CHECK(rs_inequality_detail(319, mertens_m_of_x(319).value, E).right_applies);
  CHECK(rs_inequality_check(1'000'000, E));
  const RsCheck small = rs_inequality_detail(10, mertens_m_of_x(10).value, E);
  CHECK(small.left);
  CHECK_FALSE(small.right_applies);
  CHECK(small.holds());
  // a value outside the band is rejected
  CHECK_FALSE(rs_inequality_detail(1000, std::log(1000.0) + E + 1.0, E).holds());
}

TEST_CASE("exact identities for every n <= 1000") {
  const SpfTable t = spf_build(1000);
  const PrimeModel kappa = builtin("kappa");
  for (Integer lo = 2; lo <= 1000; lo += 64) {
    std::vector<Integer> pts;
    for (Integer n = lo; n < lo + 64 && n <= 1000; ++n) pts.push_back(n);
    for (const auto& row : run("kappa", pts).rows) {
      CHECK(omega_summatory(row.n, t) == row.s1);
      CHECK(row.s2.value() == doctest::Approx(log_geomean_bruteforce(kappa, row.n, t).value).epsilon(1e-13));
      const double n = static_cast<double>(row.n);
      CHECK(std::abs(row.s2.value() - (n * row.m.value() - row.r.value())) <= 1e-9 * n);
      CHECK(row.u.value() == doctest::Approx(u_of_x(row.n, t).value).epsilon(1e-13));
    }
  }
}

TEST_CASE("exact identities at random n <= 1e5") {
  std::mt19937_64 rng(7);
  std::set<Integer> pts;
  while (pts.size() < 64) pts.insert(2 + rng() % 99'999);
  const SpfTable t = spf_build(100'000);
  const PrimeModel kappa = builtin("kappa");
  for (const auto& row : run("kappa", {pts.begin(), pts.end()}).rows) {
    CHECK(omega_summatory(row.n, t) == row.s1);
    CHECK(std::abs(row.s2.value() - log_geomean_bruteforce(kappa, row.n, t).value) <= 1e-9 * row.n);
  }
}

TEST_CASE("decomposition and monotonicity invariants") {
  const auto grid = CheckpointGrid::log_spaced(2, 200'000, 40);
  const std::vector<Integer> pts(grid.points().begin(), grid.points().end());
  const auto primes = primes_up_to(200'000);
  for (const char* m : kModels) {
    CAPTURE(m);
    const PrimeModel model = builtin(m);
    const auto rep = run(m, pts);
    const CheckpointSums* prev = nullptr;
    for (const auto& row : rep.rows) {
      const double n = static_cast<double>(row.n);
      const double identity = log_geomean_identity(model, row.n, primes).value;
      CHECK(row.n_log_g.value() == doctest::Approx(identity).epsilon(1e-12));
      if (model.strongly_multiplicative()) CHECK(std::abs(prime_log_sum(model, row) - identity) <= 1e-10 * n);
      // F2 - F1 lies in [0, #{p^a <= n : a >= 2}]
      Integer powers = 0;
      for (Integer p : primes) {
        if (p * p > row.n) break;
        for (Integer q = p * p; q <= row.n; q *= p) ++powers;
      }
      CHECK(row.f2.value() - row.f1.value() >= 0.0);
      CHECK(row.f2.value() - row.f1.value() <= static_cast<double>(powers));
      if (prev) {
        CHECK(row.s1 >= prev->s1);
        CHECK(row.s2.value() >= prev->s2.value());
        CHECK(row.m.value() >= prev->m.value());
        CHECK(row.u.value() >= prev->u.value());
      }
      prev = &row;
    }
  }
}

TEST_CASE("thread count and segment size do not change the bits") {
  const std::vector<Integer> pts{100, 5'000, 77'777, 1'000'000, 3'000'000};
  const auto base = encode_report(run("euler_phi", pts, 1));
  CHECK(encode_report(run("euler_phi", pts, 3)) == base);
  CHECK(encode_report(run("euler_phi", pts, 8)) == base);
  // a different segmentation may round differently but must agree closely
  const auto other = run("euler_phi", pts, 1, 4096);
  const auto ref = run("euler_phi", pts, 1);
  for (std::size_t i = 0; i < pts.size(); ++i)
    CHECK(other.rows[i].s2.value() == doctest::Approx(ref.rows[i].s2.value()).epsilon(1e-13));
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(CheckpointGrid(std::vector<Integer>{}), BadGrid);
  CHECK_THROWS_AS(CheckpointGrid({10, 5}), BadGrid);
  CHECK_THROWS_AS(CheckpointGrid({10, 10}), BadGrid);
  CHECK_THROWS_AS(CheckpointGrid({1, 10}), BadGrid);
  std::vector<Integer> many(65);
  for (std::size_t i = 0; i < many.size(); ++i) many[i] = 2 + i;
  CHECK_THROWS_AS(CheckpointGrid{many}, BadGrid);
  CHECK_THROWS_AS(CheckpointGrid({10, 2'000'000'000}), BoundExceeded);
  CHECK_THROWS_AS(CheckpointGrid({10, 2'000}, 1'000), BoundExceeded);
  const auto g = CheckpointGrid::log_spaced(10'000, 100'000'000, 12);
  CHECK(g.size() == 12);
  CHECK(g.points().front() == 10'000);
  CHECK(g.max() == 100'000'000);
  const auto lin = CheckpointGrid::linear(10, 100, 10);
  CHECK(lin.points()[1] == 20);
}
