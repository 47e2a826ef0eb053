#include "primemean/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <functional>
#include <map>
#include <mutex>
#include <string>

#include <unistd.h>

#include "primemean/checkpoint_cache.hpp"
#include "primemean/constants.hpp"
#include "primemean/error.hpp"
#include "primemean/fit.hpp"
#include "primemean/multfunc.hpp"
#include "primemean/primesums.hpp"

namespace pmean::verify {

namespace {

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Relative spread (max - min) / max |v|.
double relative_spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  return scale > 0 ? (*hi - *lo) / scale : 0.0;
}

// Sums at the fixed convergence grid are shared across trend checks.
const SumsReport& trend_sums(const std::string& model_name, const std::vector<Integer>& points,
                             const CheckParams& params) {
  static std::mutex mu;
  static std::map<std::string, SumsReport> memo;
  std::string key = model_name;
  for (Integer n : points) key += "," + std::to_string(n);
  std::lock_guard lock(mu);
  auto it = memo.find(key);
  if (it == memo.end()) {
    SumsOptions opt;
    opt.with_u = false;
    opt.threads = params.threads;
    opt.max_bound = params.sieve.max_bound;
    opt.segment_size = params.sieve.segment_size;
    it = memo.emplace(key, sums_stream(builtin(model_name), CheckpointGrid(points, opt.max_bound), opt)).first;
  }
  return it->second;
}

std::vector<Integer> log_points(Integer from, Integer to, std::size_t count) {
  const auto grid = CheckpointGrid::log_spaced(from, to, count, std::max(to, kDefaultMaxBound));
  return {grid.points().begin(), grid.points().end()};
}

CheckResult identity_oracle(const CheckParams& p) {
  CheckResult res;
  const Integer to = p.to.value_or(5000);
  const auto start = std::chrono::steady_clock::now();
  const SpfTable table = spf_build(std::max<Integer>(to, 2));
  const std::vector<Integer> primes = primes_up_to(to);
  bool ok = true;
  for (const char* name : {"kappa", "two_omega", "euler_phi", "sigma", "divisor_d", "jordan_2"}) {
    const PrimeModel model = builtin(name);
    double worst = 0.0;
    Integer worst_n = 1;
    CompensatedSum brute;  // running sum_{k<=n} log f(k) over factorizations
    for (Integer n = 1; n <= to; ++n) {
      brute.add(value_at(model, n, table).log_value);
      const double a = log_geomean_identity(model, n, primes).value;
      const double b = brute.value();
      const double scaled = std::abs(a - b) / std::max<double>(1.0, static_cast<double>(n));
      if (scaled > worst) {
        worst = scaled;
        worst_n = n;
      }
    }
    const bool pass = worst <= 1e-9;
    ok = ok && pass;
    res.details.push_back(fmt("%-10s max |identity - bruteforce| / max(1,n) = %.3e at n=%llu (tol 1e-9)", name,
                              worst, static_cast<unsigned long long>(worst_n)));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.details.push_back(fmt("runtime %.2f s (limit 30 s)", secs));
  res.passed = ok && secs < 30.0;
  return res;
}

// Sums for the exact-identity checks: kappa model, with U.
SumsReport identity_sums(const CheckParams& p, unsigned threads) {
  const auto points = log_points(p.from.value_or(10), p.to.value_or(1'000'000), p.points.value_or(20));
  SumsOptions opt;
  opt.threads = threads;
  opt.max_bound = p.sieve.max_bound;
  opt.segment_size = p.sieve.segment_size;
  return sums_stream(builtin("kappa"), CheckpointGrid(points, opt.max_bound), opt);
}

CheckResult omega_identity(const CheckParams& p) {
  CheckResult res;
  const SumsReport rep = identity_sums(p, p.threads);
  const SpfTable table = spf_build(rep.rows.back().n);
  res.passed = true;
  for (const auto& row : rep.rows) {
    const Integer omega = omega_summatory(row.n, table);
    if (omega != row.s1) {
      res.passed = false;
      res.details.push_back(fmt("n=%llu: sum omega = %llu but S1 = %llu", static_cast<unsigned long long>(row.n),
                                static_cast<unsigned long long>(omega), static_cast<unsigned long long>(row.s1)));
    }
  }
  res.details.push_back(fmt("%zu checkpoints up to %llu, exact integer comparison", rep.rows.size(),
                            static_cast<unsigned long long>(rep.rows.back().n)));
  return res;
}

CheckResult kappa_log_identity(const CheckParams& p) {
  CheckResult res;
  const SumsReport rep = identity_sums(p, p.threads);
  const SpfTable table = spf_build(rep.rows.back().n);
  const PrimeModel kappa = builtin("kappa");
  double worst = 0.0;
  for (const auto& row : rep.rows) {
    const double direct = log_geomean_bruteforce(kappa, row.n, table).value;
    worst = std::max(worst, std::abs(direct - row.s2.value()) / static_cast<double>(row.n));
  }
  res.passed = worst <= 1e-9;
  res.details.push_back(fmt("max |sum log kappa(k) - S2(n)| / n = %.3e over %zu checkpoints (tol 1e-9)", worst,
                            rep.rows.size()));
  return res;
}

CheckResult smr_identity(const CheckParams& p) {
  CheckResult res;
  const SumsReport rep = identity_sums(p, p.threads);
  double worst = 0.0;
  for (const auto& row : rep.rows) {
    const double n = static_cast<double>(row.n);
    worst = std::max(worst, std::abs(row.s2.value() - (n * row.m.value() - row.r.value())) / n);
  }
  res.passed = worst <= 1e-9;
  res.details.push_back(fmt("max |S2(n) - (n M(n) - R(n))| / n = %.3e over %zu checkpoints (tol 1e-9)", worst,
                            rep.rows.size()));
  return res;
}

CheckResult a1_gamma(const CheckParams&) {
  CheckResult res;
  const auto start = std::chrono::steady_clock::now();
  const ConstantValue a1 = saffari_a(1, 1e-9);
  const ConstantValue g = euler_gamma(1e-12);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double diff = std::abs(a1.value + 1.0 - g.value);
  res.passed = diff <= 1e-8 && secs < 5.0;
  res.details.push_back(fmt("a_1 = %.15g (bound %.1e), gamma = %.15g (bound %.1e)", a1.value, a1.tail_bound, g.value,
                            g.tail_bound));
  res.details.push_back(fmt("|a_1 + 1 - gamma| = %.3e (tol 1e-8), runtime %.2f s (limit 5 s)", diff, secs));
  return res;
}

CheckResult constants_stability(const CheckParams& p) {
  CheckResult res;
  const Integer x_max = p.to.value_or(100'000'000);
  const ConstantValue m = meissel_mertens(defaults::kMeisselMertensPrecision, p.sieve);
  const ConstantValue e = mertens_e(defaults::kMertensEPrecision, p.sieve);
  const MertensLimits lim = mertens_limits(x_max, p.points.value_or(200), p.sieve);
  const double dm = std::abs(m.value - lim.meissel_mertens.value);
  const double de = std::abs(e.value - lim.mertens_e.value);
  res.details.push_back(fmt("M closed = %.12f (bound %.1e), limit = %.12f (spread %.1e): |diff| = %.3e (tol 1e-6)",
                            m.value, m.tail_bound, lim.meissel_mertens.value, lim.meissel_mertens.spread, dm));
  res.details.push_back(fmt("E closed = %.12f (bound %.1e), limit = %.12f (spread %.1e): |diff| = %.3e (tol 1e-6)",
                            e.value, e.tail_bound, lim.mertens_e.value, lim.mertens_e.spread, de));
  bool ok = dm <= 1e-6 && de <= 1e-6;

  auto doubling = [&](const ConstantValue& c, const ConstantValue& c2) {
    const double move = std::abs(c2.value - c.value);
    const bool pass = move < c.tail_bound;
    res.details.push_back(fmt("%s: doubling truncation moves value by %.3e < tail_bound %.3e: %s", c.name.c_str(),
                              move, c.tail_bound, pass ? "yes" : "NO"));
    return pass;
  };
  const auto pm = static_cast<Integer>(m.params.at("prime_bound"));
  const auto pe = static_cast<Integer>(e.params.at("prime_bound"));
  ok = doubling(m, meissel_mertens_truncated(2 * pm, p.sieve)) && ok;
  ok = doubling(e, mertens_e_truncated(2 * pe, p.sieve)) && ok;
  const ConstantValue g = euler_gamma();
  ok = doubling(g, euler_gamma_truncated(2 * static_cast<Integer>(g.params.at("terms")))) && ok;
  const PrimeModel phi = builtin("euler_phi");
  const ConstantValue cq = c_q(phi, 1e-7, p.sieve);
  ok = doubling(cq, c_q_truncated(phi, 2 * static_cast<Integer>(cq.params.at("prime_bound")), p.sieve)) && ok;
  res.passed = ok;
  return res;
}

CheckResult rs_inequality(const CheckParams& p) {
  CheckResult res;
  const auto start = std::chrono::steady_clock::now();
  const Integer from = std::max<Integer>(p.from.value_or(319), 2);
  const Integer to = p.to.value_or(10'000'000);
  const std::size_t count = p.points.value_or(1000);
  const ConstantValue e = mertens_e(1e-8, p.sieve);

  // log-spaced x in [from, to], plus every x in [2, 319)
  std::vector<Integer> xs;
  for (Integer x = 2; x < std::min<Integer>(319, from); ++x) xs.push_back(x);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    xs.push_back(static_cast<Integer>(std::llround(
        std::exp(std::log(static_cast<double>(from)) + t * std::log(static_cast<double>(to) / from)))));
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  const std::vector<double> m = mertens_m_at(xs, p.sieve);

  std::size_t two_sided = 0, left_only = 0, failures = 0;
  double min_margin = HUGE_VAL;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const RsCheck c = rs_inequality_detail(xs[i], m[i], e.value);
    if (c.right_applies) {
      ++two_sided;
    } else {
      ++left_only;
    }
    const double lx = std::log(static_cast<double>(xs[i]));
    double margin = m[i] - (lx + e.value - 1 / (2 * lx));
    if (c.right_applies) margin = std::min(margin, lx + e.value + 1 / (2 * lx) - m[i]);
    min_margin = std::min(min_margin, margin);
    if (!c.holds()) {
      ++failures;
      if (failures <= 5) res.details.push_back(fmt("fails at x=%llu", static_cast<unsigned long long>(xs[i])));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.details.push_back(fmt("%zu two-sided points in [%llu, %llu], %zu left-side points below 319; smallest margin "
                            "%.3e (E bound %.1e)",
                            two_sided, static_cast<unsigned long long>(std::max<Integer>(from, 319)),
                            static_cast<unsigned long long>(to), left_only, min_margin, e.tail_bound));
  res.details.push_back(fmt("runtime %.2f s (limit 60 s)", secs));
  res.passed = failures == 0 && min_margin > e.tail_bound && secs < 60.0;
  return res;
}

std::vector<Integer> trend_points(const CheckParams& p) {
  const Integer lo = p.from.value_or(10'000), hi = p.to.value_or(100'000'000);
  std::vector<Integer> pts{lo};
  for (Integer n : {Integer{1'000'000}, Integer{10'000'000}}) {
    if (n > lo && n < hi) pts.push_back(n);
  }
  if (hi > lo) pts.push_back(hi);
  return pts;
}

CheckResult saffari_trend(const CheckParams& p) {
  CheckResult res;
  const double m_const = meissel_mertens().value;
  const double target = euler_gamma().value - 1.0;
  const auto pts = trend_points(p);
  const SumsReport& rep = trend_sums("kappa", pts, p);
  std::vector<double> eps;
  for (const auto& row : rep.rows) {
    const double n = static_cast<double>(row.n), L = std::log(n);
    eps.push_back((static_cast<double>(row.s1) / n - std::log(L) - m_const) * L);
    res.details.push_back(fmt("n=%-10llu eps(n) = %.6f, eps - (gamma-1) = %+.6f", static_cast<unsigned long long>(row.n),
                              eps.back(), eps.back() - target));
  }
  const double first = std::abs(eps.front() - target), last = std::abs(eps.back() - target);
  res.passed = last <= 0.1 && last < first;
  res.details.push_back(fmt("|eps(n_max) - (gamma-1)| = %.4f (tol 0.1), improves on n_min (%.4f): %s", last, first,
                            last < first ? "yes" : "NO"));
  return res;
}

// shared shape of criteria 7 and 8: distance to a target shrinks and the
// log-scaled residual at the top three checkpoints varies by < 25%
bool convergence_with_stabilization(CheckResult& res, const std::vector<Integer>& ns,
                                    const std::vector<double>& values, double target, double abs_tol,
                                    const char* label) {
  std::vector<double> scaled;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double L = std::log(static_cast<double>(ns[i]));
    res.details.push_back(fmt("n=%-10llu %s = %.9f, diff = %+.3e, diff*log n = %+.5e",
                              static_cast<unsigned long long>(ns[i]), label, values[i], values[i] - target,
                              (values[i] - target) * L));
    if (ns[i] >= 1'000'000) scaled.push_back((values[i] - target) * L);
  }
  const double first = std::abs(values.front() - target), last = std::abs(values.back() - target);
  const bool close = last <= abs_tol;
  const bool improving = last < first;
  const double spread = scaled.size() >= 2 ? relative_spread(scaled) : 0.0;
  const bool stable = scaled.size() >= 2 && spread < 0.25;
  res.details.push_back(fmt("(a) |diff(n_max)| = %.3e <= %.3g: %s", last, abs_tol, close ? "yes" : "NO"));
  res.details.push_back(fmt("(b) |diff(n_max)| < |diff(n_min)| = %.3e: %s", first, improving ? "yes" : "NO"));
  res.details.push_back(fmt("(c) scaled residual relative spread over n >= 1e6 = %.3f (< 0.25): %s", spread,
                            stable ? "yes" : "NO"));
  return close && improving && stable;
}

CheckResult prop1_constant(const CheckParams& p) {
  CheckResult res;
  const double c0 = euler_gamma().value + mertens_e().value - 1.0;
  const auto pts = trend_points(p);
  const SumsReport& rep = trend_sums("kappa", pts, p);
  std::vector<double> r;
  for (const auto& row : rep.rows) {
    const double n = static_cast<double>(row.n);
    r.push_back(row.s2.value() / n - std::log(n));
  }
  res.passed = convergence_with_stabilization(res, pts, r, c0, 0.1, "S2/n - log n");
  return res;
}

CheckResult kappa_corollary(const CheckParams& p) {
  CheckResult res;
  const ConstantValue lc = leading_constant(builtin("kappa"));
  const auto pts = trend_points(p);
  const SumsReport& rep = trend_sums("kappa", pts, p);
  std::vector<double> ratio;
  for (const auto& row : rep.rows) {
    const double n = static_cast<double>(row.n);
    ratio.push_back(std::exp(row.n_log_g.value() / n - std::log(n)));  // G_kappa(n) / n
  }
  res.details.push_back(fmt("e^(gamma+E-1) = %.12f (bound %.1e)", lc.value, lc.tail_bound));
  res.passed = convergence_with_stabilization(res, pts, ratio, lc.value, 0.1 * lc.value, "G/n");
  return res;
}

CheckResult deshouillers_luca(const CheckParams& p) {
  CheckResult res;
  const Integer n = p.to.value_or(1'000'000);
  const PrimeModel phi = builtin("euler_phi");
  const ConstantValue rho = rho_f(phi, 1e-8, p.sieve);
  const double log_c = -1.0 + std::log(rho.value);
  const double log_g = log_geomean_identity(phi, n, p.sieve).value / static_cast<double>(n);
  const double dn = static_cast<double>(n);
  const double diff = std::abs(log_g - std::log(dn) - log_c);
  res.passed = diff <= 1e-4;
  res.details.push_back(fmt("C = e^-1 rho_phi = %.12f (rho bound %.1e)", std::exp(log_c), rho.tail_bound));
  res.details.push_back(fmt("n=%llu: |log G_phi(n) - log n - log C| = %.3e (tol 1e-4)", static_cast<unsigned long long>(n),
                            diff));
  return res;
}

CheckResult theorem2_eta0(const CheckParams& p) {
  CheckResult res;
  const PrimeModel j2 = builtin("jordan_2");
  const ConstantValue eta = eta0(j2);
  const auto pts = log_points(p.from.value_or(1'000'000), p.to.value_or(100'000'000), p.points.value_or(12));
  const SumsReport& rep = trend_sums("jordan_2", pts, p);
  std::vector<FitSample> samples;
  for (const auto& row : rep.rows) {
    const double n = static_cast<double>(row.n);
    samples.push_back({row.n, prime_log_sum(j2, row) / n - j2.d() * std::log(n) -
                                  std::log(j2.alpha()) * std::log(std::log(n))});
  }
  const FitResult fit = fit_coefficients(samples, 1, true);
  const double diff = std::abs(fit.coefficients[0] - eta.value);
  res.passed = diff <= 0.1;
  res.details.push_back(fmt("eta0(jordan_2) = %.9f (bound %.1e)", eta.value, eta.tail_bound));
  res.details.push_back(fmt("fit over %zu points in [%llu, %llu]: constant = %.9f, c_1 = %.6f, cond = %.3g", samples.size(),
                            static_cast<unsigned long long>(fit.window.n_min),
                            static_cast<unsigned long long>(fit.window.n_max), fit.coefficients[0], fit.coefficients[1],
                            fit.condition_estimate));
  res.details.push_back(fmt("|fitted constant - eta0| = %.3e (tol 0.1)", diff));
  return res;
}

CheckResult determinism(const CheckParams& p) {
  CheckResult res;
  const unsigned parallel = std::max(2u, p.threads);
  const auto dir = std::filesystem::temp_directory_path();
  const std::string tag = std::to_string(::getpid());
  const auto seq_path = dir / ("primemean-determinism-" + tag + "-seq.pmsm");
  const auto par_path = dir / ("primemean-determinism-" + tag + "-par.pmsm");
  write_report_file(seq_path, identity_sums(p, 1));
  write_report_file(par_path, identity_sums(p, parallel));
  auto slurp = [](const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::vector<char>(std::istreambuf_iterator<char>(in), {});
  };
  const auto a = slurp(seq_path), b = slurp(par_path);
  std::filesystem::remove(seq_path);
  std::filesystem::remove(par_path);
  res.passed = !a.empty() && a == b;
  res.details.push_back(fmt("sequential vs %u-thread SumsReport files: %zu bytes, %s", parallel, a.size(),
                            res.passed ? "bit-identical" : "DIFFERENT"));
  return res;
}

struct Entry {
  CheckInfo info;
  std::function<CheckResult(const CheckParams&)> fn;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {{"identity-oracle", "prime-power identity equals sum_{k<=n} log f(k), six models, n <= 5000"}, identity_oracle},
      {{"omega-identity", "sum_{k<=n} omega(k) = S1(n), 20 log-spaced n <= 1e6"}, omega_identity},
      {{"kappa-log-identity", "sum_{k<=n} log kappa(k) = S2(n), 20 log-spaced n <= 1e6"}, kappa_log_identity},
      {{"smr-identity", "S2(n) = n M(n) - R(n), 20 log-spaced n <= 1e6"}, smr_identity},
      {{"a1-gamma", "a_1 by quadrature equals gamma - 1 by Euler-Maclaurin"}, a1_gamma},
      {{"constants-stability", "M and E: closed form vs limit extrapolation, truncation doubling"}, constants_stability},
      {{"rs-inequality", "Rosser-Schoenfeld bounds on sum log p / p, 1000 log-spaced x in [319, 1e7] and x < 319"},
       rs_inequality},
      {{"saffari-trend", "(S1/n - log log n - M) log n approaches gamma - 1"}, saffari_trend},
      {{"prop1-constant", "S2/n - log n approaches gamma + E - 1 with stable c_1"}, prop1_constant},
      {{"kappa-corollary", "G_kappa(n)/n approaches e^(gamma+E-1) with stable c_1"}, kappa_corollary},
      {{"deshouillers-luca", "log G_phi(n) - log n matches log(e^-1 rho_phi) at n = 1e6"}, deshouillers_luca},
      {{"theorem2-eta0", "fitted constant of the jordan_2 prime sum matches eta0"}, theorem2_eta0},
      {{"determinism", "sequential and parallel SumsReports are bit-identical"}, determinism},
  };
  return table;
}

}  // namespace

const std::vector<CheckInfo>& registry() {
  static const std::vector<CheckInfo> infos = [] {
    std::vector<CheckInfo> v;
    for (const auto& e : entries()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

CheckResult run_check(const std::string& name, const CheckParams& params) {
  for (const auto& e : entries()) {
    if (e.info.name == name) {
      const auto start = std::chrono::steady_clock::now();
      CheckResult res = e.fn(params);
      res.name = name;
      res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return res;
    }
  }
  throw UnknownCheck(name);
}

}  // namespace pmean::verify
