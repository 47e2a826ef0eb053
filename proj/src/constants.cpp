#include "primemean/constants.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bernoulli.hpp>

#include "primemean/compensated.hpp"
#include "primemean/error.hpp"
#include "primemean/primesums.hpp"

namespace pmean {

namespace {

constexpr double u = CompensatedSum::kUnit;

// Rosser-Schoenfeld: theta(x) < 1.01624 x for x > 0.
constexpr double kChebyshevTheta = 1.01624;

double lg(double x) { return std::log(x); }

// Smallest P >= start (grown geometrically) with bound(P) <= target.
template <class Bound>
Integer solve_truncation(Bound bound, double target, Integer start, Integer max_bound,
                         const std::string& constant) {
  Integer p = start;
  while (bound(p) > target) {
    if (p >= max_bound) {
      throw PrecisionUnreachable(constant,
                                 "target " + std::to_string(target) +
                                     " needs primes beyond the sieve bound; achievable " +
                                     std::to_string(bound(max_bound)),
                                 bound(max_bound));
    }
    p = std::min(max_bound, p + p / 8 + 1);
  }
  return p;
}

// sum_{p > P} log p / (p (p - 1)) <= 1.01624 * 2 / (P - 1)
double e_tail(Integer p) { return kChebyshevTheta * 2.0 / static_cast<double>(p - 1); }

// sum_{p > P} sum_{k >= 2} 1/(k p^k) <= sum_{p > P} 1/(2 p (p - 1)) <= e_tail(P) / (2 log P)
double m_tail(Integer p) { return e_tail(p) / (2.0 * lg(static_cast<double>(p))); }

// 2K sum_{p > P} p^(-1-delta) <= 2K * 1.01624 (1 + delta) / (delta log P) * P^-delta
double cq_tail(double K, double delta, Integer p) {
  const double dp = static_cast<double>(p);
  return 2.0 * K * kChebyshevTheta * (1.0 + delta) / (delta * lg(dp)) * std::pow(dp, -delta);
}

// Memoized prime sums; M and E are reused by every assembled constant.
struct PrimeSumCache {
  std::mutex mu;
  std::map<Integer, std::pair<double, double>> m_sums, e_sums;  // P -> (sum, err)
};
PrimeSumCache& prime_sum_cache() {
  static PrimeSumCache cache;
  return cache;
}

template <class Term>
std::pair<double, double> prime_sum(Integer bound, const SieveConfig& config, Term term) {
  CompensatedSum s;
  const SegmentedSieve sieve(2, bound, config.segment_size, std::max(config.max_bound, bound));
  std::vector<Integer> primes;
  for (std::size_t i = 0; i < sieve.segment_count(); ++i) {
    sieve.primes_in_segment(i, primes);
    for (Integer p : primes) {
      const auto [t, abs_err] = term(p);
      s.add(t, 0.0, abs_err);
    }
  }
  return {s.value(), s.error_bound()};
}

void check_bound(Integer p, const SieveConfig& config, const std::string& name) {
  if (p < 2) throw InvalidArgument(name + ": truncation point must be >= 2");
  if (p > config.max_bound) {
    throw BoundExceeded(name + ": truncation point " + std::to_string(p) + " exceeds sieve bound");
  }
}

}  // namespace

ConstantValue euler_gamma_truncated(Integer terms) {
  if (terms < 2) throw InvalidArgument("euler_gamma: need at least 2 terms");
  const double n = static_cast<double>(terms);
  CompensatedSum h;
  for (Integer k = terms; k >= 1; --k) h.add(1.0 / static_cast<double>(k), u);
  const double n2 = n * n;
  // H_N - log N - 1/(2N) + B2/(2 N^2) + B4/(4 N^4); next term B6/(6 N^6) = 1/(252 N^6)
  CompensatedSum g = h;
  g.add(-std::log(n), u);
  g.add(-1.0 / (2.0 * n), u);
  g.add(1.0 / (12.0 * n2), 2 * u);
  g.add(-1.0 / (120.0 * n2 * n2), 3 * u);
  ConstantValue out;
  out.name = "gamma";
  out.value = g.value();
  out.tail_bound = 1.0 / (252.0 * n2 * n2 * n2) + g.error_bound();
  out.method = "euler-maclaurin-harmonic";
  out.params["terms"] = n;
  return out;
}

ConstantValue euler_gamma(double target_precision) {
  if (target_precision < 1e-13) {
    throw PrecisionUnreachable("gamma", "precision below 1e-13 is not reachable in double arithmetic",
                               1e-13);
  }
  Integer terms = 10;
  while (1.0 / (252.0 * std::pow(static_cast<double>(terms), 6)) > target_precision / 2) terms *= 2;
  ConstantValue out = euler_gamma_truncated(terms);
  if (out.tail_bound > target_precision) {
    throw PrecisionUnreachable("gamma", "rounding error exceeds target", out.tail_bound);
  }
  return out;
}

ConstantValue meissel_mertens_truncated(Integer prime_bound, const SieveConfig& config) {
  check_bound(prime_bound, config, "meissel_mertens");
  const ConstantValue gamma = euler_gamma();
  std::pair<double, double> sum;
  {
    auto& cache = prime_sum_cache();
    std::unique_lock lock(cache.mu);
    auto it = cache.m_sums.find(prime_bound);
    if (it == cache.m_sums.end()) {
      lock.unlock();
      sum = prime_sum(prime_bound, config, [](Integer p) {
        const double x = 1.0 / static_cast<double>(p);
        // log(1 - x) + x = -(x^2/2 + x^3/3 + ...)
        double t;
        if (x < 1e-3) {
          double xk = x * x, s = 0.0;
          for (int k = 2; k <= 7; ++k, xk *= x) s += xk / k;
          t = -s;
        } else {
          t = std::log1p(-x) + x;
        }
        return std::pair{t, 4 * u * std::abs(t)};
      });
      lock.lock();
      cache.m_sums[prime_bound] = sum;
    } else {
      sum = it->second;
    }
  }
  ConstantValue out;
  out.name = "M";
  out.value = gamma.value + sum.first;
  out.tail_bound = m_tail(prime_bound) + gamma.tail_bound + sum.second + u * std::abs(out.value);
  out.method = "gamma-shifted-prime-sum";
  out.params["prime_bound"] = static_cast<double>(prime_bound);
  out.params["gamma_terms"] = gamma.params.at("terms");
  return out;
}

ConstantValue meissel_mertens(double target_precision, const SieveConfig& config) {
  if (target_precision < 1e-9) {
    throw PrecisionUnreachable("M", "precision below 1e-9 is not supported", 1e-9);
  }
  const Integer p = solve_truncation([](Integer x) { return m_tail(x); }, target_precision * 0.9,
                                     1000, config.max_bound, "M");
  return meissel_mertens_truncated(p, config);
}

ConstantValue mertens_e_truncated(Integer prime_bound, const SieveConfig& config) {
  check_bound(prime_bound, config, "mertens_e");
  const ConstantValue gamma = euler_gamma();
  std::pair<double, double> sum;
  {
    auto& cache = prime_sum_cache();
    std::unique_lock lock(cache.mu);
    auto it = cache.e_sums.find(prime_bound);
    if (it == cache.e_sums.end()) {
      lock.unlock();
      sum = prime_sum(prime_bound, config, [](Integer p) {
        const double dp = static_cast<double>(p);
        const double t = std::log(dp) / (dp * (dp - 1.0));
        return std::pair{t, 4 * u * t};
      });
      lock.lock();
      cache.e_sums[prime_bound] = sum;
    } else {
      sum = it->second;
    }
  }
  ConstantValue out;
  out.name = "E";
  out.value = -gamma.value - sum.first;
  out.tail_bound = e_tail(prime_bound) + gamma.tail_bound + sum.second + u * std::abs(out.value);
  out.method = "closed-form-prime-sum";
  out.params["prime_bound"] = static_cast<double>(prime_bound);
  out.params["gamma_terms"] = gamma.params.at("terms");
  return out;
}

ConstantValue mertens_e(double target_precision, const SieveConfig& config) {
  if (target_precision < 1e-9) {
    throw PrecisionUnreachable("E", "precision below 1e-9 is not supported", 1e-9);
  }
  const Integer p = solve_truncation([](Integer x) { return e_tail(x); }, target_precision * 0.9,
                                     1000, config.max_bound, "E");
  return mertens_e_truncated(p, config);
}

ConstantValue c_q_truncated(const PrimeModel& model, Integer prime_bound, const SieveConfig& config) {
  check_bound(prime_bound, config, "C_Q");
  ConstantValue out;
  out.name = "C_Q";
  out.method = "prime-series";
  out.params["prime_bound"] = static_cast<double>(prime_bound);
  if (model.exact_leading()) {
    out.method = "exact-leading-term";
    return out;
  }
  const double K = model.K(), delta = model.delta();
  // |log(1 + v)| <= 2|v| needs |v| <= K p^-delta <= 1/2 beyond the cut
  if (K * std::pow(static_cast<double>(prime_bound), -delta) > 0.5) {
    throw InvalidArgument("C_Q: truncation point too small for the tail estimate");
  }
  const auto sum = prime_sum(prime_bound, config, [&model](Integer p) {
    const double dp = static_cast<double>(p);
    const double t = model.log_leading_ratio(p) / dp;
    return std::pair{t, model.log_leading_ratio_error(p) / dp + 2 * u * std::abs(t)};
  });
  out.value = sum.first;
  out.tail_bound = cq_tail(K, delta, prime_bound) + sum.second;
  return out;
}

ConstantValue c_q(const PrimeModel& model, double target_precision, const SieveConfig& config) {
  if (target_precision < 1e-9) {
    throw PrecisionUnreachable("C_Q", "precision below 1e-9 is not supported", 1e-9);
  }
  if (model.exact_leading()) return c_q_truncated(model, 2, config);
  const double K = model.K(), delta = model.delta();
  const Integer start = std::max<Integer>(
      1000, static_cast<Integer>(std::ceil(std::pow(2.0 * std::max(K, 1e-300), 1.0 / delta))) + 1);
  const Integer p = solve_truncation([&](Integer x) { return cq_tail(K, delta, x); },
                                     target_precision * 0.9, start, config.max_bound, "C_Q");
  return c_q_truncated(model, p, config);
}

ConstantValue rho_f(const PrimeModel& model, double target_precision, const SieveConfig& config) {
  const ConstantValue c = c_q(model, target_precision, config);
  ConstantValue out;
  out.name = "rho_f";
  out.value = std::exp(c.value);
  out.tail_bound = out.value * std::expm1(c.tail_bound) + 2 * u * out.value;
  out.method = "exp(C_Q)";
  out.params = c.params;
  return out;
}

namespace {

// Coefficients of P_m in g^(m)(t) = t^(-2-m) P_m(log t) for g = log^(j-1) t / t^2.
std::vector<std::vector<double>> log_power_derivatives(int j, int count) {
  std::vector<std::vector<double>> polys;
  std::vector<double> p(static_cast<std::size_t>(j), 0.0);
  p.back() = 1.0;  // L^(j-1)
  polys.push_back(p);
  for (int m = 0; m + 1 < count; ++m) {
    // d/dt [t^-a P(L)] = t^(-a-1) (-a P(L) + P'(L)), a = 2 + m
    std::vector<double> next(p.size(), 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) {
      next[k] += -(2.0 + m) * p[k];
      if (k > 0) next[k - 1] += static_cast<double>(k) * p[k];
    }
    p = next;
    polys.push_back(p);
  }
  return polys;
}

double poly_eval(const std::vector<double>& c, double x) {
  double r = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) r = r * x + c[k];
  return r;
}

// int_T^inf t^(-a-1) L^k dt = T^-a sum_{i=0}^k k! / (i! a^(k-i+1)) L_T^i
double log_power_tail(double a, int k, double T) {
  const double L = std::log(T);
  double s = 0.0, fact_ratio = 1.0;  // k!/i! built from i = k downwards
  for (int i = k; i >= 0; --i) {
    s += fact_ratio / std::pow(a, k - i + 1) * std::pow(L, i);
    fact_ratio *= i;
  }
  return std::pow(T, -a) * s;
}

}  // namespace

ConstantValue saffari_a(int j, double target_precision) {
  if (j < 1 || j > 8) throw InvalidArgument("saffari_a: j must be in [1, 8]");
  constexpr Integer kIntervals = 2000;
  constexpr int kEulerMaclaurinTerms = 6;
  const double T = static_cast<double>(kIntervals + 1);

  using boost::math::quadrature::gauss_kronrod;
  CompensatedSum body;
  double quad_err = 0.0;
  for (Integer m = 1; m <= kIntervals; ++m) {
    const double dm = static_cast<double>(m);
    auto f = [dm, j](double t) { return (t - dm) * std::pow(std::log(t), j - 1) / (t * t); };
    double err = 0.0;
    const double piece = gauss_kronrod<double, 15>::integrate(f, dm, dm + 1.0, 0, 0.0, &err);
    body.add(piece, 2 * u);
    quad_err += err;
  }

  // int_T^inf {t} g = 1/2 int_T^inf g - sum_k B_2k/(2k)! g^(2k-2)(T) + R
  const auto polys = log_power_derivatives(j, 2 * kEulerMaclaurinTerms);
  CompensatedSum tail;
  tail.add(0.5 * log_power_tail(1.0, j - 1, T), 4 * u);
  double factorial = 1.0;
  for (int k = 1; k <= kEulerMaclaurinTerms; ++k) {
    factorial *= (2.0 * k - 1) * (2.0 * k);
    const double b2k = boost::math::bernoulli_b2n<double>(k);
    const int m = 2 * k - 2;
    const double deriv = std::pow(T, -2.0 - m) * poly_eval(polys[static_cast<std::size_t>(m)], std::log(T));
    tail.add(-b2k / factorial * deriv, 8 * u);
  }
  // |R| <= |B_2K|/(2K)! int_T^inf |g^(2K-1)|, majorized coefficient-wise
  const auto& last = polys[static_cast<std::size_t>(2 * kEulerMaclaurinTerms - 1)];
  double majorant = 0.0;
  for (std::size_t k = 0; k < last.size(); ++k) {
    majorant += std::abs(last[k]) * log_power_tail(1.0 + (2 * kEulerMaclaurinTerms - 1), static_cast<int>(k), T);
  }
  const double remainder =
      std::abs(boost::math::bernoulli_b2n<double>(kEulerMaclaurinTerms)) / factorial * majorant;

  CompensatedSum total = body;
  total.merge(tail);
  ConstantValue out;
  out.name = "a_" + std::to_string(j);
  out.value = -total.value();
  out.tail_bound = remainder + quad_err + total.error_bound();
  out.method = "gauss-kronrod-unit-intervals+euler-maclaurin-tail";
  out.params["j"] = j;
  out.params["intervals"] = static_cast<double>(kIntervals);
  out.params["euler_maclaurin_terms"] = kEulerMaclaurinTerms;
  if (out.tail_bound > target_precision) {
    throw PrecisionUnreachable(out.name, "certified bound " + std::to_string(out.tail_bound) +
                                             " exceeds target " + std::to_string(target_precision),
                               out.tail_bound);
  }
  return out;
}

ConstantValue eta0(const PrimeModel& model, double target_precision, const SieveConfig& config) {
  // split the budget evenly over the three terms, never finer than the defaults need
  const double share = target_precision / 3.0;
  const double log_alpha = std::log(model.alpha());
  const double d = model.d();

  ConstantValue out;
  out.name = "eta0";
  out.method = "M log(alpha) + d (gamma + E - 1) + C_Q";
  CompensatedSum v;
  double tail = 0.0;
  if (log_alpha != 0.0) {
    const ConstantValue m = meissel_mertens(std::max(1e-9, share / std::abs(log_alpha)), config);
    v.add(m.value * log_alpha, 2 * u);
    tail += m.tail_bound * std::abs(log_alpha);
    out.params["M_prime_bound"] = m.params.at("prime_bound");
  }
  if (d != 0.0) {
    const ConstantValue g = euler_gamma();
    const ConstantValue e = mertens_e(std::max(1e-9, share / std::abs(d)), config);
    v.add(d * (g.value + e.value - 1.0), 4 * u);
    tail += std::abs(d) * (g.tail_bound + e.tail_bound);
    out.params["E_prime_bound"] = e.params.at("prime_bound");
  }
  const ConstantValue c = c_q(model, std::max(1e-9, share), config);
  v.add(c.value, u);
  tail += c.tail_bound;
  out.params["C_Q_prime_bound"] = c.params.at("prime_bound");
  out.value = v.value();
  out.tail_bound = tail + v.error_bound();
  if (out.tail_bound > target_precision) {
    throw PrecisionUnreachable("eta0", "assembled bound " + std::to_string(out.tail_bound) +
                                           " exceeds target", out.tail_bound);
  }
  return out;
}

ConstantValue leading_constant(const PrimeModel& model, double target_precision, const SieveConfig& config) {
  // relative error of exp is the absolute error of eta0
  const ConstantValue e = eta0(model, target_precision, config);
  ConstantValue out;
  out.name = "leading_constant";
  out.value = std::exp(e.value);
  out.tail_bound = out.value * std::expm1(e.tail_bound) + 2 * u * out.value;
  out.method = "exp(eta0)";
  out.params = e.params;
  return out;
}

MertensLimits mertens_limits(Integer x_max, std::size_t samples, const SieveConfig& config) {
  if (x_max < 1000 || samples < 2) throw InvalidArgument("mertens_limits needs x_max >= 1000, samples >= 2");
  std::vector<Integer> xs;
  const double l0 = std::log(static_cast<double>(x_max) / 10.0), l1 = std::log(static_cast<double>(x_max));
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(samples - 1);
    xs.push_back(static_cast<Integer>(std::llround(std::exp(l0 + t * (l1 - l0)))));
  }
  xs.back() = x_max;
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  struct Snap {
    double inv, lpp, theta;
  };
  std::vector<Snap> snaps;
  CompensatedSum inv, lpp, theta;
  std::size_t i = 0;
  for (Integer p : stream_segmented(2, x_max, config.segment_size, std::max(config.max_bound, x_max))) {
    while (i < xs.size() && xs[i] < p) {
      snaps.push_back({inv.value(), lpp.value(), theta.value()});
      ++i;
    }
    const double dp = static_cast<double>(p), l = std::log(dp);
    inv.add(1.0 / dp);
    lpp.add(l / dp);
    theta.add(l);
  }
  while (i++ < xs.size()) snaps.push_back({inv.value(), lpp.value(), theta.value()});

  // theta(t) - t ~ sum_{k>=2} mu(k) t^(1/k) from psi(t) ~ t
  static constexpr std::array<std::pair<int, int>, 10> kMobius = {
      {{2, -1}, {3, -1}, {5, -1}, {6, 1}, {7, -1}, {10, 1}, {11, -1}, {13, -1}, {14, 1}, {15, 1}}};
  auto bias_e = [](double x) {
    // int_x^inf (theta - t)_bias / t^2 dt
    double s = 0.0;
    for (auto [k, mu] : kMobius) s += mu * std::pow(x, 1.0 / k - 1.0) / (1.0 - 1.0 / k);
    return s;
  };
  auto bias_m = [](double x) {
    // int_x^inf (theta - t)_bias (1 + log t) / (t^2 log^2 t) dt, substituted t = e^v
    auto f = [](double v) {
      double s = 0.0;
      for (auto [k, mu] : kMobius) s += mu * std::exp(v * (1.0 / k - 1.0));
      return s * (1.0 + v) / (v * v);
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(f, std::log(x), std::numeric_limits<double>::infinity());
  };

  std::vector<double> m_est, e_est;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double x = static_cast<double>(xs[k]);
    const double lx = std::log(x);
    const double delta = snaps[k].theta - x;
    e_est.push_back(snaps[k].lpp - lx - delta / x + bias_e(x));
    m_est.push_back(snaps[k].inv - std::log(lx) - delta / (x * lx) + bias_m(x));
  }
  auto summarize = [](const std::vector<double>& v) {
    CompensatedSum s;
    for (double x : v) s.add(x);
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return LimitEstimate{s.value() / static_cast<double>(v.size()), (*hi - *lo) / 2.0};
  };
  MertensLimits out;
  out.meissel_mertens = summarize(m_est);
  out.mertens_e = summarize(e_est);
  out.x_max = x_max;
  out.samples = xs.size();
  return out;
}

bool rs_inequality_check(Integer x, const SieveConfig& config) {
  static const ConstantValue e = mertens_e(1e-8, config);
  return rs_inequality_check(x, e.value, config);
}

}  // namespace pmean
