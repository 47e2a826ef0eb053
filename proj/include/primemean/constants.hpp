#pragma once

#include <map>
#include <string>

#include "primemean/multfunc.hpp"
#include "primemean/sieve.hpp"

namespace pmean {

/// A computed constant with a certified truncation bound.
struct ConstantValue {
  std::string name;
  double value = 0.0;
  double tail_bound = 0.0;
  std::string method;
  std::map<std::string, double> params;  // truncation points and the like
};

namespace defaults {
inline constexpr double kGammaPrecision = 1e-12;
inline constexpr double kMeisselMertensPrecision = 1e-8;
inline constexpr double kMertensEPrecision = 1e-7;
inline constexpr double kCqPrecision = 1e-8;
inline constexpr double kSaffariPrecision = 1e-8;
inline constexpr double kAssembledPrecision = 1e-6;
}  // namespace defaults

/// Euler's constant by Euler-Maclaurin on the harmonic sum.
ConstantValue euler_gamma(double target_precision = defaults::kGammaPrecision);
ConstantValue euler_gamma_truncated(Integer terms);

/// Meissel-Mertens constant, M = gamma + sum_p (log(1 - 1/p) + 1/p).
ConstantValue meissel_mertens(double target_precision = defaults::kMeisselMertensPrecision,
                              const SieveConfig& config = {});
ConstantValue meissel_mertens_truncated(Integer prime_bound, const SieveConfig& config = {});

/// E = lim (sum_{p<=x} log p / p - log x) = -gamma - sum_p log p / (p (p - 1)).
ConstantValue mertens_e(double target_precision = defaults::kMertensEPrecision,
                        const SieveConfig& config = {});
ConstantValue mertens_e_truncated(Integer prime_bound, const SieveConfig& config = {});

/// C_Q = sum_p (1/p) log(Q(p) / (alpha p^d)).
ConstantValue c_q(const PrimeModel& model, double target_precision = defaults::kCqPrecision,
                  const SieveConfig& config = {});
ConstantValue c_q_truncated(const PrimeModel& model, Integer prime_bound, const SieveConfig& config = {});

/// rho_f = prod_p (f(p) / (alpha p^d))^(1/p) = exp(C_Q).
ConstantValue rho_f(const PrimeModel& model, double target_precision = defaults::kCqPrecision,
                    const SieveConfig& config = {});

/// a_j = -int_1^inf {t} t^-2 (log t)^(j-1) dt, 1 <= j <= 8.
ConstantValue saffari_a(int j, double target_precision = defaults::kSaffariPrecision);

/// eta_0 = M log alpha + d (gamma + E - 1) + C_Q.
ConstantValue eta0(const PrimeModel& model, double target_precision = defaults::kAssembledPrecision,
                   const SieveConfig& config = {});

/// alpha^M e^(d (gamma + E - 1)) rho_f, computed as exp(eta0).
ConstantValue leading_constant(const PrimeModel& model,
                               double target_precision = defaults::kAssembledPrecision,
                               const SieveConfig& config = {});

/// Limit-definition estimates of M and E from primes <= x_max: the partial
/// sums are corrected by the theta(x) - x partial-summation term and the
/// prime-power bias of theta, then averaged over log-spaced x in
/// [x_max / 10, x_max]. `spread` is half the range of the samples.
struct LimitEstimate {
  double value = 0.0;
  double spread = 0.0;
};
struct MertensLimits {
  LimitEstimate meissel_mertens;
  LimitEstimate mertens_e;
  Integer x_max = 0;
  std::size_t samples = 0;
};
MertensLimits mertens_limits(Integer x_max = 100'000'000, std::size_t samples = 200,
                             const SieveConfig& config = {});

/// Rosser-Schoenfeld check with E at 1e-8.
bool rs_inequality_check(Integer x, const SieveConfig& config = {});

}  // namespace pmean
