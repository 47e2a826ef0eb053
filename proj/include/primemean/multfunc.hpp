#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "primemean/sieve.hpp"

namespace pmean {

/// Asymptotic profile at primes: f(p) = alpha * p^d + O(K * p^(d - delta)).
/// delta = +infinity marks an exact leading term (the error term vanishes).
struct GrowthProfile {
  double d = 0.0;
  double alpha = 1.0;
  double delta = std::numeric_limits<double>::infinity();
  double K = 0.0;
};

/// f(k) carried alongside its natural log so large values do not overflow.
struct FunctionValue {
  double value = 1.0;
  double log_value = 0.0;
};

/// A positive multiplicative function described on prime powers.
class PrimeModel {
 public:
  using PowerFn = std::function<double(Integer p, unsigned a)>;
  using PrimeFn = std::function<double(Integer p)>;

  struct Definition {
    std::string name;
    std::string identity;  // stable key for caches; defaults to name
    GrowthProfile profile;
    bool strongly_multiplicative = false;
    PowerFn log_value;          // log f(p^a), required
    PowerFn value;              // f(p^a); defaults to exp(log_value)
    PowerFn log_step;           // log f(p^a) - log f(p^(a-1)), a >= 2
    PrimeFn log_leading_ratio;  // log(f(p) / (alpha p^d))
    PrimeFn log_leading_ratio_error;  // absolute error of the above
  };

  /// Validates positivity and the strong-multiplicativity invariant on a
  /// window of small primes; throws InvalidArgument on failure.
  explicit PrimeModel(Definition def);

  const std::string& name() const { return def_.name; }
  const std::string& identity() const { return def_.identity; }
  const GrowthProfile& profile() const { return def_.profile; }
  double d() const { return def_.profile.d; }
  double alpha() const { return def_.profile.alpha; }
  double delta() const { return def_.profile.delta; }
  double K() const { return def_.profile.K; }
  bool strongly_multiplicative() const { return def_.strongly_multiplicative; }
  /// True when f(p) = alpha p^d exactly at every prime.
  bool exact_leading() const { return std::isinf(def_.profile.delta); }

  FunctionValue at_prime_power(Integer p, unsigned a) const;
  double value_at_prime(Integer p) const { return at_prime_power(p, 1).value; }
  double log_at_prime(Integer p) const { return def_.log_value(p, 1); }
  double log_at_prime_power(Integer p, unsigned a) const { return def_.log_value(p, a); }

  /// log(Q(p) / (alpha p^d)), the summand of C_Q.
  double log_leading_ratio(Integer p) const;
  /// Absolute rounding error bound of `log_leading_ratio(p)`.
  double log_leading_ratio_error(Integer p) const;

 private:
  friend double log_ratio_prime_power(const PrimeModel&, Integer, unsigned);
  Definition def_;
};

/// Built-in models: kappa, two_omega, euler_phi, sigma, divisor_d, jordan_<k>.
PrimeModel builtin(const std::string& name);

/// f(k) by multiplicativity over the factorization of k.
FunctionValue value_at(const PrimeModel& model, Integer k, const SpfTable& table);

/// log f(p^a) - log f(p^(a-1)) for a >= 2; exactly 0 for strongly multiplicative models.
double log_ratio_prime_power(const PrimeModel& model, Integer p, unsigned a);

struct ErrorProfileCheck {
  double K_hat = 0.0;
  bool pass = true;
};

/// max over primes p <= p_max of |f(p) - alpha p^d| / p^(d - delta).
ErrorProfileCheck error_profile_check(const PrimeModel& model, Integer p_max);

}  // namespace pmean
