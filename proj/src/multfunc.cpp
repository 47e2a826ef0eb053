#include "primemean/multfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "primemean/compensated.hpp"
#include "primemean/error.hpp"

namespace pmean {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lg(Integer p) { return std::log(static_cast<double>(p)); }

// Exact double for p^e when it fits in 53 bits, otherwise the rounded power.
double ipow(Integer p, unsigned e) {
  double r = 1.0;
  for (unsigned i = 0; i < e; ++i) r *= static_cast<double>(p);
  return r;
}

}  // namespace

PrimeModel::PrimeModel(Definition def) : def_(std::move(def)) {
  if (def_.name.empty()) throw InvalidArgument("model needs a name");
  if (def_.identity.empty()) def_.identity = def_.name;
  if (!def_.log_value) throw InvalidArgument("model " + def_.name + ": log f(p^a) is required");
  const auto& pr = def_.profile;
  if (!(pr.alpha > 0) || !std::isfinite(pr.alpha)) {
    throw InvalidArgument("model " + def_.name + ": alpha must be positive");
  }
  if (!std::isfinite(pr.d)) throw InvalidArgument("model " + def_.name + ": d must be finite");
  if (!(pr.delta > 0)) throw InvalidArgument("model " + def_.name + ": delta must be positive");
  if (!(pr.K >= 0) || !std::isfinite(pr.K)) {
    throw InvalidArgument("model " + def_.name + ": K must be finite and non-negative");
  }
  for (Integer p : primes_up_to(1000)) {
    for (unsigned a = 1; a <= 6; ++a) {
      const double lv = def_.log_value(p, a);
      if (!std::isfinite(lv)) {
        throw InvalidArgument("model " + def_.name + ": f(" + std::to_string(p) + "^" +
                              std::to_string(a) + ") is not a positive finite value");
      }
      if (def_.strongly_multiplicative && lv != def_.log_value(p, 1)) {
        throw InvalidArgument("model " + def_.name + " declared strongly multiplicative but f(" +
                              std::to_string(p) + "^" + std::to_string(a) + ") != f(p)");
      }
    }
  }
}

FunctionValue PrimeModel::at_prime_power(Integer p, unsigned a) const {
  const double lv = def_.log_value(p, a);
  const double v = def_.value ? def_.value(p, a) : std::exp(lv);
  return {v, lv};
}

double PrimeModel::log_leading_ratio(Integer p) const {
  if (exact_leading()) return 0.0;
  if (def_.log_leading_ratio) return def_.log_leading_ratio(p);
  return def_.log_value(p, 1) - std::log(alpha()) - d() * lg(p);
}

double PrimeModel::log_leading_ratio_error(Integer p) const {
  constexpr double u = CompensatedSum::kUnit;
  if (exact_leading()) return 0.0;
  if (def_.log_leading_ratio_error) return def_.log_leading_ratio_error(p);
  if (def_.log_leading_ratio) return 4 * u * std::abs(def_.log_leading_ratio(p));
  return 8 * u * (std::abs(def_.log_value(p, 1)) + std::abs(d() * lg(p)) + std::abs(std::log(alpha())));
}

double log_ratio_prime_power(const PrimeModel& model, Integer p, unsigned a) {
  if (a < 2) throw InvalidArgument("log_ratio_prime_power needs a >= 2");
  if (model.strongly_multiplicative()) return 0.0;
  if (model.def_.log_step) return model.def_.log_step(p, a);
  return model.def_.log_value(p, a) - model.def_.log_value(p, a - 1);
}

PrimeModel builtin(const std::string& name) {
  PrimeModel::Definition def;
  def.name = name;
  if (name == "kappa") {
    def.profile = {1.0, 1.0, kInf, 0.0};
    def.strongly_multiplicative = true;
    def.log_value = [](Integer p, unsigned) { return lg(p); };
    def.value = [](Integer p, unsigned) { return static_cast<double>(p); };
  } else if (name == "two_omega") {
    def.profile = {0.0, 2.0, kInf, 0.0};
    def.strongly_multiplicative = true;
    def.log_value = [](Integer, unsigned) { return std::log(2.0); };
    def.value = [](Integer, unsigned) { return 2.0; };
  } else if (name == "euler_phi") {
    def.profile = {1.0, 1.0, 1.0, 1.0};
    def.log_value = [](Integer p, unsigned a) {
      return (a - 1) * lg(p) + std::log(static_cast<double>(p - 1));
    };
    def.value = [](Integer p, unsigned a) { return ipow(p, a - 1) * static_cast<double>(p - 1); };
    def.log_step = [](Integer p, unsigned) { return lg(p); };
    def.log_leading_ratio = [](Integer p) { return std::log1p(-1.0 / static_cast<double>(p)); };
  } else if (name == "sigma") {
    def.profile = {1.0, 1.0, 1.0, 1.0};
    // sigma(p^a) = 1 + p + ... + p^a = p^a (1 + 1/p + ... + 1/p^a)
    auto log_sigma = [](Integer p, unsigned a) {
      const double x = 1.0 / static_cast<double>(p);
      // log((1 - x^(a+1)) / (1 - x)) = log1p(-x^(a+1)) - log1p(-x)
      return a * lg(p) + std::log1p(-std::pow(x, a + 1)) - std::log1p(-x);
    };
    def.log_value = log_sigma;
    def.value = [](Integer p, unsigned a) {
      double s = 0.0;
      for (unsigned i = 0; i <= a; ++i) s += ipow(p, i);
      return s;
    };
    def.log_step = [](Integer p, unsigned a) {
      const double x = 1.0 / static_cast<double>(p);
      // (p^(a+1) - 1) / (p^a - 1) = p (1 - x^(a+1)) / (1 - x^a)
      return lg(p) + std::log1p(-std::pow(x, a + 1)) - std::log1p(-std::pow(x, a));
    };
    def.log_leading_ratio = [](Integer p) { return std::log1p(1.0 / static_cast<double>(p)); };
  } else if (name == "divisor_d") {
    def.profile = {0.0, 2.0, kInf, 0.0};
    def.log_value = [](Integer, unsigned a) { return std::log(static_cast<double>(a + 1)); };
    def.value = [](Integer, unsigned a) { return static_cast<double>(a + 1); };
    def.log_step = [](Integer, unsigned a) { return std::log1p(1.0 / static_cast<double>(a)); };
  } else if (name.rfind("jordan_", 0) == 0) {
    const std::string digits = name.substr(7);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit) || digits.size() > 2) {
      throw InvalidArgument("jordan model needs an integer order, e.g. jordan_2 (got " + name + ")");
    }
    const unsigned k = static_cast<unsigned>(std::stoul(digits));
    if (k < 1) throw InvalidArgument("jordan_k needs k >= 1");
    def.profile = {static_cast<double>(k), 1.0, static_cast<double>(k), 1.0};
    // J_k(p^a) = p^(k(a-1)) (p^k - 1)
    def.log_value = [k](Integer p, unsigned a) {
      const double l = lg(p);
      return k * (a - 1) * l + k * l + std::log1p(-std::exp(-(k * l)));
    };
    def.value = [k](Integer p, unsigned a) {
      return ipow(p, k * (a - 1)) * (ipow(p, k) - 1.0);
    };
    def.log_step = [k](Integer p, unsigned) { return k * lg(p); };
    def.log_leading_ratio = [k](Integer p) { return std::log1p(-std::exp(-(k * lg(p)))); };
  } else {
    throw InvalidArgument("unknown model: " + name);
  }
  return PrimeModel(std::move(def));
}

FunctionValue value_at(const PrimeModel& model, Integer k, const SpfTable& table) {
  if (k < 1) throw InvalidArgument("value_at needs k >= 1");
  FunctionValue out;
  CompensatedSum log_sum;
  for (const auto& [p, a] : factorize(k, table)) {
    const FunctionValue pv = model.at_prime_power(p, a);
    out.value *= pv.value;
    log_sum.add(pv.log_value);
  }
  out.log_value = log_sum.value();
  return out;
}

ErrorProfileCheck error_profile_check(const PrimeModel& model, Integer p_max) {
  if (p_max < 2) throw InvalidArgument("error_profile_check needs p_max >= 2");
  ErrorProfileCheck out;
  if (!model.exact_leading()) {
    // |f(p) - alpha p^d| / p^(d - delta) = alpha |expm1(log ratio)| p^delta
    for (Integer p : primes_up_to(p_max)) {
      const double u = std::expm1(model.log_leading_ratio(p));
      const double k_p = model.alpha() * std::abs(u) * std::pow(static_cast<double>(p), model.delta());
      out.K_hat = std::max(out.K_hat, k_p);
    }
  } else {
    for (Integer p : primes_up_to(p_max)) {
      // an exact leading term must really be exact
      const double u = std::expm1(model.log_at_prime(p) - std::log(model.alpha()) -
                                  model.d() * std::log(static_cast<double>(p)));
      if (std::abs(u) > 1e-12) {
        out.K_hat = kInf;
        break;
      }
    }
  }
  // rounding in expm1/pow: allow a few ulps relative to K
  out.pass = out.K_hat <= model.K() * (1 + 1e-12) + 1e-12;
  return out;
}

}  // namespace pmean
