#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "primemean/error.hpp"
#include "primemean/multfunc.hpp"
#include "primemean/sieve.hpp"

namespace pmean {

inline constexpr int kMaxSeriesOrder = 12;

/// t_logn log n + t_loglogn log log n + sum_{j=0..r} e[j] / log^j n.
template <class Scalar = double>
struct Expansion {
  Scalar t_logn{};
  Scalar t_loglogn{};
  std::vector<Scalar> e{Scalar(0)};

  int order() const { return static_cast<int>(e.size()) - 1; }

  Scalar operator()(double n) const {
    using std::log;
    const Scalar L = Scalar(log(n));
    Scalar inv = Scalar(1), tail = Scalar(0);
    for (const Scalar& c : e) {
      tail += c * inv;
      inv /= L;
    }
    return t_logn * L + t_loglogn * Scalar(log(log(n))) + tail;
  }
};

namespace detail {
inline void check_order(int r, const char* what) {
  if (r < 1 || r > kMaxSeriesOrder) {
    throw InvalidArgument(std::string(what) + ": order must be in [1, " +
                          std::to_string(kMaxSeriesOrder) + "]");
  }
}
}  // namespace detail

/// (i-1)! for i = 1..r: li(t) ~ sum_i (i-1)! t / log^i t.
template <class Scalar = double>
std::vector<Scalar> li_coeffs(int r) {
  detail::check_order(r, "li_coeffs");
  std::vector<Scalar> out;
  Scalar f(1);
  for (int i = 1; i <= r; ++i) {
    out.push_back(f);
    f *= Scalar(i);
  }
  return out;
}

/// (i-1)!/(j-1)! for i = j..r: coefficients of t / log^i t in L_j(t).
template <class Scalar = double>
std::vector<Scalar> lj_coeffs(int j, int r) {
  detail::check_order(r, "lj_coeffs");
  if (j < 1 || j > r) throw InvalidArgument("lj_coeffs: need 1 <= j <= r");
  std::vector<Scalar> out;
  Scalar c(1);  // (i-1)!/(j-1)! = j (j+1) ... (i-1)
  for (int i = j; i <= r; ++i) {
    out.push_back(c);
    c *= Scalar(i);
  }
  return out;
}

/// Checks L_j = L_{j-1}/(j-1) - t/((j-1) log^(j-1) t) coefficientwise up to
/// order r. Scaled by (j-1) so the comparison is exact in integers.
bool lj_recurrence_check(int j, int r);

/// Truncated exponential: g = exp(sum_{k=1..r} e_k x^k) through x^r, g_0 = 1.
/// `e` holds e_1..e_r.
template <class Scalar = double>
std::vector<Scalar> series_exp(const std::vector<Scalar>& e) {
  const std::size_t r = e.size();
  if (r > static_cast<std::size_t>(kMaxSeriesOrder)) {
    throw InvalidArgument("series_exp: order above " + std::to_string(kMaxSeriesOrder));
  }
  // g' = e' g  =>  k g_k = sum_{i=1..k} i e_i g_{k-i}
  std::vector<Scalar> g(r + 1, Scalar(0));
  g[0] = Scalar(1);
  for (std::size_t k = 1; k <= r; ++k) {
    Scalar acc(0);
    for (std::size_t i = 1; i <= k; ++i) acc += Scalar(static_cast<long>(i)) * e[i - 1] * g[k - i];
    g[k] = acc / Scalar(static_cast<long>(k));
  }
  return g;
}

/// c_i = d_{i+1} - sum_{j=1..i} d_j (i-1)!/(j-1)! for i = 1..r, given d_1..d_{r+1}.
template <class Scalar = double>
std::vector<Scalar> s2_coeffs_from_d(const std::vector<Scalar>& d) {
  if (d.size() < 2) throw InvalidArgument("s2_coeffs_from_d: need at least d_1, d_2");
  const int r = static_cast<int>(d.size()) - 1;
  if (r > kMaxSeriesOrder) throw InvalidArgument("s2_coeffs_from_d: order above 12");
  std::vector<Scalar> c;
  for (int i = 1; i <= r; ++i) {
    Scalar acc = d[static_cast<std::size_t>(i)];
    for (int j = 1; j <= i; ++j) {
      Scalar ratio(1);
      for (int k = j; k < i; ++k) ratio *= Scalar(k);
      acc -= d[static_cast<std::size_t>(j - 1)] * ratio;
    }
    c.push_back(acc);
  }
  return c;
}

/// log of the leading-order form: log C + d log n + log(alpha) log log n + log(sum_j e_j / log^j n).
double theorem1_log_eval(const PrimeModel& model, double leading_constant, const Expansion<double>& expansion,
                         Integer n);

/// Predicted G_f(n) = C n^d (log n)^(log alpha) sum_j e_j / log^j n, with e_0 = 1.
double theorem1_eval(const PrimeModel& model, double leading_constant, const Expansion<double>& expansion,
                     Integer n);

}  // namespace pmean

namespace pmean {

/// Same, with the leading constant computed by the constants module.
double theorem1_eval(const PrimeModel& model, const Expansion<double>& expansion, Integer n);

}  // namespace pmean
