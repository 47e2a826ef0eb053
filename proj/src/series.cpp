#include "primemean/series.hpp"

#include <cstdint>

namespace pmean {

bool lj_recurrence_check(int j, int r) {
  detail::check_order(r, "lj_recurrence_check");
  if (j < 2 || j > r) throw InvalidArgument("lj_recurrence_check: need 2 <= j <= r");
  const auto lj = lj_coeffs<std::int64_t>(j, r);       // i = j..r
  const auto prev = lj_coeffs<std::int64_t>(j - 1, r);  // i = j-1..r
  // (j-1) L_j = L_{j-1} - t / log^(j-1) t
  // i = j-1: left side has no term, right side gives prev[0] - 1
  if (prev[0] - 1 != 0) return false;
  for (int i = j; i <= r; ++i) {
    const std::int64_t left = (j - 1) * lj[static_cast<std::size_t>(i - j)];
    const std::int64_t right = prev[static_cast<std::size_t>(i - j + 1)];
    if (left != right) return false;
  }
  return true;
}

double theorem1_log_eval(const PrimeModel& model, double leading_constant, const Expansion<double>& expansion,
                         Integer n) {
  if (n < 3) throw InvalidArgument("theorem1_eval needs n >= 3");
  if (expansion.e.empty() || expansion.e[0] != 1.0) {
    throw InvalidArgument("theorem1_eval: the correction series must start with e_0 = 1");
  }
  const double L = std::log(static_cast<double>(n));
  double tail = 0.0, inv = 1.0;
  for (double c : expansion.e) {
    tail += c * inv;
    inv /= L;
  }
  if (!(tail > 0)) throw InvalidArgument("theorem1_eval: correction factor is not positive at this n");
  return std::log(leading_constant) + model.d() * L + std::log(model.alpha()) * std::log(L) + std::log(tail);
}

double theorem1_eval(const PrimeModel& model, double leading_constant, const Expansion<double>& expansion,
                     Integer n) {
  return std::exp(theorem1_log_eval(model, leading_constant, expansion, n));
}

}  // namespace pmean

#include "primemean/constants.hpp"

namespace pmean {

double theorem1_eval(const PrimeModel& model, const Expansion<double>& expansion, Integer n) {
  return theorem1_eval(model, leading_constant(model).value, expansion, n);
}

}  // namespace pmean
