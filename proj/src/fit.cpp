#include "primemean/fit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include <Eigen/Dense>

#include "primemean/error.hpp"
#include "primemean/series.hpp"

namespace pmean {

FitResult fit_coefficients(const std::vector<FitSample>& samples, int order, bool with_constant) {
  if (order < 0 || order > kMaxSeriesOrder) throw InvalidArgument("fit: order must be in [0, 12]");
  const int cols = order + (with_constant ? 1 : 0);
  if (cols == 0) throw InvalidArgument("fit: nothing to fit (order 0 without a constant)");
  if (samples.size() < static_cast<std::size_t>(order) + 2) {
    throw InvalidArgument("fit: need at least order + 2 = " + std::to_string(order + 2) + " samples");
  }
  std::set<Integer> seen;
  for (const auto& s : samples) {
    if (s.n < 100) throw InvalidArgument("fit: sample n must be >= 100");
    if (!seen.insert(s.n).second) throw InvalidArgument("fit: duplicate sample n " + std::to_string(s.n));
    if (!std::isfinite(s.residual)) throw InvalidArgument("fit: non-finite residual");
  }

  const Eigen::Index rows = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd A(rows, cols);
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    const double x = 1.0 / std::log(static_cast<double>(s.n));
    Eigen::Index c = 0;
    if (with_constant) A(i, c++) = 1.0;
    double xp = x;
    for (int j = 1; j <= order; ++j, xp *= x) A(i, c++) = xp;
    b(i) = s.residual;
  }

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  const auto diag = qr.matrixR().diagonal().cwiseAbs();
  const double dmax = diag.maxCoeff(), dmin = diag.minCoeff();
  const double condition = dmin > 0 ? std::max(1.0, dmax / dmin) : HUGE_VAL;

  FitResult out;
  out.condition_estimate = condition;
  out.with_constant = with_constant;
  auto [lo, hi] = std::minmax_element(samples.begin(), samples.end(),
                                      [](const FitSample& a, const FitSample& c) { return a.n < c.n; });
  out.window = {lo->n, hi->n, samples.size()};
  if (!(condition <= kMaxCondition)) {
    throw IllConditioned("fit: condition estimate " + std::to_string(condition) + " exceeds 1e12; lower the order or widen the window",
                         condition);
  }
  const Eigen::VectorXd coef = qr.solve(b);
  out.coefficients.assign(coef.data(), coef.data() + coef.size());
  out.residual_norm = (A * coef - b).norm();
  return out;
}

}  // namespace pmean
