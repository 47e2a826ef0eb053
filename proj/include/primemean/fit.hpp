#pragma once

#include <cstddef>
#include <vector>

#include "primemean/sieve.hpp"

namespace pmean {

inline constexpr double kMaxCondition = 1e12;

struct FitSample {
  Integer n = 0;
  double residual = 0.0;
};

struct FitWindow {
  Integer n_min = 0;
  Integer n_max = 0;
  std::size_t points = 0;
};

struct FitResult {
  /// [c_1..c_order], or [c_0, c_1..c_order] when the constant is fitted.
  std::vector<double> coefficients;
  double residual_norm = 0.0;
  double condition_estimate = 1.0;
  bool with_constant = false;
  FitWindow window;
};

/// Least squares of `residual` on {1/log^j n, j = 1..order}, plus a constant
/// column when `with_constant`. Solved by column-pivoted Householder QR;
/// the condition estimate is the ratio of extreme |R_ii|. Throws
/// IllConditioned above kMaxCondition.
FitResult fit_coefficients(const std::vector<FitSample>& samples, int order, bool with_constant = false);

}  // namespace pmean
