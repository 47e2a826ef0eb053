#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace pmean {

/// Neumaier-compensated accumulator that also tracks a bound on the total
/// error: per-term representation error supplied by the caller plus the
/// rounding error of the summation itself.
class CompensatedSum {
 public:
  static constexpr double kUnit = std::numeric_limits<double>::epsilon() / 2;

  CompensatedSum() = default;

  /// Rebuilds an accumulator from a persisted (sum, compensation) pair.
  static CompensatedSum from_parts(double sum, double compensation, double err_bound) {
    CompensatedSum s;
    s.sum_ = sum;
    s.comp_ = compensation;
    s.term_err_ = err_bound;
    s.restored_ = true;
    return s;
  }

  /// Adds `term`, which is itself known to relative accuracy `rel_err` and
  /// absolute accuracy `abs_err`.
  void add(double term, double rel_err = 0.0, double abs_err = 0.0) {
    restored_ = false;
    const double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term)) {
      comp_ += (sum_ - t) + term;
    } else {
      comp_ += (term - t) + sum_;
    }
    sum_ = t;
    abs_ += std::abs(term);
    term_err_ += std::abs(term) * rel_err + abs_err;
    ++count_;
  }

  /// Folds another accumulator in. Merging in a fixed order is deterministic.
  void merge(const CompensatedSum& other) {
    const double abs_before = abs_;
    const std::uint64_t count_before = count_;
    add(other.sum_);
    add(other.comp_);
    abs_ = abs_before + other.abs_;
    count_ = count_before + other.count_;
    term_err_ += other.term_err_;
  }

  double value() const { return sum_ + comp_; }
  double sum() const { return sum_; }
  double compensation() const { return comp_; }
  std::uint64_t count() const { return count_; }

  double error_bound() const {
    if (restored_) return term_err_;  // persisted bound already covers rounding
    const double n = static_cast<double>(count_);
    return term_err_ + 2 * kUnit * std::abs(value()) + 4 * n * kUnit * kUnit * abs_;
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double abs_ = 0.0;
  double term_err_ = 0.0;
  std::uint64_t count_ = 0;
  bool restored_ = false;
};

/// A real result together with its accumulation error bound.
struct Accumulated {
  double value = 0.0;
  double err_bound = 0.0;

  static Accumulated from(const CompensatedSum& s) { return {s.value(), s.error_bound()}; }
};

}  // namespace pmean
