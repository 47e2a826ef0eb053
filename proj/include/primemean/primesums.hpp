#pragma once

#include <span>
#include <string>
#include <vector>

#include "primemean/compensated.hpp"
#include "primemean/multfunc.hpp"
#include "primemean/sieve.hpp"

namespace pmean {

inline constexpr std::size_t kMaxCheckpoints = 64;

/// Strictly ascending checkpoints n_1 < ... < n_m with n_1 >= 2, m <= 64.
class CheckpointGrid {
 public:
  explicit CheckpointGrid(std::vector<Integer> points, Integer max_bound = kDefaultMaxBound);

  /// `points` log-spaced values in [from, to], rounded and de-duplicated.
  static CheckpointGrid log_spaced(Integer from, Integer to, std::size_t points,
                                   Integer max_bound = kDefaultMaxBound);
  static CheckpointGrid linear(Integer from, Integer to, std::size_t points,
                               Integer max_bound = kDefaultMaxBound);

  std::span<const Integer> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  Integer max() const { return points_.back(); }

 private:
  std::vector<Integer> points_;
};

/// Every summatory quantity at one checkpoint n.
struct CheckpointSums {
  Integer n = 0;
  Integer s1 = 0;          // sum_{p<=n} floor(n/p)
  CompensatedSum s2;       // sum_{p<=n} floor(n/p) log p
  CompensatedSum s3;       // sum_{p<=n} floor(n/p) log(Q(p)/(alpha p^d))
  CompensatedSum f1;       // sum_{p<=n} {n/p}
  CompensatedSum f2;       // sum_{p^a<=n} {n/p^a}
  CompensatedSum r;        // sum_{p<=n} {n/p} log p
  CompensatedSum m;        // sum_{p<=n} log p / p
  CompensatedSum u;        // sum_{2<=k<=n} log kappa(k) / log k
  CompensatedSum n_log_g;  // n log G_f(n), prime and prime-power terms

  double err_bound() const;
};

struct SumsReport {
  std::string model_identity;
  bool has_u = false;
  std::vector<CheckpointSums> rows;
};

struct SumsOptions {
  Integer segment_size = kDefaultSegmentSize;
  Integer max_bound = kDefaultMaxBound;
  unsigned threads = 1;
  bool with_u = true;
};

/// One segmented pass over the primes up to max(grid). Segments are reduced
/// into per-segment partials and merged in ascending order, so the result
/// does not depend on `threads`.
SumsReport sums_stream(const PrimeModel& model, const CheckpointGrid& grid,
                       const SumsOptions& options = {});

/// (log alpha) S1 + d S2 + S3 = sum_{p<=n} floor(n/p) log Q(p).
double prime_log_sum(const PrimeModel& model, const CheckpointSums& row);

/// n log G_f(n) from the prime-power identity.
Accumulated log_geomean_identity(const PrimeModel& model, Integer n, const SieveConfig& config = {});
/// Same, with the primes supplied (ascending, covering every prime <= n).
Accumulated log_geomean_identity(const PrimeModel& model, Integer n, std::span<const Integer> primes);

/// sum_{k<=n} log f(k) by factorizing every k.
Accumulated log_geomean_bruteforce(const PrimeModel& model, Integer n, const SpfTable& table);

/// sum_{k<=n} omega(k).
Integer omega_summatory(Integer n, const SpfTable& table);

/// U(x) = sum_{2<=k<=x} 1/lambda(k) with lambda(k) = log k / log kappa(k).
Accumulated u_of_x(Integer x, const SpfTable& table);

Accumulated r_sum(Integer n, const SieveConfig& config = {});
Accumulated mertens_m_of_x(Integer x, const SieveConfig& config = {});

/// M(x) at every x of an ascending list, in one sieve pass.
std::vector<double> mertens_m_at(std::span<const Integer> xs, const SieveConfig& config = {});

struct RsCheck {
  bool left = false;
  bool right = false;
  bool right_applies = false;  // x >= 319
  bool holds() const { return left && (!right_applies || right); }
};

/// log x + E - 1/(2 log x) < M(x) < log x + E + 1/(2 log x).
RsCheck rs_inequality_detail(Integer x, double m_of_x, double mertens_e);
bool rs_inequality_check(Integer x, double mertens_e, const SieveConfig& config = {});

}  // namespace pmean
