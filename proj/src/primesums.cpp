#include "primemean/primesums.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "primemean/error.hpp"

namespace pmean {

namespace {

constexpr double u = CompensatedSum::kUnit;

double lg(Integer x) { return std::log(static_cast<double>(x)); }

std::vector<Integer> dedup_sorted(std::vector<Integer> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Per-segment contribution to every checkpoint.
struct BlockPartial {
  explicit BlockPartial(std::size_t m)
      : s1(m, 0), s2(m), s3(m), f1(m), f2(m), r(m), n_log_g(m), m_bucket(m), u_bucket(m) {}
  std::vector<Integer> s1;
  std::vector<CompensatedSum> s2, s3, f1, f2, r, n_log_g;
  // m and u only depend on the largest element, so they are bucketed by the
  // first checkpoint >= element and prefix-summed after the merge.
  std::vector<CompensatedSum> m_bucket, u_bucket;
};

void merge_vec(std::vector<CompensatedSum>& into, const std::vector<CompensatedSum>& from) {
  for (std::size_t j = 0; j < into.size(); ++j) {
    if (from[j].count() != 0) into[j].merge(from[j]);
  }
}

class StreamWorker {
 public:
  StreamWorker(const PrimeModel& model, std::span<const Integer> points, const SegmentedSieve& sieve,
               bool with_u)
      : model_(model), points_(points), sieve_(sieve), with_u_(with_u),
        root_max_(isqrt(points.back())) {}

  BlockPartial run(std::size_t segment) const {
    BlockPartial part(points_.size());
    std::vector<Integer> primes;
    sieve_.primes_in_segment(segment, primes);
    add_primes(primes, part);
    if (with_u_) add_u(segment, part);
    return part;
  }

 private:
  // index of the first checkpoint >= x
  std::size_t first_at_least(Integer x) const {
    return static_cast<std::size_t>(std::lower_bound(points_.begin(), points_.end(), x) -
                                    points_.begin());
  }

  void add_primes(const std::vector<Integer>& primes, BlockPartial& part) const {
    const std::size_t m = points_.size();
    const bool strong = model_.strongly_multiplicative();
    const bool exact = model_.exact_leading();
    std::size_t j0 = primes.empty() ? m : first_at_least(primes.front());
    for (Integer p : primes) {
      while (j0 < m && points_[j0] < p) ++j0;
      if (j0 == m) break;
      const double lp = lg(p);
      const double dp = static_cast<double>(p);
      const double lf = model_.log_at_prime(p);
      const double lr = exact ? 0.0 : model_.log_leading_ratio(p);
      const double lr_err = exact ? 0.0 : model_.log_leading_ratio_error(p);
      part.m_bucket[j0].add(lp / dp, 3 * u);
      for (std::size_t j = j0; j < m; ++j) {
        const Integer n = points_[j];
        const Integer q = n / p;
        const double dq = static_cast<double>(q);
        const double frac = static_cast<double>(n - q * p) / dp;
        part.s1[j] += q;
        part.s2[j].add(dq * lp, 3 * u);
        if (!exact) part.s3[j].add(dq * lr, 2 * u, dq * lr_err);
        part.f1[j].add(frac, u);
        part.f2[j].add(frac, u);
        part.r[j].add(frac * lp, 4 * u);
        part.n_log_g[j].add(dq * lf, 3 * u);
      }
      if (p > root_max_) continue;
      // prime powers p^a <= max(grid), a >= 2
      Integer pa = p * p;
      for (unsigned a = 2; pa <= points_.back(); ++a, pa *= p) {
        const double step = strong ? 0.0 : log_ratio_prime_power(model_, p, a);
        const double dpa = static_cast<double>(pa);
        for (std::size_t j = first_at_least(pa); j < m; ++j) {
          const Integer n = points_[j];
          const Integer q = n / pa;
          part.f2[j].add(static_cast<double>(n - q * pa) / dpa, u);
          if (!strong) part.n_log_g[j].add(static_cast<double>(q) * step, 3 * u);
        }
      }
    }
  }

  // log kappa(k) / log k for every k of the segment. kappa is assembled from
  // the base primes; the cofactor left after removing them is 1 or a prime.
  void add_u(std::size_t segment, BlockPartial& part) const {
    const auto [a, b] = sieve_.segment_range(segment);
    const std::size_t len = static_cast<std::size_t>(b - a + 1);
    std::vector<Integer> kap(len, 1), smooth(len, 1);
    for (Integer q : sieve_.base_primes()) {
      if (q * q > b) break;
      for (Integer qa = q;; qa *= q) {
        for (Integer k = (a + qa - 1) / qa * qa; k <= b; k += qa) {
          smooth[k - a] *= q;
          if (qa == q) kap[k - a] *= q;
        }
        if (qa > b / q) break;
      }
    }
    const std::size_t m = points_.size();
    std::size_t j = first_at_least(std::max<Integer>(a, 2));
    for (Integer k = std::max<Integer>(a, 2); k <= b && j < m; ++k) {
      while (j < m && points_[j] < k) ++j;
      if (j == m) break;
      const Integer i = k - a;
      const Integer kappa = kap[i] * (k / smooth[i]);
      if (kappa == k) {
        part.u_bucket[j].add(1.0);
      } else {
        part.u_bucket[j].add(lg(kappa) / lg(k), 4 * u);
      }
    }
  }

  const PrimeModel& model_;
  std::span<const Integer> points_;
  const SegmentedSieve& sieve_;
  bool with_u_;
  Integer root_max_;
};

}  // namespace

CheckpointGrid::CheckpointGrid(std::vector<Integer> points, Integer max_bound)
    : points_(std::move(points)) {
  if (points_.empty()) throw BadGrid("checkpoint grid is empty");
  if (points_.size() > kMaxCheckpoints) {
    throw BadGrid("checkpoint grid has " + std::to_string(points_.size()) + " points; at most " +
                  std::to_string(kMaxCheckpoints) + " allowed");
  }
  if (points_.front() < 2) throw BadGrid("checkpoints must be >= 2");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i] <= points_[i - 1]) throw BadGrid("checkpoints must be strictly ascending");
  }
  if (points_.back() > max_bound) {
    throw BoundExceeded("checkpoint " + std::to_string(points_.back()) +
                        " exceeds sieve bound " + std::to_string(max_bound));
  }
}

CheckpointGrid CheckpointGrid::log_spaced(Integer from, Integer to, std::size_t points,
                                          Integer max_bound) {
  if (points == 0 || from < 2 || to < from) throw BadGrid("log grid needs 2 <= from <= to, points >= 1");
  if (points == 1) return CheckpointGrid({to}, max_bound);
  std::vector<Integer> v;
  const double l0 = std::log(static_cast<double>(from)), l1 = std::log(static_cast<double>(to));
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    v.push_back(static_cast<Integer>(std::llround(std::exp(l0 + t * (l1 - l0)))));
  }
  v.front() = from;
  v.back() = to;
  return CheckpointGrid(dedup_sorted(std::move(v)), max_bound);
}

CheckpointGrid CheckpointGrid::linear(Integer from, Integer to, std::size_t points, Integer max_bound) {
  if (points == 0 || from < 2 || to < from) throw BadGrid("linear grid needs 2 <= from <= to, points >= 1");
  if (points == 1) return CheckpointGrid({to}, max_bound);
  std::vector<Integer> v;
  for (std::size_t i = 0; i < points; ++i) {
    const long double t = static_cast<long double>(i) / static_cast<long double>(points - 1);
    v.push_back(from + static_cast<Integer>(std::llround(t * static_cast<long double>(to - from))));
  }
  return CheckpointGrid(dedup_sorted(std::move(v)), max_bound);
}

double CheckpointSums::err_bound() const {
  return std::max({s2.error_bound(), s3.error_bound(), f1.error_bound(), f2.error_bound(),
                   r.error_bound(), m.error_bound(), u.error_bound(), n_log_g.error_bound()});
}

SumsReport sums_stream(const PrimeModel& model, const CheckpointGrid& grid, const SumsOptions& options) {
  if (grid.max() > options.max_bound) {
    throw BoundExceeded("checkpoint " + std::to_string(grid.max()) + " exceeds sieve bound " +
                        std::to_string(options.max_bound));
  }
  const auto points = grid.points();
  const std::size_t m = points.size();
  const SegmentedSieve sieve(2, grid.max(), options.segment_size, options.max_bound);
  const StreamWorker worker(model, points, sieve, options.with_u);

  BlockPartial total(m);
  auto merge = [&](const BlockPartial& part) {
    for (std::size_t j = 0; j < m; ++j) total.s1[j] += part.s1[j];
    merge_vec(total.s2, part.s2);
    merge_vec(total.s3, part.s3);
    merge_vec(total.f1, part.f1);
    merge_vec(total.f2, part.f2);
    merge_vec(total.r, part.r);
    merge_vec(total.n_log_g, part.n_log_g);
    merge_vec(total.m_bucket, part.m_bucket);
    merge_vec(total.u_bucket, part.u_bucket);
  };

  const std::size_t segments = sieve.segment_count();
  const std::size_t threads = std::max<unsigned>(1, options.threads);
  if (threads == 1) {
    for (std::size_t s = 0; s < segments; ++s) merge(worker.run(s));
  } else {
    std::vector<BlockPartial> batch;
    for (std::size_t s0 = 0; s0 < segments; s0 += threads) {
      const std::size_t count = std::min(threads, segments - s0);
      batch.assign(count, BlockPartial(m));
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < count; ++t) {
        pool.emplace_back([&, t] { batch[t] = worker.run(s0 + t); });
      }
      for (auto& th : pool) th.join();
      for (const auto& part : batch) merge(part);
    }
  }

  SumsReport report;
  report.model_identity = model.identity();
  report.has_u = options.with_u;
  CompensatedSum m_running, u_running;
  for (std::size_t j = 0; j < m; ++j) {
    CheckpointSums row;
    row.n = points[j];
    row.s1 = total.s1[j];
    row.s2 = total.s2[j];
    row.s3 = total.s3[j];
    row.f1 = total.f1[j];
    row.f2 = total.f2[j];
    row.r = total.r[j];
    row.n_log_g = total.n_log_g[j];
    if (total.m_bucket[j].count() != 0) m_running.merge(total.m_bucket[j]);
    if (total.u_bucket[j].count() != 0) u_running.merge(total.u_bucket[j]);
    row.m = m_running;
    row.u = u_running;
    report.rows.push_back(row);
  }
  return report;
}

double prime_log_sum(const PrimeModel& model, const CheckpointSums& row) {
  return std::log(model.alpha()) * static_cast<double>(row.s1) + model.d() * row.s2.value() +
         row.s3.value();
}

namespace {

void accumulate_identity(const PrimeModel& model, Integer n, std::span<const Integer> primes,
                         CompensatedSum& sum) {
  const bool strong = model.strongly_multiplicative();
  for (Integer p : primes) {
    if (p > n) break;
    sum.add(static_cast<double>(n / p) * model.log_at_prime(p), 3 * u);
    if (strong) continue;
    Integer pa = p;
    for (unsigned a = 2; pa <= n / p; ++a) {
      pa *= p;
      sum.add(static_cast<double>(n / pa) * log_ratio_prime_power(model, p, a), 3 * u);
    }
  }
}

}  // namespace

Accumulated log_geomean_identity(const PrimeModel& model, Integer n, std::span<const Integer> primes) {
  if (n == 0) throw InvalidArgument("log_geomean_identity needs n >= 1");
  CompensatedSum sum;
  accumulate_identity(model, n, primes, sum);
  return Accumulated::from(sum);
}

Accumulated log_geomean_identity(const PrimeModel& model, Integer n, const SieveConfig& config) {
  if (n == 0) throw InvalidArgument("log_geomean_identity needs n >= 1");
  if (n > config.max_bound) {
    throw BoundExceeded("n = " + std::to_string(n) + " exceeds sieve bound " +
                        std::to_string(config.max_bound));
  }
  CompensatedSum sum;
  if (n < 2) return Accumulated::from(sum);
  const SegmentedSieve sieve(2, n, config.segment_size, config.max_bound);
  std::vector<Integer> primes;
  for (std::size_t s = 0; s < sieve.segment_count(); ++s) {
    sieve.primes_in_segment(s, primes);
    accumulate_identity(model, n, primes, sum);
  }
  return Accumulated::from(sum);
}

Accumulated log_geomean_bruteforce(const PrimeModel& model, Integer n, const SpfTable& table) {
  if (n == 0) throw InvalidArgument("log_geomean_bruteforce needs n >= 1");
  if (n > table.limit()) {
    throw BoundExceeded("n = " + std::to_string(n) + " exceeds SPF table limit " +
                        std::to_string(table.limit()));
  }
  CompensatedSum sum;
  for (Integer k = 2; k <= n; ++k) {
    for (const auto& [p, a] : factorize(k, table)) sum.add(model.log_at_prime_power(p, a), 2 * u);
  }
  return Accumulated::from(sum);
}

Integer omega_summatory(Integer n, const SpfTable& table) {
  if (n > table.limit()) {
    throw BoundExceeded("n = " + std::to_string(n) + " exceeds SPF table limit " +
                        std::to_string(table.limit()));
  }
  Integer total = 0;
  for (Integer k = 2; k <= n; ++k) {
    Integer x = k;
    while (x > 1) {
      const Integer p = table.spf(x);
      while (x % p == 0) x /= p;
      ++total;
    }
  }
  return total;
}

Accumulated u_of_x(Integer x, const SpfTable& table) {
  if (x < 2) throw InvalidArgument("u_of_x needs x >= 2");
  if (x > table.limit()) {
    throw BoundExceeded("x = " + std::to_string(x) + " exceeds SPF table limit " +
                        std::to_string(table.limit()));
  }
  CompensatedSum sum;
  for (Integer k = 2; k <= x; ++k) {
    Integer kappa = 1;
    for (const auto& pp : factorize(k, table)) kappa *= pp.prime;
    if (kappa == k) {
      sum.add(1.0);
    } else {
      sum.add(lg(kappa) / lg(k), 4 * u);
    }
  }
  return Accumulated::from(sum);
}

Accumulated r_sum(Integer n, const SieveConfig& config) {
  if (n < 2) throw InvalidArgument("r_sum needs n >= 2");
  CompensatedSum sum;
  for (Integer p : stream_segmented(2, n, config.segment_size, config.max_bound)) {
    const Integer rem = n % p;
    if (rem != 0) sum.add(static_cast<double>(rem) / static_cast<double>(p) * lg(p), 4 * u);
  }
  return Accumulated::from(sum);
}

Accumulated mertens_m_of_x(Integer x, const SieveConfig& config) {
  if (x < 2) throw InvalidArgument("mertens_m_of_x needs x >= 2");
  CompensatedSum sum;
  for (Integer p : stream_segmented(2, x, config.segment_size, config.max_bound)) {
    sum.add(lg(p) / static_cast<double>(p), 3 * u);
  }
  return Accumulated::from(sum);
}

std::vector<double> mertens_m_at(std::span<const Integer> xs, const SieveConfig& config) {
  std::vector<double> out;
  if (xs.empty()) return out;
  if (!std::is_sorted(xs.begin(), xs.end()) || xs.front() < 2) {
    throw InvalidArgument("mertens_m_at needs ascending x >= 2");
  }
  CompensatedSum sum;
  std::size_t i = 0;
  for (Integer p : stream_segmented(2, xs.back(), config.segment_size, config.max_bound)) {
    while (i < xs.size() && xs[i] < p) {
      out.push_back(sum.value());
      ++i;
    }
    sum.add(lg(p) / static_cast<double>(p), 3 * u);
  }
  while (i < xs.size()) {
    out.push_back(sum.value());
    ++i;
  }
  return out;
}

RsCheck rs_inequality_detail(Integer x, double m_of_x, double mertens_e) {
  RsCheck out;
  const double lx = lg(x);
  const double half = 1.0 / (2.0 * lx);
  out.left = lx + mertens_e - half < m_of_x;
  out.right_applies = x >= 319;
  out.right = m_of_x < lx + mertens_e + half;
  return out;
}

bool rs_inequality_check(Integer x, double mertens_e, const SieveConfig& config) {
  return rs_inequality_detail(x, mertens_m_of_x(x, config).value, mertens_e).holds();
}

}  // namespace pmean
