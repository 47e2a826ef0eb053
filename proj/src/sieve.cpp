#include "primemean/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "primemean/error.hpp"

namespace pmean {

Integer isqrt(Integer n) {
  if (n < 2) return n;
  auto r = std::min<Integer>(static_cast<Integer>(std::sqrt(static_cast<double>(n))), 0xFFFFFFFFULL);
  while (r > n / r) --r;
  while (r < 0xFFFFFFFFULL && r + 1 <= n / (r + 1)) ++r;
  return r;
}

namespace {

// Plain odd-only sieve; index i stands for 2i+1.
std::vector<Integer> small_primes(Integer limit) {
  std::vector<Integer> out;
  if (limit < 2) return out;
  out.push_back(2);
  const Integer half = (limit - 1) / 2;  // odd numbers 3..limit
  std::vector<char> composite(half + 1, 0);
  for (Integer i = 1; i <= half; ++i) {
    if (composite[i]) continue;
    const Integer p = 2 * i + 1;
    out.push_back(p);
    for (Integer m = p * p; m <= limit; m += 2 * p) composite[m / 2] = 1;
  }
  return out;
}

}  // namespace

std::vector<Integer> primes_up_to(Integer limit) {
  if (limit < 2) return {};
  if (limit <= kDefaultSegmentSize) return small_primes(limit);
  SegmentedSieve sieve(2, limit, kDefaultSegmentSize, std::max(limit, kDefaultMaxBound));
  std::vector<Integer> out;
  std::vector<Integer> buf;
  for (std::size_t s = 0; s < sieve.segment_count(); ++s) {
    sieve.primes_in_segment(s, buf);
    out.insert(out.end(), buf.begin(), buf.end());
  }
  return out;
}

SegmentedSieve::SegmentedSieve(Integer lo, Integer hi, Integer segment_size, Integer max_bound)
    : lo_(lo), hi_(hi), segment_size_(segment_size) {
  if (lo < 2 || lo > hi) {
    throw InvalidArgument("segmented sieve needs 2 <= lo <= hi (got lo=" + std::to_string(lo) +
                          ", hi=" + std::to_string(hi) + ")");
  }
  if (hi > max_bound) {
    throw BoundExceeded("sieve bound " + std::to_string(hi) + " exceeds configured maximum " +
                        std::to_string(max_bound));
  }
  if (segment_size < 2) throw InvalidArgument("segment size must be at least 2");
  segment_count_ = static_cast<std::size_t>((hi - lo) / segment_size + 1);
  base_primes_ = small_primes(isqrt(hi));
}

std::pair<Integer, Integer> SegmentedSieve::segment_range(std::size_t index) const {
  const Integer a = lo_ + static_cast<Integer>(index) * segment_size_;
  const Integer b = std::min(hi_, a + segment_size_ - 1);
  return {a, b};
}

void SegmentedSieve::primes_in_segment(std::size_t index, std::vector<Integer>& out) const {
  out.clear();
  const auto [a, b] = segment_range(index);
  if (a <= 2 && 2 <= b) out.push_back(2);
  // odd candidates first_odd, first_odd+2, ..., <= b
  const Integer first_odd = std::max<Integer>(3, a | 1);
  if (first_odd > b) return;
  const std::size_t count = static_cast<std::size_t>((b - first_odd) / 2 + 1);
  std::vector<char> composite(count, 0);
  for (std::size_t i = 1; i < base_primes_.size(); ++i) {
    const Integer q = base_primes_[i];
    if (q * q > b) break;
    Integer start = std::max(q * q, (first_odd + q - 1) / q * q);
    if ((start & 1) == 0) start += q;
    for (Integer m = start; m <= b; m += 2 * q) composite[(m - first_odd) / 2] = 1;
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (!composite[i]) out.push_back(first_odd + 2 * static_cast<Integer>(i));
  }
}

PrimeStream::PrimeStream(Integer lo, Integer hi, Integer segment_size, Integer max_bound)
    : sieve_(lo, hi, segment_size, max_bound) {}

std::optional<Integer> PrimeStream::next() {
  while (pos_ >= buffer_.size()) {
    if (segment_ >= sieve_.segment_count()) return std::nullopt;
    sieve_.primes_in_segment(segment_++, buffer_);
    pos_ = 0;
  }
  return buffer_[pos_++];
}

PrimeStream stream_segmented(Integer lo, Integer hi, Integer segment_size, Integer max_bound) {
  return PrimeStream(lo, hi, segment_size, max_bound);
}

SpfTable::SpfTable(Integer limit, Integer cap) : limit_(limit) {
  if (limit < 2) throw InvalidArgument("SPF table needs limit >= 2");
  if (limit > cap) {
    throw BoundExceeded("SPF table limit " + std::to_string(limit) + " exceeds oracle cap " +
                        std::to_string(cap));
  }
  spf_.assign(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  for (Integer k = 2; k <= limit; ++k) {
    if (spf_[k] == 0) {
      spf_[k] = static_cast<std::uint32_t>(k);
      primes.push_back(static_cast<std::uint32_t>(k));
    }
    // linear sieve: each composite is written once, by its smallest prime
    for (std::uint32_t p : primes) {
      if (p > spf_[k] || p * k > limit) break;
      spf_[p * k] = p;
    }
  }
}

SpfTable spf_build(Integer limit, Integer cap) { return SpfTable(limit, cap); }

std::vector<PrimePower> factorize(Integer k, const SpfTable& table) {
  std::vector<PrimePower> out;
  if (k < 2) return out;
  if (k > table.limit()) {
    throw BoundExceeded("factorize: " + std::to_string(k) + " exceeds SPF table limit " +
                        std::to_string(table.limit()));
  }
  while (k > 1) {
    const Integer p = table.spf(k);
    unsigned e = 0;
    while (k % p == 0) {
      k /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  return out;
}

}  // namespace pmean
