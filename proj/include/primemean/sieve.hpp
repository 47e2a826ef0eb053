#pragma once

#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace pmean {

using Integer = std::uint64_t;

inline constexpr Integer kDefaultMaxBound = 1'000'000'000;
inline constexpr Integer kDefaultSegmentSize = Integer{1} << 20;
inline constexpr Integer kDefaultSpfCap = 10'000'000;

struct SieveConfig {
  Integer max_bound = kDefaultMaxBound;
  Integer segment_size = kDefaultSegmentSize;
};

/// Largest r with r*r <= n.
Integer isqrt(Integer n);

/// All primes <= limit, ascending.
std::vector<Integer> primes_up_to(Integer limit);

/// Odd-only segmented sieve over [lo, hi] split into fixed-size segments.
/// Immutable after construction; `primes_in_segment` may be called
/// concurrently for distinct (or equal) segment indices.
class SegmentedSieve {
 public:
  SegmentedSieve(Integer lo, Integer hi, Integer segment_size, Integer max_bound = kDefaultMaxBound);

  Integer lo() const { return lo_; }
  Integer hi() const { return hi_; }
  Integer segment_size() const { return segment_size_; }
  std::size_t segment_count() const { return segment_count_; }
  std::pair<Integer, Integer> segment_range(std::size_t index) const;

  /// Primes up to isqrt(hi), used to sieve every segment.
  std::span<const Integer> base_primes() const { return base_primes_; }

  /// Replaces `out` with the primes of segment `index`, ascending.
  void primes_in_segment(std::size_t index, std::vector<Integer>& out) const;

 private:
  Integer lo_;
  Integer hi_;
  Integer segment_size_;
  std::size_t segment_count_;
  std::vector<Integer> base_primes_;
};

/// Pull-style stream of the primes in [lo, hi].
class PrimeStream {
 public:
  PrimeStream(Integer lo, Integer hi, Integer segment_size, Integer max_bound = kDefaultMaxBound);

  std::optional<Integer> next();

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Integer;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    explicit iterator(PrimeStream* s) : stream_(s) { ++*this; }
    Integer operator*() const { return current_; }
    iterator& operator++() {
      auto p = stream_->next();
      if (p) {
        current_ = *p;
      } else {
        stream_ = nullptr;
      }
      return *this;
    }
    void operator++(int) { ++*this; }
    bool operator==(const iterator& o) const { return stream_ == o.stream_; }

   private:
    PrimeStream* stream_ = nullptr;
    Integer current_ = 0;
  };

  iterator begin() { return iterator(this); }
  iterator end() { return {}; }

 private:
  SegmentedSieve sieve_;
  std::size_t segment_ = 0;
  std::vector<Integer> buffer_;
  std::size_t pos_ = 0;
};

PrimeStream stream_segmented(Integer lo, Integer hi, Integer segment_size = kDefaultSegmentSize,
                             Integer max_bound = kDefaultMaxBound);

/// Smallest-prime-factor table for 2 <= k <= limit.
class SpfTable {
 public:
  explicit SpfTable(Integer limit, Integer cap = kDefaultSpfCap);

  Integer limit() const { return limit_; }
  Integer spf(Integer k) const { return spf_[k]; }
  bool is_prime(Integer k) const { return k >= 2 && k <= limit_ && spf_[k] == k; }

 private:
  Integer limit_;
  std::vector<std::uint32_t> spf_;
};

SpfTable spf_build(Integer limit, Integer cap = kDefaultSpfCap);

struct PrimePower {
  Integer prime;
  unsigned exponent;
  bool operator==(const PrimePower&) const = default;
};

/// Prime factorization with ascending primes; empty for k < 2.
std::vector<PrimePower> factorize(Integer k, const SpfTable& table);

}  // namespace pmean
