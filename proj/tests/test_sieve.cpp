#include <doctest.h>

#include <numeric>
#include <vector>

#include "primemean/error.hpp"
#include "primemean/sieve.hpp"

using namespace pmean;

namespace {

// trial division, the slow independent oracle
bool naive_prime(Integer n) {
  if (n < 2) return false;
  for (Integer d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<Integer> drain(PrimeStream s) {
  std::vector<Integer> out;
  for (Integer p : s) out.push_back(p);
  return out;
}

}  // namespace

TEST_CASE("isqrt") {
  CHECK(isqrt(0) == 0);
  CHECK(isqrt(15) == 3);
  CHECK(isqrt(16) == 4);
  CHECK(isqrt(999'999'999'999ULL) == 999'999);
  CHECK(isqrt(~0ULL) == 4'294'967'295ULL);
}

TEST_CASE("primes_up_to matches trial division") {
  const auto primes = primes_up_to(20'000);
  std::vector<Integer> expected;
  for (Integer n = 0; n <= 20'000; ++n)
    if (naive_prime(n)) expected.push_back(n);
  CHECK(primes == expected);
  CHECK(primes_up_to(1).empty());
  CHECK(primes_up_to(2) == std::vector<Integer>{2});
  CHECK(primes_up_to(10) == std::vector<Integer>{2, 3, 5, 7});
  CHECK(primes_up_to(0).empty());
}

TEST_CASE("prime count to 1e6") {
  // byte-per-number sieve, no segmentation or odd-only packing
  std::vector<char> composite(1'000'001, 0);
  Integer count = 0;
  for (Integer i = 2; i <= 1'000'000; ++i) {
    if (composite[i]) continue;
    ++count;
    for (Integer j = i * i; j <= 1'000'000; j += i) composite[j] = 1;
  }
  CHECK(count == 78498);
  CHECK(primes_up_to(1'000'000).size() == count);
}

TEST_CASE("stream windows") {
  CHECK(drain(stream_segmented(2, 30, 16)) == std::vector<Integer>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
  CHECK(drain(stream_segmented(20, 30, 8)) == std::vector<Integer>{23, 29});
  CHECK(drain(stream_segmented(24, 28, 8)).empty());
  CHECK(drain(stream_segmented(2, 2, 8)) == std::vector<Integer>{2});
  CHECK_THROWS_AS(stream_segmented(1, 10, 8), InvalidArgument);
  CHECK_THROWS_AS(stream_segmented(10, 9, 8), InvalidArgument);
}

TEST_CASE("stream agrees with primes_up_to across segment sizes") {
  const auto reference = primes_up_to(100'000);
  for (Integer seg : {Integer{2}, Integer{7}, Integer{64}, Integer{1000}, Integer{1} << 20}) {
    CAPTURE(seg);
    CHECK(drain(stream_segmented(2, 100'000, seg)) == reference);
  }
  std::vector<Integer> window;
  for (Integer p : reference)
    if (p >= 4321 && p <= 56789) window.push_back(p);
  CHECK(drain(stream_segmented(4321, 56789, 100)) == window);
}

TEST_CASE("prime count to 1e8 by segmented stream" * doctest::timeout(120)) {
  // cross-count: primes_up_to over 1e7-wide chunks
  Integer chunked = 0;
  const auto base = primes_up_to(10'000'000);
  chunked += base.size();
  for (Integer lo = 10'000'001; lo <= 100'000'000; lo += 10'000'000) {
    SegmentedSieve s(lo, lo + 9'999'999, 10'000'000);
    std::vector<Integer> seg;
    for (std::size_t i = 0; i < s.segment_count(); ++i) {
      s.primes_in_segment(i, seg);
      chunked += seg.size();
    }
  }
  CHECK(chunked == 5'761'455);
  auto stream = stream_segmented(2, 100'000'000, Integer{1} << 20);
  Integer streamed = 0;
  while (stream.next()) ++streamed;
  CHECK(streamed == 5'761'455);
}

TEST_CASE("sieve bound enforced") {
  CHECK_THROWS_AS(SegmentedSieve(2, 2'000, 64, 1'000), BoundExceeded);
  CHECK_THROWS_AS(stream_segmented(2, kDefaultMaxBound + 1), BoundExceeded);
}

TEST_CASE("spf table and factorize") {
  const SpfTable small = spf_build(12);
  CHECK(small.spf(12) == 2);
  CHECK(factorize(12, small) == std::vector<PrimePower>{{2, 2}, {3, 1}});
  CHECK(factorize(7, small) == std::vector<PrimePower>{{7, 1}});
  const SpfTable table = spf_build(200'000);
  CHECK(table.spf(49) == 7);
  CHECK(table.spf(9973) == 9973);
  CHECK(factorize(151200, table) == std::vector<PrimePower>{{2, 5}, {3, 3}, {5, 2}, {7, 1}});
  CHECK(factorize(1, table).empty());
  CHECK(factorize(199'999, table) == std::vector<PrimePower>{{199'999, 1}});
  for (Integer k = 2; k <= 200'000; k += 37) {
    Integer product = 1;
    Integer last = 0;
    for (auto [p, a] : factorize(k, table)) {
      CHECK(naive_prime(p));
      CHECK(p > last);
      last = p;
      for (unsigned i = 0; i < a; ++i) product *= p;
    }
    CHECK(product == k);
  }
  CHECK(table.is_prime(199'999));
  CHECK_FALSE(table.is_prime(200'000));
  CHECK_THROWS(spf_build(1'000, 100));
}
