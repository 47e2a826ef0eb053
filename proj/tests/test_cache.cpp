#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "primemean/checkpoint_cache.hpp"
#include "primemean/error.hpp"

using namespace pmean;
namespace fs = std::filesystem;

namespace {

SumsReport sample_report(const std::string& model = "euler_phi") {
  return sums_stream(builtin(model), CheckpointGrid({10, 1000, 123'457}));
}

fs::path scratch(const char* name) {
  fs::path dir = fs::temp_directory_path() / ("pmean-cache-test-" + std::string(name));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("encode/decode round trip is lossless") {
  const SumsReport rep = sample_report();
  const auto bytes = encode_report(rep);
  CHECK(bytes[0] == 'P');
  CHECK(bytes[3] == 'M');
  const SumsReport back = decode_report(bytes, rep.model_identity);
  REQUIRE(back.rows.size() == rep.rows.size());
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& a = rep.rows[i];
    const auto& b = back.rows[i];
    CHECK(a.n == b.n);
    CHECK(a.s1 == b.s1);
    CHECK(a.s2.sum() == b.s2.sum());
    CHECK(a.s2.compensation() == b.s2.compensation());
    CHECK(a.u.value() == b.u.value());
    CHECK(a.n_log_g.value() == b.n_log_g.value());
    CHECK(a.err_bound() == doctest::Approx(b.err_bound()));
  }
  CHECK(encode_report(back) == bytes);
}

TEST_CASE("corruption is detected") {
  const SumsReport rep = sample_report();
  const auto bytes = encode_report(rep);
  for (std::size_t pos : {std::size_t{0}, std::size_t{5}, std::size_t{20}, bytes.size() / 2, bytes.size() - 1}) {
    auto bad = bytes;
    bad[pos] ^= 0x40;
    CHECK_THROWS_AS(decode_report(bad, rep.model_identity), InvalidArgument);
  }
  std::vector<std::uint8_t> truncated(bytes.begin(), bytes.end() - 9);
  CHECK_THROWS_AS(decode_report(truncated, rep.model_identity), InvalidArgument);
  CHECK_THROWS_AS(decode_report(bytes, "kappa"), InvalidArgument);
}

TEST_CASE("cache directory store and load") {
  const fs::path dir = scratch("store");
  const CheckpointCache cache(dir);
  const CheckpointGrid grid({10, 1000, 123'457});
  const SumsReport rep = sample_report();
  CHECK_FALSE(cache.load(rep.model_identity, grid).has_value());
  cache.store(rep, grid);
  const auto loaded = cache.load(rep.model_identity, grid);
  REQUIRE(loaded.has_value());
  CHECK(encode_report(*loaded) == encode_report(rep));
  // another grid or model misses
  CHECK_FALSE(cache.load(rep.model_identity, CheckpointGrid({10, 1000})).has_value());
  CHECK(cache.file_for("kappa", grid) != cache.file_for(rep.model_identity, grid));
  // a corrupted file is treated as absent
  {
    std::fstream f(cache.file_for(rep.model_identity, grid), std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(30);
    f.put('\x7f');
  }
  CHECK_FALSE(cache.load(rep.model_identity, grid).has_value());
  fs::remove_all(dir);
}

TEST_CASE("stale version is a miss") {
  const fs::path dir = scratch("version");
  const CheckpointCache cache(dir);
  const CheckpointGrid grid({10, 1000, 123'457});
  const SumsReport rep = sample_report();
  cache.store(rep, grid);
  const fs::path file = cache.file_for(rep.model_identity, grid);
  std::vector<std::uint8_t> bytes(fs::file_size(file));
  {
    std::ifstream in(file, std::ios::binary);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  bytes[4] = kCacheVersion + 1;
  // re-seal the checksum so only the version differs
  const std::uint64_t h = fnv1a64(std::span(bytes).first(bytes.size() - 8));
  for (int i = 0; i < 8; ++i) bytes[bytes.size() - 8 + i] = static_cast<std::uint8_t>(h >> (8 * i));
  {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  CHECK_THROWS_AS(decode_report(bytes, rep.model_identity), InvalidArgument);
  CHECK_FALSE(cache.load(rep.model_identity, grid).has_value());
  fs::remove_all(dir);
}
