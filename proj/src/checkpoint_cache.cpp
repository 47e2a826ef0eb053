#include "primemean/checkpoint_cache.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <iterator>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include "primemean/error.hpp"

namespace pmean {

namespace {

constexpr std::uint8_t kMagic[4] = {'P', 'M', 'S', 'M'};

class Writer {
 public:
  void u16(std::uint16_t v) { put(v, 2); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v), 8); }
  void pair(const CompensatedSum& s) {
    f64(s.sum());
    f64(s.compensation());
  }
  void raw(const std::uint8_t* p, std::size_t n) { bytes.insert(bytes.end(), p, p + n); }
  std::vector<std::uint8_t> bytes;

 private:
  void put(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint64_t u64() { return get(8); }
  double f64() { return std::bit_cast<double>(get(8)); }
  std::pair<double, double> pair() {
    const double v = f64();
    return {v, f64()};
  }
  std::size_t pos() const { return pos_; }

 private:
  std::uint64_t get(int width) {
    if (pos_ + static_cast<std::size_t>(width) > b_.size()) throw InvalidArgument("cache file truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= std::uint64_t{b_[pos_ + static_cast<std::size_t>(i)]} << (8 * i);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

}  // namespace

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (std::uint8_t c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64(std::string_view text) {
  return fnv1a64(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<std::uint8_t> encode_report(const SumsReport& report) {
  Writer w;
  w.raw(kMagic, 4);
  w.u16(kCacheVersion);
  w.u64(fnv1a64(report.model_identity));
  w.u16(static_cast<std::uint16_t>(report.rows.size()));
  w.u16(report.has_u ? 1 : 0);
  for (const auto& row : report.rows) {
    w.u64(row.n);
    w.u64(row.s1);
    for (const CompensatedSum* s : {&row.s2, &row.s3, &row.f1, &row.f2, &row.r, &row.m, &row.u, &row.n_log_g}) {
      w.pair(*s);
    }
    w.f64(row.err_bound());
  }
  w.u64(fnv1a64(w.bytes));
  return std::move(w.bytes);
}

SumsReport decode_report(std::span<const std::uint8_t> bytes, const std::string& model_identity) {
  if (bytes.size() < 4 + 2 + 8 + 2 + 2 + 8 || !std::equal(kMagic, kMagic + 4, bytes.begin())) {
    throw InvalidArgument("not a checkpoint cache file");
  }
  const std::size_t body = bytes.size() - 8;
  Reader trailer(bytes.subspan(body));
  if (trailer.u64() != fnv1a64(bytes.first(body))) throw InvalidArgument("cache checksum mismatch");

  Reader h(bytes.first(body));
  h.u16();
  h.u16();  // magic, checked above
  if (h.u16() != kCacheVersion) throw InvalidArgument("cache version mismatch");
  if (h.u64() != fnv1a64(model_identity)) throw InvalidArgument("cache model hash mismatch");
  const std::size_t count = h.u16();
  const std::uint16_t flags = h.u16();
  if (flags > 1) throw InvalidArgument("cache file has unknown flags");

  SumsReport report;
  report.model_identity = model_identity;
  report.has_u = (flags & 1) != 0;
  for (std::size_t i = 0; i < count; ++i) {
    CheckpointSums row;
    row.n = h.u64();
    row.s1 = h.u64();
    std::pair<double, double> pairs[8];
    for (auto& p : pairs) p = h.pair();
    const double err = h.f64();
    CompensatedSum* fields[] = {&row.s2, &row.s3, &row.f1, &row.f2, &row.r, &row.m, &row.u, &row.n_log_g};
    for (int k = 0; k < 8; ++k) *fields[k] = CompensatedSum::from_parts(pairs[k].first, pairs[k].second, err);
    report.rows.push_back(row);
  }
  if (h.pos() != body) throw InvalidArgument("cache file has trailing bytes");
  return report;
}

CheckpointCache::CheckpointCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path CheckpointCache::file_for(const std::string& model_identity,
                                                const CheckpointGrid& grid) const {
  Writer w;
  for (Integer n : grid.points()) w.u64(n);
  const std::uint64_t key = fnv1a64(w.bytes, fnv1a64(model_identity));
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.pmsm", static_cast<unsigned long long>(key));
  return dir_ / name;
}

std::optional<SumsReport> CheckpointCache::load(const std::string& model_identity,
                                                const CheckpointGrid& grid) const {
  const auto path = file_for(model_identity, grid);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    SumsReport report = decode_report(bytes, model_identity);
    if (report.rows.size() != grid.size()) return std::nullopt;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (report.rows[i].n != grid.points()[i]) return std::nullopt;
    }
    return report;
  } catch (const InvalidArgument&) {
    return std::nullopt;
  }
}

void CheckpointCache::store(const SumsReport& report, const CheckpointGrid& grid) const {
  std::filesystem::create_directories(dir_);
  write_report_file(file_for(report.model_identity, grid), report);
}

void write_report_file(const std::filesystem::path& path, const SumsReport& report) {
  const std::vector<std::uint8_t> bytes = encode_report(report);
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT, 0644);
  if (fd < 0) throw Error("cannot open " + path.string() + " for writing");
  if (::flock(fd, LOCK_EX) != 0 || ::ftruncate(fd, 0) != 0) {
    ::close(fd);
    throw Error("cannot lock " + path.string());
  }
  std::size_t done = 0;
  while (done < bytes.size()) {
    const ssize_t n = ::write(fd, bytes.data() + done, bytes.size() - done);
    if (n <= 0) {
      ::close(fd);
      throw Error("short write to " + path.string());
    }
    done += static_cast<std::size_t>(n);
  }
  ::flock(fd, LOCK_UN);
  ::close(fd);
}

}  // namespace pmean
