#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "primemean/primesums.hpp"

namespace pmean {

inline constexpr std::uint16_t kCacheVersion = 1;

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a64(std::string_view text);

/// Little-endian layout:
///   "PMSM" | version u16 | FNV-1a(model identity) u64 | grid length u16 |
///     flags u16 (bit 0: u present)
///   per checkpoint: n u64 | s1 u64 | (value, compensation) f64 pairs for
///     s2 s3 f1 f2 r m u n_log_g | err_bound f64
///   FNV-1a of every preceding byte, u64
std::vector<std::uint8_t> encode_report(const SumsReport& report);

/// Throws InvalidArgument on a bad magic, version, checksum, or model hash.
SumsReport decode_report(std::span<const std::uint8_t> bytes, const std::string& model_identity);

/// Cache directory keyed by (model, grid). Writes hold an exclusive flock.
class CheckpointCache {
 public:
  explicit CheckpointCache(std::filesystem::path dir);

  std::filesystem::path file_for(const std::string& model_identity, const CheckpointGrid& grid) const;
  /// nullopt when absent, stale (version), corrupt, or computed for another grid.
  std::optional<SumsReport> load(const std::string& model_identity, const CheckpointGrid& grid) const;
  void store(const SumsReport& report, const CheckpointGrid& grid) const;

 private:
  std::filesystem::path dir_;
};

void write_report_file(const std::filesystem::path& path, const SumsReport& report);

}  // namespace pmean
