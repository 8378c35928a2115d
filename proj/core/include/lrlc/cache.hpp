#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lrlc {

enum class CacheKind : std::uint32_t {
  Kernel = 1,
  Green = 2,
  NStep = 3,
  Pi = 4,
  EffectiveKernel = 5,
};

// Binary cache record. On disk (all little-endian):
//   magic "LRLC" | version u32 | kind u32 | d u32 | M u32 |
//   count u64 | content_hash u64 | payload count x f64
struct CacheEntry {
  CacheKind kind = CacheKind::Kernel;
  std::uint32_t d = 0;
  std::uint32_t M = 0;
  std::uint64_t content_hash = 0;
  std::vector<double> payload;
};

inline constexpr std::uint32_t kCacheFormatVersion = 1;

// Hash of (parameter tag, operation, format version); the cache key.
std::uint64_t cache_content_hash(const std::string& params_tag, const std::string& operation);

// write-temp-then-rename; the cache directory must exist
void cache_write_atomic(const std::string& path, const CacheEntry& entry);

// nullopt on missing file, bad magic/version, short reads, or size mismatch
std::optional<CacheEntry> cache_read(const std::string& path);

} // namespace lrlc
