#include "lrlc/cache.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

#include "lrlc/numerics.hpp"

namespace lrlc {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

bool get_u32(std::istream& in, std::uint32_t& v) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) return false;
  v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return true;
}

bool get_u64(std::istream& in, std::uint64_t& v) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) return false;
  v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return true;
}

} // namespace

std::uint64_t cache_content_hash(const std::string& params_tag, const std::string& operation) {
  std::string key = params_tag + "|" + operation + "|v" + std::to_string(kCacheFormatVersion);
  return fnv1a(key);
}

void cache_write_atomic(const std::string& path, const CacheEntry& entry) {
  std::string blob;
  blob.reserve(40 + entry.payload.size() * 8);
  blob += "LRLC";
  put_u32(blob, kCacheFormatVersion);
  put_u32(blob, static_cast<std::uint32_t>(entry.kind));
  put_u32(blob, entry.d);
  put_u32(blob, entry.M);
  put_u64(blob, entry.payload.size());
  put_u64(blob, entry.content_hash);
  for (double x : entry.payload) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, 8);
    put_u64(blob, bits);
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!out) {
      std::remove(tmp.c_str());
      throw std::runtime_error("cache: write failed for " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cache: rename failed for " + path);
  }
}

std::optional<CacheEntry> cache_read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "LRLC", 4) != 0) return std::nullopt;
  std::uint32_t version = 0, kind = 0;
  CacheEntry e;
  std::uint64_t count = 0;
  if (!get_u32(in, version) || version != kCacheFormatVersion) return std::nullopt;
  if (!get_u32(in, kind) || !get_u32(in, e.d) || !get_u32(in, e.M)) return std::nullopt;
  if (!get_u64(in, count) || !get_u64(in, e.content_hash)) return std::nullopt;
  if (count > (1ULL << 33)) return std::nullopt;
  e.kind = static_cast<CacheKind>(kind);
  e.payload.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint64_t bits;
    if (!get_u64(in, bits)) return std::nullopt;
    std::memcpy(&e.payload[i], &bits, 8);
  }
  // trailing garbage means a corrupt or foreign file
  char extra;
  if (in.read(&extra, 1)) return std::nullopt;
  return e;
}

} // namespace lrlc
