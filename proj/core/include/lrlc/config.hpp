#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace lrlc {

// Flat key = value run configuration. Typed getters mark keys consumed;
// finish() rejects anything left over, so misspelled keys cannot pass
// silently. Environment variables LRLC_<KEY> override file values.
struct RunConfig {
  std::map<std::string, std::string> kv;
  mutable std::set<std::string> consumed;

  static RunConfig from_string(const std::string& text);
  static RunConfig from_file(const std::string& path); // applies env overrides
  void apply_env_overrides(const char* prefix = "LRLC_");

  bool has(const std::string& key) const { return kv.count(key) != 0; }
  std::string gets(const std::string& key, const std::string& def) const;
  std::string require(const std::string& key) const;
  long geti(const std::string& key, long def) const;
  double getd(const std::string& key, double def) const;
  bool getb(const std::string& key, bool def) const;
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& def) const;

  void finish() const; // throws std::invalid_argument on unconsumed keys

  std::string canonical() const; // sorted key=value lines
  std::uint64_t hash() const;    // content hash of the canonical form
};

} // namespace lrlc
