#include "lrlc/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lrlc/numerics.hpp"

namespace lrlc {

namespace {
std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}
} // namespace

RunConfig RunConfig::from_string(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    if (cfg.kv.count(key))
      throw std::invalid_argument("config: duplicate key '" + key + "'");
    cfg.kv[key] = val;
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  RunConfig cfg = from_string(ss.str());
  cfg.apply_env_overrides();
  return cfg;
}

void RunConfig::apply_env_overrides(const char* prefix) {
  for (auto& [key, val] : kv) {
    std::string env = prefix;
    for (char c : key) env += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (const char* v = std::getenv(env.c_str())) val = v;
  }
}

std::string RunConfig::gets(const std::string& key, const std::string& def) const {
  consumed.insert(key);
  auto it = kv.find(key);
  return it == kv.end() ? def : it->second;
}

std::string RunConfig::require(const std::string& key) const {
  consumed.insert(key);
  auto it = kv.find(key);
  if (it == kv.end()) throw std::invalid_argument("config: missing required key '" + key + "'");
  return it->second;
}

long RunConfig::geti(const std::string& key, long def) const {
  consumed.insert(key);
  auto it = kv.find(key);
  if (it == kv.end()) return def;
  std::size_t pos = 0;
  const long v = std::stol(it->second, &pos);
  if (pos != it->second.size())
    throw std::invalid_argument("config: key '" + key + "' is not an integer");
  return v;
}

double RunConfig::getd(const std::string& key, double def) const {
  consumed.insert(key);
  auto it = kv.find(key);
  if (it == kv.end()) return def;
  std::size_t pos = 0;
  const double v = std::stod(it->second, &pos);
  if (pos != it->second.size())
    throw std::invalid_argument("config: key '" + key + "' is not a number");
  return v;
}

bool RunConfig::getb(const std::string& key, bool def) const {
  consumed.insert(key);
  auto it = kv.find(key);
  if (it == kv.end()) return def;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw std::invalid_argument("config: key '" + key + "' is not a boolean");
}

std::vector<double> RunConfig::get_list(const std::string& key,
                                        const std::vector<double>& def) const {
  consumed.insert(key);
  auto it = kv.find(key);
  if (it == kv.end()) return def;
  std::vector<double> out;
  std::istringstream ss(it->second);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

void RunConfig::finish() const {
  std::string extra;
  for (auto& [key, val] : kv)
    if (!consumed.count(key)) extra += (extra.empty() ? "" : ", ") + key;
  if (!extra.empty())
    throw std::invalid_argument("config: unknown keys: " + extra);
}

std::string RunConfig::canonical() const {
  std::string out;
  for (auto& [key, val] : kv) out += key + " = " + val + "\n";
  return out;
}

std::uint64_t RunConfig::hash() const { return fnv1a(canonical()); }

} // namespace lrlc
