#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace plnash {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat `key = value` text config: one pair per line, `#` starts a comment
// line, blank lines ignored, dotted keys spell nesting (`cournot.a = 10`).
// Duplicate keys are an error; serialization is sorted by key, so
// parse(serialize()) is the identity on the map.
class Config {
 public:
  Config() = default;

  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  std::string serialize() const;
  void save(const std::string& path) const;

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  const std::string& get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;

  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;

  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;

  // Comma-separated list of non-empty trimmed tokens.
  std::vector<std::string> get_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;

  // Seed lists: comma-separated integers and/or inclusive ranges `a..b`,
  // e.g. "1..20" or "1,2,5..8".
  std::vector<std::uint64_t> get_seeds(const std::string& key) const;

  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double value);
  void set_int(const std::string& key, long long value);

  const std::map<std::string, std::string>& entries() const { return entries_; }

  friend bool operator==(const Config& a, const Config& b) { return a.entries_ == b.entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

// Shared numeric formatting: shortest round-trip-exact decimal (%.17g).
std::string format_g17(double v);

}  // namespace plnash
