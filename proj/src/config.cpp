#include "plnash/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace plnash {

namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  const std::size_t b = s.find_first_not_of(ws);
  if (b == std::string::npos) return {};
  const std::size_t e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (v.empty()) throw ConfigError("key '" + key + "': empty numeric value");
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || errno == ERANGE) {
    throw ConfigError("key '" + key + "': cannot parse '" + v + "' as a number");
  }
  return x;
}

long long parse_int(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (v.empty()) throw ConfigError("key '" + key + "': empty integer value");
  errno = 0;
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || errno == ERANGE) {
    throw ConfigError("key '" + key + "': cannot parse '" + v + "' as an integer");
  }
  return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (v.empty() || v[0] == '-') {
    throw ConfigError("key '" + key + "': seed entries must be non-negative integers, got '" + v +
                      "'");
  }
  errno = 0;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || errno == ERANGE) {
    throw ConfigError("key '" + key + "': cannot parse '" + v + "' as a seed");
  }
  return static_cast<std::uint64_t>(x);
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  int line_no = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" + t +
                        "'");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    }
    if (!cfg.entries_.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string Config::serialize() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

void Config::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file '" + path + "'");
  out << serialize();
}

const std::string& Config::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing key '" + key + "'");
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
  return parse_double(key, get_string(key));
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : parse_double(key, it->second);
}

long long Config::get_int(const std::string& key) const { return parse_int(key, get_string(key)); }

long long Config::get_int(const std::string& key, long long fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : parse_int(key, it->second);
}

std::vector<std::string> Config::get_list(const std::string& key) const {
  std::vector<std::string> out;
  for (const std::string& tok : split(get_string(key), ',')) {
    const std::string t = trim(tok);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::vector<double> Config::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& tok : get_list(key)) out.push_back(parse_double(key, tok));
  return out;
}

std::vector<std::uint64_t> Config::get_seeds(const std::string& key) const {
  std::vector<std::uint64_t> out;
  for (const std::string& tok : get_list(key)) {
    const std::size_t dots = tok.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_u64(key, tok));
      continue;
    }
    const std::uint64_t a = parse_u64(key, tok.substr(0, dots));
    const std::uint64_t b = parse_u64(key, tok.substr(dots + 2));
    if (b < a) {
      throw ConfigError("key '" + key + "': descending seed range '" + tok + "'");
    }
    if (b - a >= 1000000ULL) {
      throw ConfigError("key '" + key + "': seed range '" + tok + "' is too large");
    }
    for (std::uint64_t s = a; s <= b; ++s) out.push_back(s);
  }
  return out;
}

void Config::set(const std::string& key, const std::string& value) {
  entries_[key] = trim(value);
}

void Config::set_double(const std::string& key, double value) { set(key, format_g17(value)); }

void Config::set_int(const std::string& key, long long value) { set(key, std::to_string(value)); }

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

}  // namespace plnash
