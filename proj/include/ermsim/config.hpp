#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ermsim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key=value configuration with dotted section prefixes
// (dgp.kind=..., loss.kind=...). Lines starting with '#' and blank lines are
// ignored. Errors carry file:line diagnostics.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& name = "<string>");

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key) const;
  long get_long(const std::string& key, long fallback) const;
  unsigned long long get_u64(const std::string& key, unsigned long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;  // comma list
  std::vector<long> get_longs(const std::string& key) const;

  // All keys under "<prefix>." (for echoing sections into sidecar files).
  std::vector<std::pair<std::string, std::string>> section(const std::string& prefix) const;

  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  const Entry& require(const std::string& key) const;
  std::map<std::string, Entry> entries_;
  std::string name_;
};

}  // namespace ermsim
