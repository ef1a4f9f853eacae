#include "ermsim/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ermsim {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text, const std::string& context) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw ConfigError(context + ": expected a number, got '" + text + "'");
  }
  if (pos != text.size())
    throw ConfigError(context + ": expected a number, got '" + text + "'");
  return v;
}

long parse_long(const std::string& text, const std::string& context) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(text, &pos);
  } catch (const std::exception&) {
    throw ConfigError(context + ": expected an integer, got '" + text + "'");
  }
  if (pos != text.size())
    throw ConfigError(context + ": expected an integer, got '" + text + "'");
  return v;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& name) {
  Config cfg;
  cfg.name_ = name;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(name + ":" + std::to_string(lineno) +
                        ": expected key=value, got '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");
    if (cfg.entries_.count(key))
      throw ConfigError(name + ":" + std::to_string(lineno) +
                        ": duplicate key '" + key + "'");
    cfg.entries_[key] = {value, lineno};
  }
  return cfg;
}

const Config::Entry& Config::require(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end())
    throw ConfigError(name_ + ": missing required field '" + key + "'");
  return it->second;
}

void Config::fail(const std::string& key, const std::string& message) const {
  const auto it = entries_.find(key);
  const std::string line =
      it == entries_.end() ? "?" : std::to_string(it->second.line);
  throw ConfigError(name_ + ":" + line + ": field '" + key + "': " + message);
}

std::string Config::get_string(const std::string& key) const {
  return require(key).value;
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second.value;
}

double Config::get_double(const std::string& key) const {
  const Entry& e = require(key);
  return parse_double(e.value, name_ + ":" + std::to_string(e.line) +
                                    ": field '" + key + "'");
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long Config::get_long(const std::string& key) const {
  const Entry& e = require(key);
  return parse_long(e.value, name_ + ":" + std::to_string(e.line) +
                                 ": field '" + key + "'");
}

long Config::get_long(const std::string& key, long fallback) const {
  return has(key) ? get_long(key) : fallback;
}

unsigned long long Config::get_u64(const std::string& key,
                                   unsigned long long fallback) const {
  if (!has(key)) return fallback;
  const Entry& e = entries_.at(key);
  const std::string context =
      name_ + ":" + std::to_string(e.line) + ": field '" + key + "'";
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(e.value, &pos);
  } catch (const std::exception&) {
    throw ConfigError(context + ": expected an unsigned integer, got '" + e.value + "'");
  }
  if (pos != e.value.size())
    throw ConfigError(context + ": expected an unsigned integer, got '" + e.value + "'");
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const Entry& e = entries_.at(key);
  if (e.value == "true" || e.value == "1") return true;
  if (e.value == "false" || e.value == "0") return false;
  fail(key, "expected true/false");
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  const Entry& e = require(key);
  const std::string context =
      name_ + ":" + std::to_string(e.line) + ": field '" + key + "'";
  std::vector<double> out;
  std::istringstream in(e.value);
  std::string item;
  while (std::getline(in, item, ','))
    out.push_back(parse_double(trim(item), context));
  if (out.empty()) throw ConfigError(context + ": empty list");
  return out;
}

std::vector<long> Config::get_longs(const std::string& key) const {
  const Entry& e = require(key);
  const std::string context =
      name_ + ":" + std::to_string(e.line) + ": field '" + key + "'";
  std::vector<long> out;
  std::istringstream in(e.value);
  std::string item;
  while (std::getline(in, item, ','))
    out.push_back(parse_long(trim(item), context));
  if (out.empty()) throw ConfigError(context + ": empty list");
  return out;
}

std::vector<std::pair<std::string, std::string>> Config::section(
    const std::string& prefix) const {
  std::vector<std::pair<std::string, std::string>> out;
  const std::string dotted = prefix + ".";
  for (const auto& [key, entry] : entries_)
    if (key.rfind(dotted, 0) == 0) out.emplace_back(key, entry.value);
  return out;
}

}  // namespace ermsim
