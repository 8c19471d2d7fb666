#include "zermelo/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "zermelo/common.hpp"

namespace zermelo {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end)
    throw invalid_config_error("config key '" + key + "': not a number: '" + text + "'");
  return value;
}

} // namespace

Config Config::parse(std::istream& in, const std::vector<std::string>& allowed_keys) {
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw invalid_config_error("config line " + std::to_string(lineno) +
                                 ": expected key=value, got '" + text + "'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty())
      throw invalid_config_error("config line " + std::to_string(lineno) + ": empty key");
    if (std::find(allowed_keys.begin(), allowed_keys.end(), key) == allowed_keys.end())
      throw invalid_config_error("config line " + std::to_string(lineno) +
                                 ": unknown key '" + key + "'");
    if (!cfg.values_.emplace(key, value).second)
      throw invalid_config_error("config line " + std::to_string(lineno) +
                                 ": duplicate key '" + key + "'");
  }
  return cfg;
}

Config Config::parse_file(const std::string& path, const std::vector<std::string>& allowed_keys) {
  std::ifstream in(path);
  if (!in) throw invalid_config_error("cannot open config file: " + path);
  return parse(in, allowed_keys);
}

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  return parse_double(key, it->second);
}

int Config::get_int(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  int value = 0;
  const char* begin = it->second.data();
  const char* end = begin + it->second.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end)
    throw invalid_config_error("config key '" + key + "': not an integer: '" +
                               it->second + "'");
  return value;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw invalid_config_error("config key '" + key + "': not a boolean: '" + it->second +
                             "'");
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::vector<double> Config::get_double_list(const std::string& key,
                                            const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  std::istringstream stream(it->second);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const std::string text = trim(item);
    if (text.empty())
      throw invalid_config_error("config key '" + key + "': empty list entry");
    out.push_back(parse_double(key, text));
  }
  if (out.empty()) throw invalid_config_error("config key '" + key + "': empty list");
  return out;
}

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys = {
      "airspeed",    "n",           "field",        "tol",
      "max_iterations", "classify_eps", "hf_min",   "hf_max",
      "hf_steps",    "lf_min",      "lf_max",       "lf_steps",
      "k_hf",        "k_lf",        "segments",     "passes",
      "hessian",     "iso_levels",  "threads",      "seed",
      "multistart_amplitudes",
  };
  return keys;
}

} // namespace zermelo
