#ifndef ZERMELO_CONFIG_HPP
#define ZERMELO_CONFIG_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace zermelo {

/// Flat key=value settings file.  '#' starts a comment, blank lines are
/// skipped, keys may appear once.  Unknown keys and malformed lines throw
/// invalid_config_error.
class Config {
public:
  Config() = default;

  static Config parse(std::istream& in, const std::vector<std::string>& allowed_keys);
  static Config parse_file(const std::string& path, const std::vector<std::string>& allowed_keys);

  bool has(const std::string& key) const;

  // Typed access with a fallback; throws invalid_config_error when the
  // stored text does not parse as the requested type.
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const;

private:
  std::map<std::string, std::string> values_;
};

/// Every key the command-line tool understands.
const std::vector<std::string>& known_config_keys();

} // namespace zermelo

#endif
