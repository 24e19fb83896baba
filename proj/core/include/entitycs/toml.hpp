#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace entitycs {

// Minimal TOML subset, enough for run configs: [section] tables one level
// deep, string/integer/float/boolean values, '#' comments. Keys are stored
// as "section.key".
class TomlFile {
 public:
  static TomlFile parse_file(const std::string& path);
  static TomlFile parse(const std::string& text, const std::string& origin);

  std::optional<std::string> get_string(const std::string& key) const;
  std::optional<int64_t> get_int(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<bool> get_bool(const std::string& key) const;
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::map<std::string, std::string>& raw() const { return values_; }

 private:
  std::map<std::string, std::string> values_;  // raw value text, unquoted
  std::string origin_;
};

}  // namespace entitycs
