#include "entitycs/toml.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "entitycs/errors.hpp"

namespace entitycs {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

// Strips a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

std::string unquote(std::string_view raw, const std::string& where) {
  std::string out;
  out.reserve(raw.size());
  for (size_t i = 1; i + 1 < raw.size(); ++i) {
    char c = raw[i];
    if (c != '\\') {
      out += c;
      continue;
    }
    if (i + 2 >= raw.size())
      throw InputError(where + ": dangling escape in string");
    char e = raw[++i];
    switch (e) {
      case '"': out += '"'; break;
      case '\\': out += '\\'; break;
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      default:
        throw InputError(where + ": unsupported escape \\" + std::string(1, e));
    }
  }
  return out;
}

}  // namespace

TomlFile TomlFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

TomlFile TomlFile::parse(const std::string& text, const std::string& origin) {
  TomlFile out;
  out.origin_ = origin;
  std::string section;
  size_t lineno = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line =
        trim(strip_comment(std::string_view(text).substr(pos, eol - pos)));
    pos = eol + 1;
    ++lineno;
    auto where = [&] {
      return origin + ":" + std::to_string(lineno);
    };
    if (line.empty()) {
      if (pos > text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        throw InputError(where() + ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw InputError(where() + ": expected key = value");
    std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw InputError(where() + ": empty key or value");
    std::string full = section.empty() ? key : section + "." + key;
    std::string stored;
    if (value.front() == '"') {
      if (value.size() < 2 || value.back() != '"')
        throw InputError(where() + ": unterminated string");
      stored = unquote(value, where());
    } else {
      stored = std::string(value);
    }
    out.values_[full] = std::move(stored);
  }
  return out;
}

std::optional<std::string> TomlFile::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::optional<int64_t> TomlFile::get_int(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  const std::string& raw = it->second;
  int64_t value = 0;
  auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
  if (ec != std::errc() || ptr != raw.data() + raw.size())
    throw InputError(origin_ + ": '" + key + "' is not an integer: " + raw);
  return value;
}

std::optional<double> TomlFile::get_double(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  try {
    size_t consumed = 0;
    double value = std::stod(it->second, &consumed);
    if (consumed != it->second.size()) throw std::invalid_argument("trail");
    return value;
  } catch (const std::exception&) {
    throw InputError(origin_ + ": '" + key + "' is not a number: " +
                     it->second);
  }
}

std::optional<bool> TomlFile::get_bool(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  if (it->second == "true") return true;
  if (it->second == "false") return false;
  throw InputError(origin_ + ": '" + key + "' is not a boolean: " + it->second);
}

}  // namespace entitycs
