#include "entitycs/manifest.hpp"

#include <cstdio>
#include <fstream>

#include "entitycs/errors.hpp"
#include "entitycs/jsonl.hpp"
#include "entitycs/rng.hpp"

namespace entitycs {

const char* const kToolVersion = "0.1.0";

namespace {

std::string hex64(uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string text_digest(std::string_view text) { return hex64(fnv1a64(text)); }

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open for digest: " + path);
  uint64_t h = kFnvOffset;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    h = fnv1a64(std::string_view(buf, static_cast<size_t>(in.gcount())), h);
    if (!in) break;
  }
  return hex64(h);
}

std::string Manifest::config_hash() const {
  // Canonical "key=value\n" serialization over the sorted semantic fields.
  std::string canon;
  for (const auto& [key, value] : config) {
    canon += key;
    canon += '=';
    canon += value;
    canon += '\n';
  }
  return text_digest(canon);
}

std::string Manifest::to_json() const {
  std::string out;
  out += "{\n  \"tool_version\": ";
  out += json_quote(tool_version);
  out += ",\n  \"stage\": ";
  out += json_quote(stage);
  out += ",\n  \"config_hash\": ";
  out += json_quote(config_hash());
  out += ",\n  \"config\": {";
  bool first = true;
  for (const auto& [key, value] : config) {
    out += first ? "\n" : ",\n";
    first = false;
    out += "    ";
    out += json_quote(key);
    out += ": ";
    out += json_quote(value);
  }
  out += first ? "},\n" : "\n  },\n";
  out += "  \"inputs\": [";
  first = true;
  for (const auto& [path, digest] : inputs) {
    out += first ? "\n" : ",\n";
    first = false;
    out += "    {\"path\": ";
    out += json_quote(path);
    out += ", \"digest\": ";
    out += json_quote(digest);
    out += "}";
  }
  out += first ? "],\n" : "\n  ],\n";
  out += "  \"outputs\": [";
  first = true;
  for (const auto& [path, digest] : outputs) {
    out += first ? "\n" : ",\n";
    first = false;
    out += "    {\"path\": ";
    out += json_quote(path);
    out += ", \"digest\": ";
    out += json_quote(digest);
    out += "}";
  }
  out += first ? "],\n" : "\n  ],\n";
  out += "  \"counters\": {";
  first = true;
  for (const auto& [key, value] : counters) {
    out += first ? "\n" : ",\n";
    first = false;
    out += "    ";
    out += json_quote(key);
    out += ": ";
    out += std::to_string(value);
  }
  out += first ? "}\n" : "\n  }\n";
  out += "}\n";
  return out;
}

void Manifest::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write manifest: " + path);
  out << to_json();
}

}  // namespace entitycs
