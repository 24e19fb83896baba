#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace entitycs {

// Provenance record written next to every stage output. Contains no
// timestamps: identical runs must produce identical manifests. The config
// hash covers only fields that change output content — never io paths,
// thread counts or log level.
struct Manifest {
  std::string tool_version;
  std::string stage;
  std::map<std::string, std::string> config;  // semantic fields only
  std::vector<std::pair<std::string, std::string>> inputs;   // (path, digest)
  std::vector<std::pair<std::string, std::string>> outputs;  // (path, digest)
  std::map<std::string, uint64_t> counters;

  std::string config_hash() const;
  std::string to_json() const;
  void write(const std::string& path) const;
};

// FNV-1a over file contents, hex. Provenance digest, not tamper evidence.
std::string file_digest(const std::string& path);
std::string text_digest(std::string_view text);

extern const char* const kToolVersion;

}  // namespace entitycs
