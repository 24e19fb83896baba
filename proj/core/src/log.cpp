#include "entitycs/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace entitycs::log {

namespace {

Level parse_env() {
  const char* env = std::getenv("ENTITYCS_LOG");
  if (env == nullptr) return Level::kWarn;
  if (std::strcmp(env, "debug") == 0) return Level::kDebug;
  if (std::strcmp(env, "info") == 0) return Level::kInfo;
  if (std::strcmp(env, "error") == 0) return Level::kError;
  return Level::kWarn;
}

Level g_threshold = parse_env();

const char* name(Level level) {
  switch (level) {
    case Level::kDebug: return "debug";
    case Level::kInfo: return "info";
    case Level::kWarn: return "warn";
    case Level::kError: return "error";
  }
  return "?";
}

}  // namespace

Level threshold() { return g_threshold; }

void set_threshold(Level level) { g_threshold = level; }

void write(Level level, const std::string& msg) {
  std::fprintf(stderr, "[entitycs:%s] %s\n", name(level), msg.c_str());
}

}  // namespace entitycs::log
