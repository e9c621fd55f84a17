#include "sptw/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace sptw {

LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("SUPERTREE_TW_LOG");
    if (!env) return LogLevel::Error;
    if (std::strcmp(env, "trace") == 0) return LogLevel::Trace;
    if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
    if (std::strcmp(env, "info") == 0) return LogLevel::Info;
    return LogLevel::Error;
  }();
  return level;
}

void log(LogLevel level, const std::string& message) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  static const char* names[] = {"error", "info", "debug", "trace"};
  std::fprintf(stderr, "[%s] %s\n", names[static_cast<int>(level)], message.c_str());
}

}  // namespace sptw
