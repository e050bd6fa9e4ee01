#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace spagat {

enum class LogLevel { error = 0, info = 1, debug = 2 };

// Level comes from SPAGAT_LOG={error,info,debug}; default info.
inline LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("SPAGAT_LOG");
    if (!env) return LogLevel::info;
    std::string s(env);
    if (s == "error") return LogLevel::error;
    if (s == "debug") return LogLevel::debug;
    return LogLevel::info;
  }();
  return level;
}

inline void log(LogLevel lvl, const std::string& msg) {
  if (lvl > log_level()) return;
  const char* tag = lvl == LogLevel::error ? "error" : lvl == LogLevel::info ? "info" : "debug";
  std::fprintf(stderr, "[spagat:%s] %s\n", tag, msg.c_str());
}

inline void log_error(const std::string& msg) { log(LogLevel::error, msg); }
inline void log_info(const std::string& msg) { log(LogLevel::info, msg); }
inline void log_debug(const std::string& msg) { log(LogLevel::debug, msg); }

}  // namespace spagat
