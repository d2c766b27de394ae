#include "embedplan/log.hpp"

#include <cstdlib>
#include <iostream>

namespace embedplan {

LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("EMBEDPLAN_LOG");
    if (!env) return LogLevel::error;
    std::string v(env);
    if (v == "debug") return LogLevel::debug;
    if (v == "info") return LogLevel::info;
    return LogLevel::error;
  }();
  return level;
}

void log_message(LogLevel level, const std::string& message) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  const char* tag = level == LogLevel::error ? "error" : level == LogLevel::info ? "info" : "debug";
  std::cerr << "[embedplan:" << tag << "] " << message << "\n";
}

}  // namespace embedplan
