#include "caat/util.hpp"

#include <cstdlib>
#include <iostream>

namespace caat {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("CAAT_LOG");
    if (env == nullptr) return LogLevel::info;
    const std::string v(env);
    if (v == "error") return LogLevel::error;
    if (v == "debug") return LogLevel::debug;
    return LogLevel::info;
  }();
  return level;
}

void log(LogLevel level, const std::string& msg) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  std::cerr << msg << "\n";
}

}  // namespace caat
