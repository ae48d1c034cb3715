#include "wkb/log.hpp"

#include <cstdlib>
#include <iostream>

namespace wkb {

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("WKB_LOG");
    if (!env) return 0;
    return std::atoi(env);
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[wkb] " << msg << "\n";
}

void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[wkb:debug] " << msg << "\n";
}

}  // namespace wkb
