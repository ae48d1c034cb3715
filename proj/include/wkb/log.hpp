#pragma once

#include <string>

namespace wkb {

// Verbosity from the WKB_LOG environment variable: 0 (default) quiet,
// 1 info, 2 debug.  Messages go to stderr.
int log_level();
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace wkb
