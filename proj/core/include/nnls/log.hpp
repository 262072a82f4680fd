#pragma once

#include <sstream>
#include <string>

namespace nnls {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

/// Level from NNLS_LOG (error|warn|info|debug), read once; default warn.
LogLevel log_level();
void set_log_level(LogLevel level);
void log_message(LogLevel level, const std::string& msg);

template <typename... Args>
void log(LogLevel level, const Args&... args) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  std::ostringstream os;
  (os << ... << args);
  log_message(level, os.str());
}

}  // namespace nnls
