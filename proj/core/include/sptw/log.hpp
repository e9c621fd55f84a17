#pragma once

#include <string>

namespace sptw {

enum class LogLevel { Error = 0, Info = 1, Debug = 2, Trace = 3 };

/// Level is read once from SUPERTREE_TW_LOG (error|info|debug|trace),
/// defaulting to error. Messages go to stderr.
LogLevel log_level();
void log(LogLevel level, const std::string& message);

inline void log_info(const std::string& m) { log(LogLevel::Info, m); }
inline void log_debug(const std::string& m) { log(LogLevel::Debug, m); }
inline void log_trace(const std::string& m) { log(LogLevel::Trace, m); }

}  // namespace sptw
