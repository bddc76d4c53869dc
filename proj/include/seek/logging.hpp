#ifndef SEEK_LOGGING_HPP
#define SEEK_LOGGING_HPP

#include <cstdio>
#include <string>

namespace seek {
namespace log {

enum class Level { kError = 0, kInfo = 1, kDebug = 2 };

// Current level, read once from the SEEK_LOG environment variable
// (values: "error", "info", "debug"; default "error").
Level level();

void write(Level lvl, const std::string& msg);

inline void error(const std::string& msg) { write(Level::kError, msg); }
inline void info(const std::string& msg) { write(Level::kInfo, msg); }
inline void debug(const std::string& msg) { write(Level::kDebug, msg); }

}  // namespace log
}  // namespace seek

#endif  // SEEK_LOGGING_HPP
