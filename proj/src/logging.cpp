#include "seek/logging.hpp"

#include <cstdlib>
#include <cstring>

namespace seek {
namespace log {

static Level parse_env() {
  const char* v = std::getenv("SEEK_LOG");
  if (v == nullptr) return Level::kError;
  if (std::strcmp(v, "debug") == 0) return Level::kDebug;
  if (std::strcmp(v, "info") == 0) return Level::kInfo;
  return Level::kError;
}

Level level() {
  static Level lvl = parse_env();
  return lvl;
}

void write(Level lvl, const std::string& msg) {
  if (static_cast<int>(lvl) > static_cast<int>(level())) return;
  const char* tag = lvl == Level::kError ? "ERROR" : lvl == Level::kInfo ? "INFO" : "DEBUG";
  std::fprintf(stderr, "[seek %s] %s\n", tag, msg.c_str());
}

}  // namespace log
}  // namespace seek
