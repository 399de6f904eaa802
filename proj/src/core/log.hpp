#ifndef SCC_LOG_HPP
#define SCC_LOG_HPP

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace scc::log {

enum Level { kOff = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

// SCC_LOG=off|warn|info|debug (default warn)
inline Level level() {
  static Level lv = [] {
    const char* e = std::getenv("SCC_LOG");
    if (!e) return kWarn;
    if (!std::strcmp(e, "off")) return kOff;
    if (!std::strcmp(e, "info")) return kInfo;
    if (!std::strcmp(e, "debug")) return kDebug;
    return kWarn;
  }();
  return lv;
}

template <typename... Args>
void emit(Level lv, const char* tag, const char* fmt, Args... args) {
  if (level() < lv) return;
  std::fprintf(stderr, "[scc %s] ", tag);
  std::fprintf(stderr, fmt, args...);
  std::fputc('\n', stderr);
}

template <typename... Args>
void warn(const char* fmt, Args... args) {
  emit(kWarn, "warn", fmt, args...);
}
template <typename... Args>
void info(const char* fmt, Args... args) {
  emit(kInfo, "info", fmt, args...);
}
template <typename... Args>
void debug(const char* fmt, Args... args) {
  emit(kDebug, "debug", fmt, args...);
}

}  // namespace scc::log

#endif
