#pragma once
// Small string/formatting/logging helpers used across modules.

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace gridmarket {

inline std::string strformat(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  va_list copy;
  va_copy(copy, args);
  const int n = std::vsnprintf(nullptr, 0, fmt, copy);
  va_end(copy);
  std::string out(n > 0 ? static_cast<std::size_t>(n) : 0, '\0');
  if (n > 0) std::vsnprintf(out.data(), out.size() + 1, fmt, args);
  va_end(args);
  return out;
}

// Fixed-point decimal formatting; the workhorse for deterministic CSV output.
inline std::string fixed(double v, int decimals) {
  return strformat("%.*f", decimals, v);
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

namespace logging {

// Verbosity: 0 quiet, 1 info, 2 debug. Initialized from GRIDMARKET_LOG.
inline int& level() {
  static int lvl = [] {
    const char* env = std::getenv("GRIDMARKET_LOG");
    return env ? std::atoi(env) : 0;
  }();
  return lvl;
}

inline void info(const std::string& msg) {
  if (level() >= 1) std::fprintf(stderr, "[gridmarket] %s\n", msg.c_str());
}

inline void debug(const std::string& msg) {
  if (level() >= 2) std::fprintf(stderr, "[gridmarket] %s\n", msg.c_str());
}

}  // namespace logging
}  // namespace gridmarket
