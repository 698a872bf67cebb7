#ifndef RATCHET_UTIL_HPP
#define RATCHET_UTIL_HPP

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ratchet {

/// Raised when an adaptive quadrature cannot reach its tolerance.
struct quadrature_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when an iterative solve fails; carries the last residual.
struct solver_error : std::runtime_error {
  double residual;
  solver_error(const std::string& msg, double res)
      : std::runtime_error(msg), residual(res) {}
};

/// Raised on malformed configuration input; carries a position.
struct config_error : std::runtime_error {
  int line, column;
  config_error(const std::string& msg, int l, int c)
      : std::runtime_error(msg), line(l), column(c) {}
};

// All emitted floats use 17 significant digits so values round-trip exactly.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double frac(double x) {
  double f = x - static_cast<long long>(x);
  return f < 0 ? f + 1.0 : f;
}

// splitmix64, used to derive independent per-case seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

enum class LogLevel { off = 0, info = 1, debug = 2 };

inline LogLevel log_level() {
  static LogLevel lvl = [] {
    const char* env = std::getenv("RATCHET_LOG");
    if (!env) return LogLevel::off;
    std::string s(env);
    if (s == "debug") return LogLevel::debug;
    if (s == "info") return LogLevel::info;
    return LogLevel::off;
  }();
  return lvl;
}

inline void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::info) std::fprintf(stderr, "[ratchet] %s\n", msg.c_str());
}

inline void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::debug) std::fprintf(stderr, "[ratchet:debug] %s\n", msg.c_str());
}

}  // namespace ratchet

#endif
