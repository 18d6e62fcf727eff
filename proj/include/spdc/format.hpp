#pragma once

#include <charconv>
#include <string>

namespace spdc {

// Shortest round-trip decimal form; locale independent.
inline std::string fmt(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

// Fixed significant digits, for compact human-facing files.
inline std::string fmt(double v, int digits) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return std::string(buf, p);
}

}  // namespace spdc
