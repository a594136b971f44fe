#pragma once

#include <charconv>
#include <string>

namespace tmig {

/// Shortest round-trip decimal form of a double ("0.1", not "0.100000"),
/// so CSV output is byte-stable across platforms.
inline std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace tmig
