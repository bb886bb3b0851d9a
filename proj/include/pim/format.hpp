#pragma once

#include <charconv>
#include <string>

namespace pim {

/// Shortest decimal form that round-trips; integral values keep a ".0"
/// so rates always read as reals.
inline std::string format_double(double value) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  std::string out(buf, ptr);
  if (out.find_first_of(".en") == std::string::npos) out += ".0";
  return out;
}

}  // namespace pim
