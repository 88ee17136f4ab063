#pragma once

#include <charconv>
#include <string>

namespace kauction {

// Locale-independent general-format rendering with a fixed number of
// significant digits. Infinities render as "inf"/"-inf".
inline std::string format_double(double value, int digits = 17) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

}  // namespace kauction
