#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

#include "vorocrust/geom_core.hpp"

namespace vorocrust {

/// Shortest text that parses back to exactly the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Parses a whole token as a double; throws Parse naming `what` otherwise.
inline double parse_double(std::string_view token, const std::string& what) {
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r')) {
    token.remove_suffix(1);
  }
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw Error(ErrorCode::Parse, what + ": cannot parse number '" + std::string(token) + "'");
  }
  return v;
}

}  // namespace vorocrust
