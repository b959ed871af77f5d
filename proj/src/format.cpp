#include "ringbot/format.hpp"

#include <array>
#include <charconv>
#include <system_error>

namespace ringbot {

std::string format_double(double v) {
  if (v == 0.0) {
    return "0";
  }
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::optional<double> parse_double(std::string_view s) {
  if (s.empty() || s.front() == '+') {
    return std::nullopt;
  }
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return v;
}

std::optional<unsigned long long> parse_unsigned(std::string_view s) {
  if (s.empty() || s.front() == '-' || s.front() == '+') {
    return std::nullopt;
  }
  unsigned long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return v;
}

}  // namespace ringbot
