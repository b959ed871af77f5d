#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace ringbot {

/// Shortest decimal that parses back to the same double. Negative zero is
/// written as "0".
std::string format_double(double v);

/// Strict parse of a whole token; nullopt on trailing garbage or overflow.
std::optional<double> parse_double(std::string_view s);
std::optional<unsigned long long> parse_unsigned(std::string_view s);

}  // namespace ringbot
