#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace bnsens {

/// Shortest decimal text that parses back to exactly `x`.
std::string to_decimal(double x);

/// Strict decimal parse of the whole string (no leading/trailing junk,
/// finite result). Nearest double to the literal.
std::optional<double> parse_decimal(std::string_view text);

}  // namespace bnsens
