#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace rpd {

// Shortest decimal text that parses back to the same double; "inf",
// "-inf" and "nan" for the non-finite values. Locale-independent.
std::string format_double(double value);

// Accepts decimal and exponent notation plus inf/nan spellings. The whole
// field must be consumed. Locale-independent.
std::optional<double> parse_double(std::string_view text);

}  // namespace rpd
