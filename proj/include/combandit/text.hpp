#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace combandit {

// Shortest decimal form that parses back to the same double; "nan",
// "inf", "-inf" for non-finite values.
std::string format_double(double value);
double parse_double(std::string_view text);

std::vector<std::string_view> split(std::string_view text, char delimiter);

}  // namespace combandit
