#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lexrel {

std::string to_lower(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);
// Strict decimal parse of the whole string; false on any trailing garbage.
bool parse_double(std::string_view s, double& out);
bool parse_int(std::string_view s, long long& out);

}  // namespace lexrel
