#pragma once

#include <string>

namespace adrc {

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

// Parses a complete decimal token; returns false on any trailing garbage.
bool parse_double(const std::string& text, double& out);

}  // namespace adrc
