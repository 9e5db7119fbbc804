#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bellsim::text {

// Angles in radians with pi literals: "pi", "2pi", "pi/2", "3pi/4", "-pi/8",
// "0.25pi", or a plain decimal. Throws std::invalid_argument on bad input.
double parse_angle(std::string_view token);

// "start:stop:step" (each an angle literal, step > 0, start <= stop) expands
// to start, start + step, ... inclusive of stop; a bare value is one point.
std::vector<double> parse_grid(std::string_view token);

// Shortest representation that round-trips, capped at 12 significant digits;
// -0 normalizes to "0". Used for byte-stable CSV output.
std::string format_number(double value);

}  // namespace bellsim::text
