#pragma once

#include <string>

namespace dwell {

// Shortest decimal text that round-trips to the same double.
std::string format_double(double x);

// Rounds to a fixed number of decimal places (monetary reporting).
double round_to(double x, int decimals);

}  // namespace dwell
