#pragma once

#include <string>

namespace vanetcast {

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

} // namespace vanetcast
