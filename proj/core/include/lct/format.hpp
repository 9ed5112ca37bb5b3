#pragma once

#include <string>

namespace lct {

/// CSV number formatting: 6 significant digits by default, round-trip
/// precision (17 significant digits) when `full_precision` is set.
std::string format_number(double value, bool full_precision = false);

}  // namespace lct
