#include "lct/format.hpp"

#include <cmath>
#include <cstdio>

namespace lct {

std::string format_number(double value, bool full_precision) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0;  // fold -0 into 0
  char buf[64];
  std::snprintf(buf, sizeof buf, full_precision ? "%.17g" : "%.6g", value);
  return buf;
}

}  // namespace lct
