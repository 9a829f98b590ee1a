#pragma once

/**
 * Canonical number formatting shared by report writers. Reals are printed
 * with 17 significant digits ("%.17g"), enough to round-trip any double, so
 * identical runs produce byte-identical reports.
 */

#include <cstdint>
#include <cstdio>
#include <string>

namespace hortonlab {

inline std::string real17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string int_str(std::uint64_t x) { return std::to_string(x); }
inline std::string int_str(std::int64_t x) { return std::to_string(x); }
inline std::string int_str(int x) { return std::to_string(x); }

}  // namespace hortonlab
