#pragma once

#include <cstdio>
#include <string>

namespace lrapm {

// All file output uses 6 significant digits.
inline std::string fmt_g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace lrapm
