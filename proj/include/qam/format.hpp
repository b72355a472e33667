#pragma once

#include <cstdio>
#include <string>

namespace qam {

// Fixed 12-significant-digit rendering shared by every CSV writer.
inline std::string fmt12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace qam
