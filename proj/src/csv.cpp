#include "emscat/csv.hpp"

#include <cstdio>

namespace emscat {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace emscat
