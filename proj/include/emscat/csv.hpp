#ifndef EMSCAT_CSV_HPP
#define EMSCAT_CSV_HPP

#include <string>

namespace emscat {

/// Shortest round-trip decimal form of a double ("%.17g"); locale-free and
/// byte-stable, so repeated runs emit identical files.
std::string fmt(double v);

}  // namespace emscat

#endif
