#pragma once

#include <string>

namespace twdp {

// Shortest decimal string that parses back to exactly the same double
// (never more than 17 significant digits). NaN prints as "nan".
std::string format_number(double x);

}  // namespace twdp
