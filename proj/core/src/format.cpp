#include "twdp/format.hpp"

#include <cmath>

#include <fmt/format.h>

namespace twdp {

std::string format_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    return fmt::format("{}", x);
}

}  // namespace twdp
