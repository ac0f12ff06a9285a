#pragma once

#include <cmath>

namespace ergo {

// Canonical representative in [0,1).  floor subtraction; the result can land
// exactly on 1.0 after rounding, which we fold back to 0.
inline double wrap(double x) {
    double y = x - std::floor(x);
    return (y < 1.0) ? y : 0.0;
}

// Signed circular difference a-b, wrapped into [-0.5, 0.5).
inline double circ_signed(double a, double b) {
    double d = a - b;
    d -= std::floor(d + 0.5);
    return d;
}

// Circular distance in [0, 0.5].
inline double circ_dist(double a, double b) {
    return std::fabs(circ_signed(a, b));
}

} // namespace ergo
