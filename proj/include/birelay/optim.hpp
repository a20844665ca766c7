#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

namespace birelay {

// Golden-section search for the maximum of a unimodal f on [lo, hi].
// Returns {argmax, max}. The bracket shrinks by the inverse golden ratio per
// step, so ~75 iterations reach ~1e-15 relative width; rel_tol is measured
// against the initial bracket width.
template <typename F>
std::pair<double, double> golden_section_max(F&& f, double lo, double hi,
                                             double rel_tol = 1e-12) {
    if (!(hi >= lo)) throw std::invalid_argument("golden_section_max: bad bracket");
    static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
    const double width = hi - lo;
    if (width == 0.0) return {lo, f(lo)};
    double a = lo;
    double b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    const double stop = rel_tol * width;
    for (int iter = 0; iter < 200 && (b - a) > stop; ++iter) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

}  // namespace birelay
