#include "birelay/rates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace birelay {

namespace {

// Frozen common-tangent constants, validated against the numerical envelope
// oracle in the test suite rather than recomputed at runtime. Tangency
// conditions f1'(x1) = f2'(x2) = slope and collinearity give 1 + 2*x1 = e.
constexpr double kX1 = (std::numbers::e - 1.0) / 2.0;
constexpr double kX2 = std::numbers::e - 0.5;
const double kSlope = 1.0 / (std::numbers::e * std::numbers::ln2);
const double kValueAtX1 = 0.5 * std::numbers::log2e;  // f1(x1) = 0.5 log2(e)

}  // namespace

double capacity_c(double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("capacity_c: x must be >= 0");
    return std::log2(1.0 + x);
}

double highsnr_c(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("highsnr_c: x must be > 0");
    return std::log2(x);
}

double d_branch_timeshare(double x) { return 0.5 * std::log2(1.0 + 2.0 * x); }

double d_branch_lattice(double x) { return std::log2(0.5 + x); }

EnvelopeBreakpoints uce_breakpoints() { return {kX1, kX2, kSlope}; }

double lattice_rate_d(double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("lattice_rate_d: x must be >= 0");
    if (x <= kX1) return d_branch_timeshare(x);
    if (x >= kX2) return d_branch_lattice(x);
    return kValueAtX1 + kSlope * (x - kX1);
}

}  // namespace birelay
