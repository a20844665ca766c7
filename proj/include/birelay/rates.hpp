#pragma once

namespace birelay {

// Scalar rate primitives. All rates are in bits (log base 2).

// Shannon rate C(x) = log2(1 + x), x >= 0.
double capacity_c(double x);

// High-SNR approximation log2(x), x > 0. May be negative for x < 1; callers
// use it only in the high-SNR regime.
double highsnr_c(double x);

// Raw branches of the lattice rate envelope.
double d_branch_timeshare(double x);  // 0.5 * log2(1 + 2x)
double d_branch_lattice(double x);    // log2(0.5 + x)

// Common-tangent data of the upper concave envelope of the two branches:
// the envelope follows the time-sharing branch up to x1, the tangent line of
// slope `slope` on [x1, x2], and the lattice branch from x2 on.
struct EnvelopeBreakpoints {
    double x1;     // tangency on the time-sharing branch, (e-1)/2
    double x2;     // tangency on the lattice branch, e - 1/2
    double slope;  // bits per unit x, 1/(e ln 2)
};

EnvelopeBreakpoints uce_breakpoints();

// Lattice rate envelope D(x) = u.c.e{ log2(0.5 + x), 0.5 log2(1 + 2x) },
// x >= 0. Concave, C^1, and >= both branches everywhere.
double lattice_rate_d(double x);

}  // namespace birelay
