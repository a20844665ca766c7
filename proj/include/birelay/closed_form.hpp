#pragma once

#include <iosfwd>
#include <vector>

#include "birelay/channel.hpp"

namespace birelay {

// Per-interval power triple, same linear unit as the sum-power budget P.
// Both closed-form allocators spend the full budget: with the MAC/broadcast
// split fixed at 1/2, 0.5 * (p_a + p_b + p_r) = P.
struct AllocationTriple {
    double p_a = 0.0;
    double p_b = 0.0;
    double p_r = 0.0;
};

// Directional rates in bits per channel use.
struct RatePair {
    double r_ab = 0.0;
    double r_ba = 0.0;
};

enum class RateModel {
    exact,     // C(x) = log2(1 + x)
    high_snr,  // log2(x)
};

// High-SNR optimal allocation for the cut-set upper bound, split into three
// regimes of kappa^2 at the golden-ratio thresholds (sqrt(5)-1)/2 and
// (1+sqrt(5))/2. Continuous across both thresholds.
AllocationTriple allocate_ub_highsnr(double kappa_sq, double total_power);

// High-SNR optimal allocation for the channel-inversion lattice scheme.
// Satisfies kappa_sq * p_a = p_b and p_r = max(p_a, p_b); continuous at
// kappa^2 = 1.
AllocationTriple allocate_ach_highsnr(double kappa_sq, double total_power);

// Two-direction rates of an allocation at the fixed time split 1/2:
//   r_ab = 0.5 * min(F(|h_a|^2 p_a), F(|h_b|^2 p_r))
//   r_ba = 0.5 * min(F(|h_b|^2 p_b), F(|h_a|^2 p_r))
// with F per the rate model. The high-SNR model rejects zero effective
// powers (log of zero).
RatePair highsnr_exchange_rate(const ChannelRealization& realization,
                               const AllocationTriple& alloc, RateModel model);

// Upper-bound minus achievable exchange rate at one gain ratio, both from
// their closed-form allocations under the high-SNR rate model, reported per
// complex MAC channel use (the two-direction sum divided by the MAC share
// 1/2). Scale- and budget-invariant.
double highsnr_gap(double kappa_sq);

struct GapProfile {
    std::vector<double> grid;      // kappa^2 values, log spaced
    std::vector<double> gap_bits;  // per-point gap, bits per complex MAC use
    double eta = 0.0;              // max gap over the grid
    double argmax_kappa_sq = 0.0;
};

// Sweeps highsnr_gap over a logarithmic grid of n_points values of kappa^2
// in [grid_min, grid_max].
GapProfile gap_sweep(double grid_min, double grid_max, int n_points);

// Two-column text table (kappa_sq, gap_bits) for plotting.
void save_gap_profile(const GapProfile& profile, std::ostream& out);

}  // namespace birelay
