#include "birelay/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "birelay/rates.hpp"

namespace birelay {
namespace {

// Regime boundaries for the upper-bound allocation: the positive roots of
// k^4 + k^2 = 1 and k^4 = k^2 + 1 in the variable k^2.
const double kLowerThreshold = (std::sqrt(5.0) - 1.0) / 2.0;
const double kUpperThreshold = (1.0 + std::sqrt(5.0)) / 2.0;

void check_inputs(double kappa_sq, double total_power) {
    if (!(kappa_sq > 0.0) || !std::isfinite(kappa_sq))
        throw std::invalid_argument("kappa_sq must be positive and finite");
    if (!(total_power > 0.0) || !std::isfinite(total_power))
        throw std::invalid_argument("total_power must be positive and finite");
}

}  // namespace

AllocationTriple allocate_ub_highsnr(double kappa_sq, double total_power) {
    check_inputs(kappa_sq, total_power);
    const double t = kappa_sq;
    const double P = total_power;
    AllocationTriple alloc;
    if (t <= kLowerThreshold) {
        // Weak a->b link: b->a direction is relay-limited, a->b source-limited.
        alloc.p_a = P;
        alloc.p_b = P * t / (1.0 + t);
        alloc.p_r = P / (1.0 + t);
    } else if (t <= kUpperThreshold) {
        // Balanced regime: all three cut constraints active.
        const double denom = 1.0 + t + t * t;
        alloc.p_a = 2.0 * P / denom;
        alloc.p_b = 2.0 * P * t * t / denom;
        alloc.p_r = 2.0 * P * t / denom;
    } else {
        // Mirror of the first regime under a<->b exchange (t -> 1/t).
        alloc.p_a = P / (1.0 + t);
        alloc.p_b = P;
        alloc.p_r = P * t / (1.0 + t);
    }
    return alloc;
}

AllocationTriple allocate_ach_highsnr(double kappa_sq, double total_power) {
    check_inputs(kappa_sq, total_power);
    const double t = kappa_sq;
    const double P = total_power;
    AllocationTriple alloc;
    if (t <= 1.0) {
        const double denom = 2.0 + t;
        alloc.p_a = 2.0 * P / denom;
        alloc.p_b = 2.0 * P * t / denom;
        alloc.p_r = 2.0 * P / denom;
    } else {
        const double denom = 1.0 + 2.0 * t;
        alloc.p_a = 2.0 * P / denom;
        alloc.p_b = 2.0 * P * t / denom;
        alloc.p_r = 2.0 * P * t / denom;
    }
    return alloc;
}

RatePair highsnr_exchange_rate(const ChannelRealization& realization,
                               const AllocationTriple& alloc, RateModel model) {
    const double g_a = realization.gain_a();
    const double g_b = realization.gain_b();
    const double x_ab = g_a * alloc.p_a;
    const double x_ba = g_b * alloc.p_b;
    const double x_rb = g_b * alloc.p_r;
    const double x_ra = g_a * alloc.p_r;
    RatePair rates;
    if (model == RateModel::exact) {
        rates.r_ab = 0.5 * std::min(capacity_c(x_ab), capacity_c(x_rb));
        rates.r_ba = 0.5 * std::min(capacity_c(x_ba), capacity_c(x_ra));
    } else {
        rates.r_ab = 0.5 * std::min(highsnr_c(x_ab), highsnr_c(x_rb));
        rates.r_ba = 0.5 * std::min(highsnr_c(x_ba), highsnr_c(x_ra));
    }
    return rates;
}

double highsnr_gap(double kappa_sq) {
    // Normalized setting: |h_b|^2 = 1, |h_a|^2 = kappa_sq, unit budget. The
    // high-SNR rates shift additively with log2 of the power scale, and the
    // shift cancels in the difference, so the gap depends on kappa_sq only.
    const ChannelRealization realization({std::sqrt(kappa_sq), 0.0},
                                         {1.0, 0.0});
    const AllocationTriple ub = allocate_ub_highsnr(kappa_sq, 1.0);
    const AllocationTriple ach = allocate_ach_highsnr(kappa_sq, 1.0);
    const RatePair r_ub =
        highsnr_exchange_rate(realization, ub, RateModel::high_snr);
    const RatePair r_ach =
        highsnr_exchange_rate(realization, ach, RateModel::high_snr);
    // Per complex MAC channel use: the MAC phase holds 1/2 of the block.
    return ((r_ub.r_ab + r_ub.r_ba) - (r_ach.r_ab + r_ach.r_ba)) / 0.5;
}

GapProfile gap_sweep(double grid_min, double grid_max, int n_points) {
    if (!(grid_min > 0.0) || !(grid_max > grid_min))
        throw std::invalid_argument("need 0 < grid_min < grid_max");
    if (n_points < 2) throw std::invalid_argument("need at least 2 points");
    GapProfile profile;
    profile.grid.reserve(n_points);
    profile.gap_bits.reserve(n_points);
    const double log_min = std::log(grid_min);
    const double log_max = std::log(grid_max);
    for (int i = 0; i < n_points; ++i) {
        const double frac = static_cast<double>(i) / (n_points - 1);
        const double t = std::exp(log_min + frac * (log_max - log_min));
        const double gap = highsnr_gap(t);
        profile.grid.push_back(t);
        profile.gap_bits.push_back(gap);
        if (gap > profile.eta) {
            profile.eta = gap;
            profile.argmax_kappa_sq = t;
        }
    }
    return profile;
}

void save_gap_profile(const GapProfile& profile, std::ostream& out) {
    out << "kappa_sq gap_bits\n";
    char buf[64];
    for (std::size_t i = 0; i < profile.grid.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g", profile.grid[i],
                      profile.gap_bits[i]);
        out << buf << '\n';
    }
}

}  // namespace birelay
