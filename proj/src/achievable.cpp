#include "birelay/achievable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "birelay/optim.hpp"
#include "birelay/rates.hpp"

namespace birelay {
namespace {

void check_config(const AchievableConfig& config) {
    if (!(config.delta > 0.0) || !(config.delta < 1.0))
        throw std::invalid_argument("delta must lie in (0, 1)");
    if (!(config.total_power > 0.0))
        throw std::invalid_argument("total_power must be positive");
    if (!(config.dual_tol > 0.0) || !(config.inner_tol > 0.0))
        throw std::invalid_argument("tolerances must be positive");
    if (config.max_iter < 1)
        throw std::invalid_argument("max_iter must be at least 1");
}

double pair_rate(double p_lat, double cap_ab, double cap_ba, double delta) {
    const double mac = delta * lattice_rate_d(p_lat);
    return std::min(mac, cap_ab) + std::min(mac, cap_ba);
}

// Priced per-interval optimum of the lattice scheme at budget price lambda:
// outer golden section over the relay power, inner over the common lattice
// receive power, whose source cost is P_lat (1/g_a + 1/g_b) per MAC use.
AllocationTriple subproblem(const ChannelRealization& realization,
                            double lambda, const AchievableConfig& config) {
    const double g_a = realization.gain_a();
    const double g_b = realization.gain_b();
    const double g_min = std::min(g_a, g_b);
    const double delta = config.delta;
    const double inv_cost = 1.0 / g_a + 1.0 / g_b;

    auto inner_best = [&](double p_r) {
        const double cap_ab = (1.0 - delta) * lattice_rate_d(g_b * p_r);
        const double cap_ba = (1.0 - delta) * lattice_rate_d(g_a * p_r);
        auto priced = [&](double p_lat) {
            return pair_rate(p_lat, cap_ab, cap_ba, delta) -
                   lambda * delta * inv_cost * p_lat;
        };
        return golden_section_max(priced, 0.0, g_min * p_r, config.inner_tol);
    };

    // D(x) has slope at most 1/(x ln2), so past 2/(lambda (1-delta) ln2) the
    // relay power's marginal rate (both caps plus the widened lattice range)
    // drops below its price.
    const double hi = 2.0 / (lambda * (1.0 - delta) * std::numbers::ln2) + 1.0;
    auto outer = [&](double p_r) {
        return inner_best(p_r).second - lambda * (1.0 - delta) * p_r;
    };
    const double p_r = golden_section_max(outer, 0.0, hi,
                                          config.inner_tol).first;
    const double p_lat = inner_best(p_r).first;
    return {p_lat / g_a, p_lat / g_b, p_r};
}

}  // namespace

double evaluate_achievable_objective(const FadingEnsemble& ensemble,
                                     const PowerAllocation& allocation,
                                     const AchievableConfig& config) {
    check_config(config);
    if (ensemble.size() == 0 || ensemble.size() != allocation.size())
        throw std::invalid_argument("ensemble/allocation size mismatch");
    const double delta = config.delta;
    double total = 0.0;
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
        const auto& ch = ensemble.realizations[i];
        const auto& t = allocation.triples[i];
        const double g_a = ch.gain_a();
        const double g_b = ch.gain_b();
        const double p_lat = std::min({g_a * t.p_a, g_b * t.p_b,
                                       std::min(g_a, g_b) * t.p_r});
        const double cap_ab = (1.0 - delta) * lattice_rate_d(g_b * t.p_r);
        const double cap_ba = (1.0 - delta) * lattice_rate_d(g_a * t.p_r);
        total += pair_rate(p_lat, cap_ab, cap_ba, delta);
    }
    return total / static_cast<double>(ensemble.size());
}

SolveResult solve_achievable(const FadingEnsemble& ensemble,
                             const AchievableConfig& config) {
    return dual_budget_bisection(
        ensemble, config,
        [&](double lambda) {
            PowerAllocation alloc;
            alloc.triples.reserve(ensemble.size());
            for (const auto& ch : ensemble.realizations)
                alloc.triples.push_back(subproblem(ch, lambda, config));
            return alloc;
        },
        [&](const PowerAllocation& alloc) {
            return evaluate_achievable_objective(ensemble, alloc, config);
        });
}

RatePair amplify_forward_rate(const ChannelRealization& realization,
                              const AllocationTriple& alloc, double delta) {
    if (!(delta > 0.0) || !(delta < 1.0))
        throw std::invalid_argument("delta must lie in (0, 1)");
    if (alloc.p_a < 0.0 || alloc.p_b < 0.0 || alloc.p_r < 0.0)
        throw std::invalid_argument("powers must be non-negative");
    const double g_a = realization.gain_a();
    const double g_b = realization.gain_b();
    // Relay gain normalizes its received MAC power (signals plus unit noise)
    // to p_r; each node strips its own echo, leaving the partner signal
    // against forwarded plus local noise.
    const double amp_sq = alloc.p_r / (g_a * alloc.p_a + g_b * alloc.p_b + 1.0);
    RatePair rates;
    rates.r_ab = (1.0 - delta) *
                 capacity_c(g_a * g_b * amp_sq * alloc.p_a /
                            (g_b * amp_sq + 1.0));
    rates.r_ba = (1.0 - delta) *
                 capacity_c(g_a * g_b * amp_sq * alloc.p_b /
                            (g_a * amp_sq + 1.0));
    return rates;
}

AllocationTriple af_allocation(double total_power, double delta) {
    if (!(total_power > 0.0))
        throw std::invalid_argument("total_power must be positive");
    if (!(delta > 0.0) || !(delta < 1.0))
        throw std::invalid_argument("delta must lie in (0, 1)");
    const double p = total_power / (1.0 + delta);
    return {p, p, p};
}

AllocationTriple af_allocation_optimized(const ChannelRealization& realization,
                                         double total_power, double delta) {
    if (!(total_power > 0.0))
        throw std::invalid_argument("total_power must be positive");
    if (!(delta > 0.0) || !(delta < 1.0))
        throw std::invalid_argument("delta must lie in (0, 1)");

    auto sum_rate = [&](double p_a, double p_b) {
        const double spent = delta * (p_a + p_b);
        if (spent >= total_power) return -1.0;
        const double p_r = (total_power - spent) / (1.0 - delta);
        const RatePair r =
            amplify_forward_rate(realization, {p_a, p_b, p_r}, delta);
        return r.r_ab + r.r_ba;
    };

    const int n = 41;
    double best_a = total_power / (1.0 + delta);
    double best_b = best_a;
    double best = sum_rate(best_a, best_b);
    // First pass covers the whole budget face [0, P/delta]^2, then zooms.
    double span = total_power / delta;
    double center_a = 0.5 * span;
    double center_b = 0.5 * span;
    for (int round = 0; round < 6; ++round) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double p_a = std::max(
                    0.0, center_a + span * (i - n / 2) / (n - 1.0));
                const double p_b = std::max(
                    0.0, center_b + span * (j - n / 2) / (n - 1.0));
                const double value = sum_rate(p_a, p_b);
                if (value > best) {
                    best = value;
                    best_a = p_a;
                    best_b = p_b;
                }
            }
        }
        center_a = best_a;
        center_b = best_b;
        span *= 0.15;
    }
    const double p_r =
        (total_power - delta * (best_a + best_b)) / (1.0 - delta);
    return {best_a, best_b, p_r};
}

}  // namespace birelay
