#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "birelay/channel.hpp"
#include "birelay/closed_form.hpp"

namespace birelay {

struct SolverConfig {
    double delta = 0.5;        // MAC share of the block
    double total_power = 1.0;  // long-term sum power budget P
    double dual_tol = 1e-8;    // budget gap exit: |spend - P| <= dual_tol * P
    double inner_tol = 1e-10;  // golden-section bracket tolerance
    int max_iter = 200;        // bisection iteration cap
};

// Per-interval powers across the whole ensemble.
struct PowerAllocation {
    std::vector<AllocationTriple> triples;
    std::size_t size() const { return triples.size(); }
};

struct SolveResult {
    PowerAllocation allocation;
    double rate_bits = 0.0;    // average two-direction sum rate, bits/use
    int iterations = 0;        // dual bisection steps taken
    double dual_lambda = 0.0;  // final price on the power budget
};

// One interval of the dual subproblem at price lambda: the budget-priced
// optimum powers and their objective value.
struct SubproblemResult {
    AllocationTriple triple;
    double value = 0.0;  // rate minus lambda * weighted power
};

// Maximizes the per-interval cut-set bound
//   sum over directions of min(delta C(g_src p_src), (1-delta) C(g_dst p_r))
//     - lambda [delta (p_a + p_b) + (1-delta) p_r]
// in closed form over (p_a, p_b) given p_r, then by golden section over p_r.
// lambda must be positive: at lambda = 0 the priced budget is unbounded.
SubproblemResult per_interval_subproblem(const ChannelRealization& realization,
                                         double lambda,
                                         const SolverConfig& config);

// Ensemble-average cut-set rate of a given allocation (no feasibility check).
double evaluate_upper_objective(const FadingEnsemble& ensemble,
                                const PowerAllocation& allocation,
                                const SolverConfig& config);

// Budget spent by an allocation: average of delta (p_a + p_b) + (1-delta) p_r.
double weighted_budget(const PowerAllocation& allocation,
                       const SolverConfig& config);

// Bisection on the budget price, shared by the bound and the lattice scheme.
// allocation_at(lambda) must return the priced per-interval optima and
// objective_at(allocation) the ensemble-average rate. Exits when the spend
// matches the budget to dual_tol; if instead the price interval collapses
// onto a jump of the spend curve, the two bracketing allocations are blended
// to meet the budget exactly (see the implementation note). Throws if neither
// happens within config.max_iter.
SolveResult dual_budget_bisection(
    const FadingEnsemble& ensemble, const SolverConfig& config,
    const std::function<PowerAllocation(double)>& allocation_at,
    const std::function<double(const PowerAllocation&)>& objective_at);

// Cut-set upper bound on the exchange sum rate under the long-term budget,
// via bisection on the budget price. Throws if the bisection fails to close
// the budget gap within config.max_iter.
SolveResult solve_upper_bound(const FadingEnsemble& ensemble,
                              const SolverConfig& config);

}  // namespace birelay
