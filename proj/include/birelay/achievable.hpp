#pragma once

#include "birelay/solver.hpp"

namespace birelay {

using AchievableConfig = SolverConfig;

// Ensemble-average exchange sum rate of the channel-inversion lattice scheme
// for a given allocation. Both sources align to a common lattice receive
// power, so the usable lattice power of a general triple is
//   min(g_a p_a, g_b p_b, min(g_a, g_b) p_r);
// excess source power past alignment is wasted, and the relay can only
// re-deliver a lattice point its broadcast power supports. Each direction
// then earns min(delta D(P_lat), (1-delta) D(g_dst p_r)).
double evaluate_achievable_objective(const FadingEnsemble& ensemble,
                                     const PowerAllocation& allocation,
                                     const AchievableConfig& config);

// Best lattice-scheme allocation under the long-term budget, by the same
// budget-price bisection as the upper bound. Per interval the scheme has two
// free variables, the lattice power and the relay power, optimized by nested
// golden sections (the priced objective is jointly concave).
SolveResult solve_achievable(const FadingEnsemble& ensemble,
                             const AchievableConfig& config);

// Two-phase amplify-and-forward baseline: the relay rescales its received
// MAC signal to power p_r and each node cancels its own contribution.
RatePair amplify_forward_rate(const ChannelRealization& realization,
                              const AllocationTriple& alloc, double delta);

// Uniform AF split: all three powers equal P/(1+delta), which meets the
// per-interval budget with equality.
AllocationTriple af_allocation(double total_power, double delta);

// Per-interval AF allocation tuned by grid search with local refinement over
// (p_a, p_b) on the budget face.
AllocationTriple af_allocation_optimized(const ChannelRealization& realization,
                                         double total_power, double delta);

}  // namespace birelay
