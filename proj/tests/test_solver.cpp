#include "birelay/solver.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "birelay/closed_form.hpp"
#include "birelay/philox.hpp"
#include "doctest.h"
#include "oracles.hpp"

using birelay::AllocationTriple;
using birelay::ChannelRealization;
using birelay::evaluate_upper_objective;
using birelay::FadingEnsemble;
using birelay::per_interval_subproblem;
using birelay::PowerAllocation;
using birelay::solve_upper_bound;
using birelay::SolveResult;
using birelay::SolverConfig;
using birelay::weighted_budget;

namespace {

FadingEnsemble single(double h_a, double h_b) {
    FadingEnsemble e;
    e.realizations.push_back(ChannelRealization({h_a, 0.0}, {h_b, 0.0}));
    return e;
}

SolverConfig config_for(double P) {
    SolverConfig c;
    c.total_power = P;
    return c;
}

}  // namespace

TEST_CASE("symmetric unit-gain interval splits the budget evenly") {
    const FadingEnsemble e = single(1.0, 1.0);
    const SolveResult r = solve_upper_bound(e, config_for(3.0));
    CHECK(r.allocation.triples[0].p_a == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(r.allocation.triples[0].p_b == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(r.allocation.triples[0].p_r == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(r.rate_bits == doctest::Approx(std::log2(3.0)).epsilon(1e-7));
    CHECK(r.dual_lambda > 0.0);
}

TEST_CASE("solved rate matches the face-grid oracle") {
    birelay::PhiloxStream rng(21, 9, 0, 0);
    for (int i = 0; i < 4; ++i) {
        const double h_a = 0.3 + 2.0 * rng.next_double();
        const double h_b = 0.3 + 2.0 * rng.next_double();
        const double P = 2.0 + 60.0 * rng.next_double();
        const FadingEnsemble e = single(h_a, h_b);
        const SolveResult r = solve_upper_bound(e, config_for(P));
        const double grid = oracle::best_upper_on_face(e.realizations[0], P,
                                                       0.5, 1400);
        // The grid can only undershoot the true optimum, and by no more than
        // its discretization error.
        CHECK(r.rate_bits >= grid - 1e-6);
        CHECK(std::abs(r.rate_bits - grid) <= 8e-3);
    }
}

TEST_CASE("solution approaches the high-power split at 40 dB") {
    for (const double t : {0.1, 1.0, 10.0}) {
        const double P = 1e4;
        const FadingEnsemble e = single(std::sqrt(t), 1.0);
        const SolveResult r = solve_upper_bound(e, config_for(P));
        const AllocationTriple want = birelay::allocate_ub_highsnr(t, P);
        CHECK(r.allocation.triples[0].p_a ==
              doctest::Approx(want.p_a).epsilon(0.01));
        CHECK(r.allocation.triples[0].p_b ==
              doctest::Approx(want.p_b).epsilon(0.01));
        CHECK(r.allocation.triples[0].p_r ==
              doctest::Approx(want.p_r).epsilon(0.01));
    }
}

TEST_CASE("budget is spent exactly and rate grows with it") {
    const FadingEnsemble e = birelay::sample_rayleigh(16, 3, 1.0);
    double previous = 0.0;
    for (const double P : {0.5, 2.0, 8.0, 32.0}) {
        const SolverConfig c = config_for(P);
        const SolveResult r = solve_upper_bound(e, c);
        CHECK(std::abs(weighted_budget(r.allocation, c) - P) <= c.dual_tol * P);
        CHECK(r.rate_bits > previous);
        previous = r.rate_bits;
    }
}

TEST_CASE("ensemble waterfilling beats the per-interval split") {
    // Long-term budget lets strong intervals borrow from weak ones, so the
    // optimized rate must dominate spending P identically everywhere.
    const FadingEnsemble e = birelay::sample_rayleigh(40, 5, 1.0);
    const SolverConfig c = config_for(4.0);
    const SolveResult r = solve_upper_bound(e, c);
    PowerAllocation uniform;
    for (std::size_t i = 0; i < e.size(); ++i)
        uniform.triples.push_back({4.0, 4.0, 4.0});  // 0.5(4+4)+0.5*4 = 4+2
    // Rescale to meet the budget: 0.5(p_a+p_b)+0.5 p_r = 6 per interval.
    for (auto& t : uniform.triples) {
        t.p_a *= 4.0 / 6.0;
        t.p_b *= 4.0 / 6.0;
        t.p_r *= 4.0 / 6.0;
    }
    CHECK(std::abs(weighted_budget(uniform, c) - 4.0) < 1e-12);
    CHECK(r.rate_bits >= evaluate_upper_objective(e, uniform, c) - 1e-9);
}

TEST_CASE("subproblem prices powers sensibly") {
    const ChannelRealization ch({1.0, 0.0}, {1.0, 0.0});
    SolverConfig c = config_for(3.0);

    SUBCASE("value is non-increasing in the price") {
        double previous = 1e300;
        for (const double lambda : {0.05, 0.1, 0.3, 0.9, 2.0}) {
            const auto sub = per_interval_subproblem(ch, lambda, c);
            CHECK(sub.value <= previous + 1e-12);
            previous = sub.value;
        }
    }
    SUBCASE("a price past the gain threshold shuts everything off") {
        const double lambda = 1.01 * 2.0 / std::numbers::ln2;
        const auto sub = per_interval_subproblem(ch, lambda, c);
        CHECK(sub.triple.p_a <= 1e-9);
        CHECK(sub.triple.p_b <= 1e-9);
        CHECK(sub.triple.p_r <= 1e-9);
        CHECK(sub.value <= 1e-9);
    }
    SUBCASE("a zero price is rejected") {
        CHECK_THROWS_AS(per_interval_subproblem(ch, 0.0, c),
                        std::domain_error);
    }
    SUBCASE("the solved price reproduces the solved powers") {
        const FadingEnsemble e = single(1.0, 1.0);
        const SolveResult r = solve_upper_bound(e, c);
        const auto sub = per_interval_subproblem(ch, r.dual_lambda, c);
        CHECK(sub.triple.p_a == doctest::Approx(2.0).epsilon(1e-4));
        CHECK(sub.triple.p_r == doctest::Approx(2.0).epsilon(1e-4));
    }
}

TEST_CASE("tiny budgets still close the bisection") {
    const FadingEnsemble e = birelay::sample_rayleigh(8, 6, 1.0);
    const SolveResult r = solve_upper_bound(e, config_for(1e-4));
    CHECK(r.rate_bits > 0.0);
    CHECK(r.rate_bits < 1e-2);
}

TEST_CASE("invalid configs are rejected") {
    const FadingEnsemble e = single(1.0, 1.0);
    SolverConfig c = config_for(1.0);
    c.delta = 0.0;
    CHECK_THROWS_AS(solve_upper_bound(e, c), std::invalid_argument);
    c = config_for(-1.0);
    CHECK_THROWS_AS(solve_upper_bound(e, c), std::invalid_argument);
    CHECK_THROWS_AS(solve_upper_bound(FadingEnsemble{}, config_for(1.0)),
                    std::invalid_argument);
    PowerAllocation wrong_size;
    wrong_size.triples.push_back({1.0, 1.0, 1.0});
    wrong_size.triples.push_back({1.0, 1.0, 1.0});
    CHECK_THROWS_AS(evaluate_upper_objective(e, wrong_size, config_for(1.0)),
                    std::invalid_argument);
}
