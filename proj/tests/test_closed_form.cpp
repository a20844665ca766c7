#include "birelay/closed_form.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "birelay/philox.hpp"
#include "doctest.h"
#include "oracles.hpp"

using birelay::allocate_ach_highsnr;
using birelay::allocate_ub_highsnr;
using birelay::AllocationTriple;
using birelay::ChannelRealization;
using birelay::gap_sweep;
using birelay::GapProfile;
using birelay::highsnr_exchange_rate;
using birelay::highsnr_gap;
using birelay::RateModel;
using birelay::RatePair;

namespace {
const double kGoldenLo = (std::sqrt(5.0) - 1.0) / 2.0;
const double kGoldenHi = (1.0 + std::sqrt(5.0)) / 2.0;

ChannelRealization realization_for(double kappa_sq) {
    return {{std::sqrt(kappa_sq), 0.0}, {1.0, 0.0}};
}
}  // namespace

TEST_CASE("bound allocation regimes hit their worked values") {
    const AllocationTriple mid = allocate_ub_highsnr(1.0, 3.0);
    CHECK(mid.p_a == doctest::Approx(2.0));
    CHECK(mid.p_b == doctest::Approx(2.0));
    CHECK(mid.p_r == doctest::Approx(2.0));

    const AllocationTriple weak = allocate_ub_highsnr(0.1, 1.0);
    CHECK(weak.p_a == doctest::Approx(1.0));
    CHECK(weak.p_b == doctest::Approx(0.1 / 1.1));
    CHECK(weak.p_r == doctest::Approx(1.0 / 1.1));

    const AllocationTriple strong = allocate_ub_highsnr(4.0, 1.0);
    CHECK(strong.p_a == doctest::Approx(0.2));
    CHECK(strong.p_b == doctest::Approx(1.0));
    CHECK(strong.p_r == doctest::Approx(0.8));
}

TEST_CASE("lattice allocation regimes hit their worked values") {
    const AllocationTriple low = allocate_ach_highsnr(0.5, 1.0);
    CHECK(low.p_a == doctest::Approx(0.8));
    CHECK(low.p_b == doctest::Approx(0.4));
    CHECK(low.p_r == doctest::Approx(0.8));

    const AllocationTriple high = allocate_ach_highsnr(2.0, 1.0);
    CHECK(high.p_a == doctest::Approx(0.4));
    CHECK(high.p_b == doctest::Approx(0.8));
    CHECK(high.p_r == doctest::Approx(0.8));
}

TEST_CASE("both allocators spend the whole budget") {
    birelay::PhiloxStream rng(11, 9, 0, 0);
    for (int i = 0; i < 100000; ++i) {
        const double t = std::exp(14.0 * (rng.next_double() - 0.5));
        const double P = std::exp(10.0 * (rng.next_double() - 0.3));
        const AllocationTriple ub = allocate_ub_highsnr(t, P);
        const AllocationTriple ach = allocate_ach_highsnr(t, P);
        CHECK(std::abs(0.5 * (ub.p_a + ub.p_b + ub.p_r) - P) <= 1e-12 * P);
        CHECK(std::abs(0.5 * (ach.p_a + ach.p_b + ach.p_r) - P) <= 1e-12 * P);
    }
}

TEST_CASE("allocations are continuous across their regime boundaries") {
    const double P = 7.0;
    const double eps = 1e-12;
    auto jump_ub = [&](double t) {
        const AllocationTriple lo = allocate_ub_highsnr(t * (1.0 - eps), P);
        const AllocationTriple hi = allocate_ub_highsnr(t * (1.0 + eps), P);
        return std::max({std::abs(lo.p_a - hi.p_a), std::abs(lo.p_b - hi.p_b),
                         std::abs(lo.p_r - hi.p_r)});
    };
    CHECK(jump_ub(kGoldenLo) <= 1e-9 * P);
    CHECK(jump_ub(kGoldenHi) <= 1e-9 * P);
    auto jump_ach = [&](double t) {
        const AllocationTriple lo = allocate_ach_highsnr(t * (1.0 - eps), P);
        const AllocationTriple hi = allocate_ach_highsnr(t * (1.0 + eps), P);
        return std::max({std::abs(lo.p_a - hi.p_a), std::abs(lo.p_b - hi.p_b),
                         std::abs(lo.p_r - hi.p_r)});
    };
    CHECK(jump_ach(1.0) <= 1e-9 * P);
}

TEST_CASE("allocations mirror under swapping the two terminals") {
    for (const double t : {0.05, 0.3, kGoldenLo, 0.8, 1.3, kGoldenHi, 4.0}) {
        const AllocationTriple fwd = allocate_ub_highsnr(t, 2.0);
        const AllocationTriple rev = allocate_ub_highsnr(1.0 / t, 2.0);
        CHECK(fwd.p_a == doctest::Approx(rev.p_b).epsilon(1e-12));
        CHECK(fwd.p_b == doctest::Approx(rev.p_a).epsilon(1e-12));
        CHECK(fwd.p_r == doctest::Approx(rev.p_r).epsilon(1e-12));
        const AllocationTriple afw = allocate_ach_highsnr(t, 2.0);
        const AllocationTriple arv = allocate_ach_highsnr(1.0 / t, 2.0);
        CHECK(afw.p_a == doctest::Approx(arv.p_b).epsilon(1e-12));
        CHECK(afw.p_b == doctest::Approx(arv.p_a).epsilon(1e-12));
        CHECK(afw.p_r == doctest::Approx(arv.p_r).epsilon(1e-12));
    }
}

TEST_CASE("lattice allocation aligns receive powers and covers broadcast") {
    birelay::PhiloxStream rng(12, 9, 0, 0);
    for (int i = 0; i < 1000; ++i) {
        const double t = std::exp(12.0 * (rng.next_double() - 0.5));
        const AllocationTriple a = allocate_ach_highsnr(t, 5.0);
        CHECK(t * a.p_a == doctest::Approx(a.p_b).epsilon(1e-12));
        CHECK(a.p_r >= std::max(a.p_a, a.p_b) * (1.0 - 1e-12));
    }
}

TEST_CASE("exchange rates take the weaker hop") {
    const ChannelRealization ch = realization_for(1.0);
    const RatePair r = highsnr_exchange_rate(ch, {3.0, 1.0, 7.0},
                                             RateModel::exact);
    // a->b source-limited at C(3)=2; b->a source-limited at C(1)=1.
    CHECK(r.r_ab == doctest::Approx(1.0));
    CHECK(r.r_ba == doctest::Approx(0.5));
    const RatePair relay_limited = highsnr_exchange_rate(
        ch, {7.0, 7.0, 1.0}, RateModel::exact);
    CHECK(relay_limited.r_ab == doctest::Approx(0.5));
    CHECK(relay_limited.r_ba == doctest::Approx(0.5));
}

TEST_CASE("high-power model shifts additively with the budget") {
    const ChannelRealization ch = realization_for(0.37);
    const AllocationTriple base = allocate_ub_highsnr(0.37, 1.0);
    const AllocationTriple scaled = allocate_ub_highsnr(0.37, 10.0);
    const RatePair r1 = highsnr_exchange_rate(ch, base, RateModel::high_snr);
    const RatePair r10 = highsnr_exchange_rate(ch, scaled,
                                               RateModel::high_snr);
    const double shift = 0.5 * std::log2(10.0);
    CHECK(r10.r_ab - r1.r_ab == doctest::Approx(shift).epsilon(1e-12));
    CHECK(r10.r_ba - r1.r_ba == doctest::Approx(shift).epsilon(1e-12));
}

TEST_CASE("high-power model rejects dead branches") {
    const ChannelRealization ch = realization_for(1.0);
    CHECK_THROWS_AS(
        highsnr_exchange_rate(ch, {0.0, 1.0, 1.0}, RateModel::high_snr),
        std::invalid_argument);
    CHECK_NOTHROW(
        highsnr_exchange_rate(ch, {0.0, 1.0, 1.0}, RateModel::exact));
}

TEST_CASE("gap agrees with its closed piecewise form") {
    birelay::PhiloxStream rng(13, 9, 0, 0);
    for (int i = 0; i < 2000; ++i) {
        const double t = std::exp(14.0 * (rng.next_double() - 0.5));
        CHECK(std::abs(highsnr_gap(t) - oracle::gap_reference(t)) <= 1e-12);
    }
    CHECK(std::abs(highsnr_gap(1.0)) <= 1e-12);
    CHECK(highsnr_gap(1e8) <= 1e-7);
    CHECK(highsnr_gap(1e-8) <= 1e-7);
}

TEST_CASE("gap sweep finds the ceiling near the known peak") {
    const GapProfile profile = gap_sweep(1e-3, 1e3, 4001);
    CHECK(profile.grid.size() == 4001);
    CHECK(profile.eta >= 0.0892);
    CHECK(profile.eta <= 0.0902);
    // Stationary point of the middle regime: root of 2t^3 + t^2 - 5t - 1.
    CHECK(profile.argmax_kappa_sq == doctest::Approx(1.45475).epsilon(3e-3));
    double best = 0.0;
    for (const double g : profile.gap_bits) best = std::max(best, g);
    CHECK(profile.eta == best);
    // Mirror symmetry: the log grid is reciprocal-symmetric.
    const std::size_t n = profile.grid.size();
    for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(profile.gap_bits[i] - profile.gap_bits[n - 1 - i]) <=
              1e-9);
}

TEST_CASE("gap profile serializes as a two-column table") {
    const GapProfile profile = gap_sweep(0.5, 2.0, 3);
    std::stringstream out;
    save_gap_profile(profile, out);
    std::string line;
    std::getline(out, line);
    CHECK(line == "kappa_sq gap_bits");
    int rows = 0;
    while (std::getline(out, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("invalid closed-form inputs are rejected") {
    CHECK_THROWS_AS(allocate_ub_highsnr(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(allocate_ub_highsnr(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(allocate_ach_highsnr(-2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(gap_sweep(0.0, 1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(gap_sweep(1.0, 0.5, 10), std::invalid_argument);
    CHECK_THROWS_AS(gap_sweep(0.5, 2.0, 1), std::invalid_argument);
}
