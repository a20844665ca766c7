#include "birelay/channel.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "doctest.h"

using birelay::ChannelRealization;
using birelay::FadingEnsemble;
using birelay::load_ensemble;
using birelay::sample_rayleigh;
using birelay::save_ensemble;

TEST_CASE("gains and ratio follow the squared magnitudes") {
    const ChannelRealization ch({2.0, 0.0}, {0.0, 1.0});
    CHECK(ch.gain_a() == doctest::Approx(4.0));
    CHECK(ch.gain_b() == doctest::Approx(1.0));
    CHECK(ch.kappa_sq() == doctest::Approx(4.0));
    CHECK(kappa_sq(ch) == doctest::Approx(4.0));

    const ChannelRealization tilted({1.0, 1.0}, {1.0, 0.0});
    CHECK(tilted.kappa_sq() == doctest::Approx(2.0));
}

TEST_CASE("swapping mirrors the ratio") {
    const ChannelRealization ch({0.3, -0.4}, {1.2, 0.5});
    const ChannelRealization sw = ch.swapped();
    CHECK(sw.h_a() == ch.h_b());
    CHECK(sw.h_b() == ch.h_a());
    CHECK(sw.kappa_sq() == doctest::Approx(1.0 / ch.kappa_sq()));
}

TEST_CASE("degenerate coefficients are rejected") {
    CHECK_THROWS_AS(ChannelRealization({0.0, 0.0}, {1.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ChannelRealization({1.0, 0.0}, {0.0, 0.0}),
                    std::invalid_argument);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(ChannelRealization({inf, 0.0}, {1.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("sampling is deterministic in the seed") {
    const FadingEnsemble a = sample_rayleigh(32, 99, 1.0);
    const FadingEnsemble b = sample_rayleigh(32, 99, 1.0);
    REQUIRE(a.size() == 32);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.realizations[i].h_a() == b.realizations[i].h_a());
        CHECK(a.realizations[i].h_b() == b.realizations[i].h_b());
    }
    const FadingEnsemble c = sample_rayleigh(32, 100, 1.0);
    CHECK(a.realizations[0].h_a() != c.realizations[0].h_a());
}

TEST_CASE("first draw of the reference seed is pinned") {
    // Regenerating these exact coefficients guards the whole pipeline:
    // counter layout, word order, Box-Muller convention and scaling. The
    // values are reproducible from numpy: Philox(counter=[0, 0, 0, 0],
    // key=[42, 1]).random_raw(4) fed through the same Box-Muller map.
    const FadingEnsemble e = sample_rayleigh(1, 42, 1.0);
    CHECK(e.realizations[0].h_a().real() ==
          doctest::Approx(0.36520648967444636).epsilon(1e-15));
    CHECK(e.realizations[0].h_a().imag() ==
          doctest::Approx(-0.82409046586780799).epsilon(1e-15));
    CHECK(e.realizations[0].h_b().real() ==
          doctest::Approx(-0.62525328249859258).epsilon(1e-15));
    CHECK(e.realizations[0].h_b().imag() ==
          doctest::Approx(0.53321116839368099).epsilon(1e-15));
}

TEST_CASE("gain average matches the requested variance") {
    const double variance = 2.5;
    const FadingEnsemble e = sample_rayleigh(500000, 7, variance);
    double mean_a = 0.0;
    double mean_b = 0.0;
    for (const auto& ch : e.realizations) {
        mean_a += ch.gain_a();
        mean_b += ch.gain_b();
    }
    mean_a /= e.size();
    mean_b /= e.size();
    CHECK(mean_a == doctest::Approx(variance).epsilon(0.01));
    CHECK(mean_b == doctest::Approx(variance).epsilon(0.01));
}

TEST_CASE("invalid sampling parameters are rejected") {
    CHECK_THROWS_AS(sample_rayleigh(0, 1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(sample_rayleigh(4, 1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sample_rayleigh(4, 1, -1.0), std::invalid_argument);
}

TEST_CASE("ensemble round-trips through the text table") {
    const FadingEnsemble e = sample_rayleigh(17, 2024, 0.5);
    std::stringstream buffer;
    save_ensemble(e, buffer);
    const FadingEnsemble back = load_ensemble(buffer);
    REQUIRE(back.size() == e.size());
    CHECK(back.seed == e.seed);
    CHECK(back.variance == e.variance);
    for (std::size_t i = 0; i < e.size(); ++i) {
        CHECK(back.realizations[i].h_a() == e.realizations[i].h_a());
        CHECK(back.realizations[i].h_b() == e.realizations[i].h_b());
    }
}

TEST_CASE("malformed tables are rejected") {
    std::stringstream empty("");
    CHECK_THROWS_AS(load_ensemble(empty), std::runtime_error);
    std::stringstream junk("# seed: 1\nre_h_a,im_h_a,re_h_b,im_h_b\n1,2,3\n");
    CHECK_THROWS_AS(load_ensemble(junk), std::runtime_error);
}
