#include "orbi/errors.hpp"
#include "orbi/spectral.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace orbi::spectral;
using orbi::PreconditionError;

TEST_CASE("lambda1 closed-form cases") {
    WeightedGraph k2{2, {{0, 1, 1.0}}, {}};
    CHECK(lambda1(k2) == doctest::Approx(2.0).epsilon(1e-12));

    // C4: normalized Laplacian eigenvalues are 1 - cos(2 pi k / 4)
    const auto c4 = testsupport::cycle_graph(4);
    std::vector<double> expected;
    for (int k = 0; k < 4; ++k)
        expected.push_back(1.0 - std::cos(2.0 * std::numbers::pi * k / 4.0));
    std::sort(expected.begin(), expected.end());
    CHECK(lambda1(c4) == doctest::Approx(expected[1]).epsilon(1e-9));
    CHECK(lambda1(c4) == doctest::Approx(1.0).epsilon(1e-9));

    CHECK(lambda1(testsupport::path_graph(3)) == doctest::Approx(1.0).epsilon(1e-9));

    WeightedGraph disconnected{4, {{0, 1, 1.0}, {2, 3, 1.0}}, {}};
    CHECK_THROWS_AS(lambda1(disconnected), PreconditionError);
    WeightedGraph single{1, {}, {}};
    CHECK_THROWS_AS(lambda1(single), PreconditionError);
}

TEST_CASE("lambda1 is invariant under uniform edge-weight scaling") {
    std::mt19937_64 rng(21);
    for (int round = 0; round < 20; ++round) {
        auto g = testsupport::random_connected_graph(10, 8, 1000 + round);
        if (!g.connected()) continue;
        const double base = lambda1(g);
        auto scaled = g;
        for (auto& e : scaled.edges) e.w *= 7.25;
        CHECK(lambda1(scaled) == doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("cheeger_constant exact values") {
    WeightedGraph k2{2, {{0, 1, 1.0}}, {}};
    CHECK(cheeger_constant(k2, CheegerMode::exact) == doctest::Approx(1.0).epsilon(1e-12));
    // C4: best cut is two adjacent vertices, cut 2, volume 4
    CHECK(cheeger_constant(testsupport::cycle_graph(4), CheegerMode::exact) ==
          doctest::Approx(0.5).epsilon(1e-12));
    WeightedGraph big{25, {}, {}};
    for (std::uint32_t v = 0; v + 1 < 25; ++v) big.edges.push_back({v, v + 1, 1.0});
    CHECK_THROWS_AS(cheeger_constant(big, CheegerMode::exact), PreconditionError);
}

TEST_CASE("exact cheeger agrees with an independent subset enumeration") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 25; ++round) {
        auto g = testsupport::random_connected_graph(8, 6, 400 + round);
        if (!g.connected()) continue;
        const auto deg = g.weighted_degrees();
        double total = 0.0;
        for (double d : deg) total += d;
        double best = 1e18;
        for (std::uint32_t mask = 1; mask + 1 < (1u << g.vertex_count); ++mask) {
            double vol = 0.0, cut = 0.0;
            for (std::uint32_t v = 0; v < g.vertex_count; ++v)
                if (mask & (1u << v)) vol += deg[v];
            for (const auto& e : g.edges) {
                const bool a = mask & (1u << e.u), b = mask & (1u << e.v);
                if (a != b) cut += e.w;
            }
            if (vol > 0.0 && vol <= total / 2.0 + 1e-12) best = std::min(best, cut / vol);
        }
        REQUIRE(cheeger_constant(g, CheegerMode::exact) == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("sweep cheeger upper-bounds the exact constant") {
    for (int round = 0; round < 50; ++round) {
        auto g = testsupport::random_connected_graph(12, 10, 777 + round);
        if (!g.connected()) continue;
        const double exact = cheeger_constant(g, CheegerMode::exact);
        const double sweep = cheeger_constant(g, CheegerMode::sweep);
        REQUIRE(sweep >= exact - 1e-12);
    }
}

TEST_CASE("coarea identity") {
    // constant function: both sides zero
    const auto p3 = testsupport::path_graph(3);
    const auto constant = coarea_check(p3, {1.5, 1.5, 1.5});
    CHECK(constant.gradient_sum == 0.0);
    CHECK(constant.levelset_integral == 0.0);
    CHECK(constant.equal);

    // path with g = (0, 1, 2): both sides 2
    const auto staircase = coarea_check(p3, {0.0, 1.0, 2.0});
    CHECK(staircase.gradient_sum == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(staircase.levelset_integral == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(staircase.equal);

    CHECK_THROWS_AS(coarea_check(p3, {0.0, -1.0, 2.0}), PreconditionError);
    CHECK_THROWS_AS(coarea_check(p3, {0.0, 1.0}), PreconditionError);
}

TEST_CASE("coarea identity on random graph/function pairs") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> value(0.0, 3.0);
    std::uniform_int_distribution<int> duplicate(0, 3);
    for (int round = 0; round < 100; ++round) {
        auto g = testsupport::random_connected_graph(10, 9, 900 + round);
        std::vector<double> f(g.vertex_count);
        for (auto& x : f) x = value(rng);
        if (duplicate(rng) == 0) f[1] = f[0];  // exercise tied levels
        const auto r = coarea_check(g, f);
        REQUIRE(r.equal);
        const double scale = std::max(1.0, std::fabs(r.gradient_sum));
        REQUIRE(std::fabs(r.difference) <= 1e-12 * scale);
    }
}

TEST_CASE("cheeger_buser_report on closed-form graphs") {
    WeightedGraph k2{2, {{0, 1, 1.0}}, {}};
    const auto rk2 = cheeger_buser_report(k2);
    CHECK(rk2.h == doctest::Approx(1.0));
    CHECK(rk2.lambda1 == doctest::Approx(2.0));
    CHECK(rk2.sandwich_lhs == doctest::Approx(0.5));
    CHECK(rk2.sandwich_rhs == doctest::Approx(2.0));
    CHECK(rk2.sandwich_holds);

    const auto rc4 = cheeger_buser_report(testsupport::cycle_graph(4));
    CHECK(rc4.h == doctest::Approx(0.5));
    CHECK(rc4.lambda1 == doctest::Approx(1.0));
    CHECK(rc4.sandwich_lhs == doctest::Approx(0.125));
    CHECK(rc4.sandwich_rhs == doctest::Approx(1.0));  // upper bound tight
    CHECK(rc4.sandwich_holds);
    CHECK(rc4.continuous_lhs == doctest::Approx(0.0625));
    CHECK(rc4.continuous_rhs == doctest::Approx(4.0 * 0.5 + 10.0 * 0.25));
}

TEST_CASE("discrete cheeger sandwich holds on random connected graphs") {
    int tested = 0;
    for (int round = 0; tested < 200; ++round) {
        auto g = testsupport::random_connected_graph(4 + round % 9, round % 13,
                                                     31000 + round);
        if (!g.connected()) continue;
        const auto r = cheeger_buser_report(g);
        REQUIRE(r.sandwich_holds);
        REQUIRE(r.sandwich_lhs <= r.lambda1 + 1e-12);
        REQUIRE(r.lambda1 <= r.sandwich_rhs + 1e-12);
        ++tested;
    }
}

TEST_CASE("graph validation") {
    WeightedGraph loop{2, {{0, 0, 1.0}}, {}};
    CHECK_THROWS_AS(loop.validate(), PreconditionError);
    WeightedGraph dup{2, {{0, 1, 1.0}, {1, 0, 2.0}}, {}};
    CHECK_THROWS_AS(dup.validate(), PreconditionError);
    WeightedGraph negative{2, {{0, 1, -1.0}}, {}};
    CHECK_THROWS_AS(negative.validate(), PreconditionError);
    WeightedGraph bad_weights{2, {{0, 1, 1.0}}, {1.0}};
    CHECK_THROWS_AS(bad_weights.validate(), PreconditionError);
}
