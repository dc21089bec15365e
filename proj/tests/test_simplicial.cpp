#include "orbi/errors.hpp"
#include "orbi/hypgeom.hpp"
#include "orbi/simplicial.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <random>

using namespace orbi::simplicial;
using orbi::PreconditionError;

namespace {

SimplicialComplex3 single_tetrahedron() {
    return SimplicialComplex3::from_simplices(4, {{0, 1, 2, 3}});
}

// boundary of the 4-simplex: all five facets of {0,1,2,3,4}
SimplicialComplex3 sphere_complex() {
    return SimplicialComplex3::from_simplices(
        5, {{0, 1, 2, 3}, {0, 1, 2, 4}, {0, 1, 3, 4}, {0, 2, 3, 4}, {1, 2, 3, 4}});
}

}  // namespace

TEST_CASE("face closure and counts") {
    const auto k = single_tetrahedron();
    CHECK(k.count(0) == 4);
    CHECK(k.count(1) == 6);
    CHECK(k.count(2) == 4);
    CHECK(k.count(3) == 1);
    CHECK(k.total_simplices() == 15);
    CHECK(k.has_simplex({0, 1}));
    CHECK(k.has_simplex({2, 1, 0}));  // unsorted query is normalized
    CHECK_FALSE(k.has_simplex({0, 4}));
    CHECK_THROWS_AS(SimplicialComplex3::from_simplices(3, {{0, 1, 3}}), PreconditionError);
    CHECK_THROWS_AS(SimplicialComplex3::from_simplices(4, {{0, 1, 1}}), PreconditionError);
}

TEST_CASE("validate_good_triangulation") {
    const auto k = single_tetrahedron();
    CHECK(validate_good_triangulation(k, {}).pass);

    MarkedSingularSet marked_edge;
    marked_edge.edges.push_back({0, 1, 2});
    CHECK(validate_good_triangulation(k, marked_edge).pass);

    // a vertex pair that is not an edge of K: containment failure, not a throw
    auto k5 = SimplicialComplex3::from_simplices(5, {{0, 1, 2, 3}, {4}});
    MarkedSingularSet bad_edge;
    bad_edge.edges.push_back({0, 4, 3});
    const auto report = validate_good_triangulation(k5, bad_edge);
    CHECK_FALSE(report.pass);
    REQUIRE(report.violations.size() == 1);

    // out-of-range reference: structural error
    MarkedSingularSet out_of_range;
    out_of_range.vertices.push_back(9);
    CHECK_THROWS_AS(validate_good_triangulation(k, out_of_range), PreconditionError);

    // label and degree constraints
    MarkedSingularSet bad_label;
    bad_label.edges.push_back({0, 1, 1});
    CHECK_THROWS_AS(validate_good_triangulation(k, bad_label), PreconditionError);
}

TEST_CASE("validate_good_triangulation is monotone under adding real simplices") {
    const auto k = single_tetrahedron();
    MarkedSingularSet s;
    s.edges.push_back({0, 1, 2});
    REQUIRE(validate_good_triangulation(k, s).pass);
    s.vertices.push_back(2);
    s.edges.push_back({1, 2, 3});
    CHECK(validate_good_triangulation(k, s).pass);
}

TEST_CASE("manifold_count_check on the 5-vertex 3-sphere") {
    const auto k = sphere_complex();
    const auto r = manifold_count_check(k);
    CHECK(r.vertices == 5);
    CHECK(r.edges == 10);
    CHECK(r.faces == 10);
    CHECK(r.tetrahedra == 5);
    CHECK(r.euler_characteristic == 0);
    CHECK(r.faces_equal_twice_tets);
    CHECK(r.boundary_faces == 0);
    CHECK(r.incidence_identity);
    // every vertex lies in 1 + 4 + 6 + 4 = 15 simplices
    CHECK(r.max_vertex_degree == 15);
    CHECK(k.total_simplices() == 30);
    // simplex-count bound from the proposition mechanism
    CHECK(k.total_simplices() <= simplex_count_bound(r.vertices, r.max_vertex_degree));
}

TEST_CASE("manifold_count_check flags a complex with boundary") {
    const auto r = manifold_count_check(single_tetrahedron());
    CHECK(r.faces == 4);
    CHECK(r.tetrahedra == 1);
    CHECK_FALSE(r.faces_equal_twice_tets);
    CHECK(r.boundary_faces == 4);
    CHECK(r.incidence_identity);
}

TEST_CASE("incidence identity on random subcomplexes") {
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<std::uint32_t> vertex(0, 11);
    for (int round = 0; round < 20; ++round) {
        std::vector<Simplex> simplices;
        const int tets = 1 + round % 5;
        for (int t = 0; t < tets; ++t) {
            std::set<std::uint32_t> s;
            while (s.size() < 4) s.insert(vertex(rng));
            simplices.push_back(Simplex(s.begin(), s.end()));
        }
        const auto k = SimplicialComplex3::from_simplices(12, simplices);
        const auto r = manifold_count_check(k);
        REQUIRE(r.incidence_identity);
        REQUIRE(r.degree_sum == r.vertex_slot_sum);
    }
}

TEST_CASE("delaunay outputs are face-closed and fail the closed-manifold control") {
    orbi::hypgeom::BallSampler sampler({orbi::hypgeom::HPoint::origin(), 0.8}, 4242);
    std::vector<orbi::hypgeom::HPoint> points;
    for (int i = 0; i < 18; ++i) points.push_back(sampler.next());
    const auto result = orbi::hypgeom::delaunay(points);
    const auto& k = result.complex;

    // face closure is structural: every face of every simplex is present
    for (int d = 1; d <= 3; ++d)
        for (const auto& s : k.simplices(d))
            for (std::size_t omit = 0; omit < s.size(); ++omit) {
                Simplex face;
                for (std::size_t i = 0; i < s.size(); ++i)
                    if (i != omit) face.push_back(s[i]);
                REQUIRE(k.has_simplex(face));
            }

    // triangulated ball, not a closed manifold: the F = 2T identity must fail
    const auto r = manifold_count_check(k);
    CHECK_FALSE(r.faces_equal_twice_tets);
    CHECK(r.boundary_faces > 0);
}

TEST_CASE("simplex_count_bound") {
    CHECK(simplex_count_bound(100, 125) == 12400);
    CHECK(simplex_count_bound(1, 2) == 1);
    CHECK_THROWS_AS(simplex_count_bound(10, 1), PreconditionError);
}

TEST_CASE("min_volume_from_complexity") {
    CHECK(min_volume_from_complexity(1, 0.5) == doctest::Approx(1.0));
    // independent long-double evaluation of 1024^(1/1.01)
    const long double expect = std::pow(1024.0L, 1.0L / 1.01L);
    CHECK(min_volume_from_complexity(1024, 0.01) ==
          doctest::Approx(static_cast<double>(expect)).epsilon(1e-12));
    // strictly increasing in N at fixed epsilon
    double prev = 0.0;
    for (std::uint64_t n = 1; n < 4000; n += 97) {
        const double cur = min_volume_from_complexity(n, 0.01);
        REQUIRE(cur > prev);
        prev = cur;
    }
    CHECK_THROWS_AS(min_volume_from_complexity(0, 0.1), PreconditionError);
    CHECK_THROWS_AS(min_volume_from_complexity(5, 0.0), PreconditionError);
}
