#pragma once

#include "orbi/algebraic.hpp"
#include "orbi/hypgeom.hpp"
#include "orbi/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

namespace testsupport {

// Cyclotomic polynomial by exact integer division:
// Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d.
inline std::vector<long long> cyclotomic(int n) {
    static std::map<int, std::vector<long long>> cache;
    const auto hit = cache.find(n);
    if (hit != cache.end()) return hit->second;

    std::vector<long long> num(static_cast<std::size_t>(n) + 1, 0);
    num[0] = -1;
    num[static_cast<std::size_t>(n)] = 1;
    for (int d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        const auto div = cyclotomic(d);
        // exact polynomial long division, constant-first layout
        std::vector<long long> quot(num.size() - div.size() + 1, 0);
        std::vector<long long> rem = num;
        for (int k = static_cast<int>(quot.size()) - 1; k >= 0; --k) {
            const long long c =
                rem[static_cast<std::size_t>(k) + div.size() - 1] / div.back();
            quot[static_cast<std::size_t>(k)] = c;
            for (std::size_t i = 0; i < div.size(); ++i)
                rem[static_cast<std::size_t>(k) + i] -= c * div[i];
        }
        num = quot;
    }
    cache[n] = num;
    return num;
}

// Seeded random connected weighted graph (spanning tree + extra edges).
inline orbi::spectral::WeightedGraph random_connected_graph(std::uint32_t vertices,
                                                            std::uint32_t extra_edges,
                                                            std::uint64_t seed,
                                                            bool unit_weights = false) {
    std::mt19937_64 rng(seed);
    orbi::spectral::WeightedGraph g;
    g.vertex_count = vertices;
    std::uniform_real_distribution<double> weight(0.5, 2.0);
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (std::uint32_t v = 1; v < vertices; ++v) {
        std::uniform_int_distribution<std::uint32_t> pick(0, v - 1);
        const std::uint32_t u = pick(rng);
        seen.insert(std::minmax(u, v));
        g.edges.push_back({u, v, unit_weights ? 1.0 : weight(rng)});
    }
    std::uniform_int_distribution<std::uint32_t> pick(0, vertices - 1);
    for (std::uint32_t k = 0; k < extra_edges; ++k) {
        const std::uint32_t u = pick(rng), v = pick(rng);
        if (u == v) continue;
        if (!seen.insert(std::minmax(u, v)).second) continue;
        g.edges.push_back({std::min(u, v), std::max(u, v), unit_weights ? 1.0 : weight(rng)});
    }
    return g;
}

// Seeded random connected graph with max degree <= cap.
inline orbi::spectral::WeightedGraph random_bounded_degree_graph(std::uint32_t vertices,
                                                                 std::uint32_t target_edges,
                                                                 std::uint32_t degree_cap,
                                                                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    orbi::spectral::WeightedGraph g;
    g.vertex_count = vertices;
    std::vector<std::uint32_t> degree(vertices, 0);
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (std::uint32_t v = 1; v < vertices; ++v) {
        // attach to a random earlier vertex with spare degree
        for (int attempt = 0; attempt < 200; ++attempt) {
            std::uniform_int_distribution<std::uint32_t> pick(0, v - 1);
            const std::uint32_t u = pick(rng);
            if (degree[u] + 1 >= degree_cap) continue;
            g.edges.push_back({u, v, 1.0});
            seen.insert({u, v});
            ++degree[u];
            ++degree[v];
            break;
        }
    }
    std::uniform_int_distribution<std::uint32_t> pick(0, vertices - 1);
    std::uint32_t guard = 0;
    while (g.edges.size() < target_edges && guard++ < 100000) {
        const std::uint32_t a = pick(rng), b = pick(rng);
        if (a == b) continue;
        const auto key = std::minmax(a, b);
        if (seen.count(key)) continue;
        if (degree[a] >= degree_cap || degree[b] >= degree_cap) continue;
        seen.insert(key);
        g.edges.push_back({key.first, key.second, 1.0});
        ++degree[a];
        ++degree[b];
    }
    return g;
}

inline orbi::spectral::WeightedGraph path_graph(std::uint32_t k) {
    orbi::spectral::WeightedGraph g;
    g.vertex_count = k;
    for (std::uint32_t v = 0; v + 1 < k; ++v) g.edges.push_back({v, v + 1, 1.0});
    return g;
}

inline orbi::spectral::WeightedGraph cycle_graph(std::uint32_t k) {
    orbi::spectral::WeightedGraph g;
    g.vertex_count = k;
    for (std::uint32_t v = 0; v < k; ++v) g.edges.push_back({v, (v + 1) % k, 1.0});
    return g;
}

// Bouquet of cycles sharing vertex 0; cycle lengths >= 3.
inline std::pair<orbi::spectral::WeightedGraph, std::vector<std::vector<std::uint32_t>>>
bouquet_graph(const std::vector<std::uint32_t>& lengths) {
    orbi::spectral::WeightedGraph g;
    std::vector<std::vector<std::uint32_t>> cycles;
    std::uint32_t next = 1;
    for (const std::uint32_t len : lengths) {
        std::vector<std::uint32_t> cycle = {0};
        for (std::uint32_t i = 0; i + 1 < len; ++i) cycle.push_back(next++);
        for (std::size_t i = 0; i < cycle.size(); ++i)
            g.edges.push_back({cycle[i], cycle[(i + 1) % cycle.size()], 1.0});
        cycles.push_back(cycle);
    }
    g.vertex_count = next;
    return {g, cycles};
}

// Brute-force empty-circumsphere oracle in the Poincare model: circumcenter
// of the mapped tetrahedron via a linear solve, then every other mapped point
// must stay outside the ball (within tolerance).
struct CircumsphereOracle {
    std::vector<std::array<double, 3>> ball_points;

    explicit CircumsphereOracle(const std::vector<orbi::hypgeom::HPoint>& points) {
        for (const auto& p : points) ball_points.push_back(p.to_poincare());
    }

    static double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
        return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    }

    bool tetra_empty(const std::array<std::size_t, 4>& tet, double tolerance) const {
        // circumcenter c solves 2 (p_i - p_0) . c = |p_i|^2 - |p_0|^2
        const auto& p0 = ball_points[tet[0]];
        double m[3][3], rhs[3];
        for (int r = 0; r < 3; ++r) {
            const auto& pr = ball_points[tet[static_cast<std::size_t>(r) + 1]];
            for (int c = 0; c < 3; ++c) m[r][c] = 2.0 * (pr[static_cast<std::size_t>(c)] -
                                                         p0[static_cast<std::size_t>(c)]);
            rhs[r] = dot3(pr, pr) - dot3(p0, p0);
        }
        // Cramer's rule
        auto det3 = [](const double a[3][3]) {
            return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                   a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                   a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        };
        const double d = det3(m);
        if (std::fabs(d) < 1e-14) return false;  // degenerate tetrahedron
        std::array<double, 3> center;
        for (int c = 0; c < 3; ++c) {
            double mc[3][3];
            for (int r = 0; r < 3; ++r)
                for (int k = 0; k < 3; ++k) mc[r][k] = (k == c) ? rhs[r] : m[r][k];
            center[static_cast<std::size_t>(c)] = det3(mc) / d;
        }
        auto dist2 = [&](const std::array<double, 3>& p) {
            const std::array<double, 3> diff = {p[0] - center[0], p[1] - center[1],
                                                p[2] - center[2]};
            return dot3(diff, diff);
        };
        const double r2 = dist2(ball_points[tet[0]]);
        for (std::size_t i = 0; i < ball_points.size(); ++i) {
            if (i == tet[0] || i == tet[1] || i == tet[2] || i == tet[3]) continue;
            if (dist2(ball_points[i]) < r2 - tolerance * std::max(1.0, r2)) return false;
        }
        return true;
    }
};

}  // namespace testsupport
