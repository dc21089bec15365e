#pragma once

#include <cstdint>
#include <vector>

namespace orbi::spectral {

/// Undirected weighted graph. No self-loops, no duplicate edges; positive
/// weights. Connectivity is demanded by the eigenvalue operations, not here.
struct WeightedGraph {
    struct Edge {
        std::uint32_t u, v;
        double w;
    };
    std::uint32_t vertex_count = 0;
    std::vector<Edge> edges;
    std::vector<double> vertex_weights;  ///< optional, size 0 or vertex_count

    void validate() const;
    bool connected() const;
    std::vector<double> weighted_degrees() const;
    double total_volume() const;  ///< sum of weighted degrees
};

/// Second-smallest eigenvalue of the normalized Laplacian, dense and
/// deterministic. Requires a connected graph on >= 2 vertices.
double lambda1(const WeightedGraph& g);

enum class CheegerMode { exact, sweep };

/// Conductance h = min over S with vol(S) <= vol(G)/2 of w(boundary S)/vol(S).
/// exact: full subset enumeration (vertex_count <= 24).
/// sweep: best sweep cut along the lambda1 eigenvector ordering; an upper
/// bound on h that still satisfies the Cheeger inequality.
double cheeger_constant(const WeightedGraph& g, CheegerMode mode);

struct CoareaReport {
    double gradient_sum = 0.0;   // sum over edges of w_ij |g_i - g_j|
    double levelset_integral = 0.0;  // integral over thresholds of the cut weight
    double difference = 0.0;
    bool equal = false;  // to 1e-12 relative tolerance
};

/// Discrete coarea identity for a nonnegative vertex function.
CoareaReport coarea_check(const WeightedGraph& g, const std::vector<double>& values);

struct CheegerBuserReport {
    double h = 0.0;
    double lambda1 = 0.0;
    CheegerMode mode_used = CheegerMode::exact;
    double sandwich_lhs = 0.0;    // h^2 / 2, asserted lower bound
    double sandwich_rhs = 0.0;    // 2h, asserted upper bound
    bool sandwich_holds = false;
    double continuous_lhs = 0.0;  // h^2 / 4 (reported only)
    double continuous_rhs = 0.0;  // 2(k-1)h + 10h^2 with k = 3 (reported only)
};

/// Discrete Cheeger sandwich h^2/2 <= lambda1 <= 2h (normalized Laplacian),
/// with the continuous-form values reported alongside for exploration.
CheegerBuserReport cheeger_buser_report(const WeightedGraph& g);

}  // namespace orbi::spectral
