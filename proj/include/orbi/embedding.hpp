#pragma once

#include "orbi/spectral.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace orbi::embedding {

/// Bounded-degree graph embedded in R^n: straight-segment edges between
/// per-vertex coordinates, with a thickness parameter.
struct EmbeddedComplex {
    struct Edge {
        std::uint32_t u, v;
    };
    int ambient_dim = 0;
    double thickness = 1.0;
    std::vector<Eigen::VectorXd> coords;  // one point per vertex
    std::vector<Edge> edges;

    std::uint32_t vertex_count() const { return static_cast<std::uint32_t>(coords.size()); }
    std::uint32_t max_degree() const;
    void validate() const;  ///< dims, finiteness, index ranges
};

struct ThicknessReport {
    bool ok = false;
    std::string witness;  ///< empty when ok; otherwise the violating simplex set
};

/// Strong combinatorial thickness check at level T:
///  (a) disjoint simplices (vertex/vertex, vertex/edge, edge/edge without a
///      shared endpoint) must have image distance > 2T;
///  (b) families of simplices whose T-neighborhoods pairwise intersect but
///      whose common intersection is empty must have an empty joint
///      neighborhood intersection. Once (a) holds, the only such families in
///      a straight-segment 1-complex are graph triangles, and the joint
///      intersection is empty exactly when the triangle inradius exceeds T.
ThicknessReport verify_thickness(const EmbeddedComplex& e, double T);

struct TubeEstimate {
    double value = 0.0;      ///< estimated volume of the union of T-neighborhoods
    double half_width = 0.0; ///< 95% binomial confidence half-width
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::uint64_t hits = 0;
    double box_volume = 0.0;
};

/// Monte-Carlo tube volume: uniform samples in the bounding box inflated by T,
/// split over fixed substreams and combined deterministically.
TubeEstimate tube_volume(const EmbeddedComplex& e, double T, std::uint64_t samples,
                         std::uint64_t seed);

/// Exact volume of a single capsule (segment T-neighborhood) in dimension n.
double capsule_volume(double length, double T, int n);
/// Volume of the unit n-ball.
double unit_ball_volume(int n);

struct SliceResult {
    Eigen::VectorXd direction;       // unit vector
    std::vector<double> offsets;     // evaluated hyperplane offsets for the best direction
    double max_cross_section = 0.0;  // (n-1)-measure estimate
    std::string method;              // "exact" or "monte-carlo"
};

struct SliceOptions {
    int offsets_per_direction = 64;
    std::uint64_t section_samples = 4096;  // per offset, monte-carlo path
    int refinement_rounds = 12;
};

/// Search unit directions (coordinate axes, a seeded low-discrepancy sphere
/// stream, then local refinement) for the one minimizing the maximum
/// hyperplane cross-section of the T-neighborhood. A heuristic witness,
/// never a certified optimum. Isolated-vertex-only inputs get exact sections.
SliceResult slice_search(const EmbeddedComplex& e, double T, int direction_budget,
                         std::uint64_t seed, const SliceOptions& options = {});

/// Evaluate the max cross-section of one fixed direction (same estimator as
/// the search uses).
double max_cross_section(const EmbeddedComplex& e, double T, const Eigen::VectorXd& direction,
                         std::uint64_t seed, const SliceOptions& options = {});

/// Max over an offset grid of the number of simplices whose T-neighborhood
/// meets the hyperplane; the discrete fiber-complexity proxy.
int fiber_complexity(const EmbeddedComplex& e, const Eigen::VectorXd& direction, double T,
                     int offsets = 257);

struct GromovGuthReport {
    double lhs = 0.0;   // (lambda1 * V_hyp)^(n/(n-1))
    double rhs = 0.0;   // cn * T^-n * V_T
    bool holds = false;
    double lambda1 = 0.0, v_hyp = 0.0, thickness = 0.0, v_tube = 0.0, cn = 0.0;
    int n = 0;
};

/// The main inequality evaluator; requires n >= 7.
GromovGuthReport gromov_guth_evaluate(double lambda1, double v_hyp, double T, double v_tube,
                                      int n, double cn);

struct ThickEmbedOptions {
    double spacing = 2.5;             ///< grid and circle spacing scale (>= 2.5)
    double clearance = 2.2;           ///< greedy acceptance distance for disjoint simplices
    double triangle_inradius = 1.1;   ///< greedy acceptance for closed triangles
    int max_shell = 40;               ///< candidate search limit, in grid steps
};

/// Layered thick embedding: base cycles on circles in dedicated coordinate
/// planes, remaining vertices by breadth-first layers on a spacing-2.5 grid in
/// the residual coordinates, with exact collision checks during placement.
/// The result passes verify_thickness at T = 1.
EmbeddedComplex thick_embed(const spectral::WeightedGraph& g, int ambient_dim,
                            const std::vector<std::vector<std::uint32_t>>& base_cycles,
                            const ThickEmbedOptions& options = {});

}  // namespace orbi::embedding
