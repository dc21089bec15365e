#pragma once

#include "orbi/simplicial.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace orbi::hypgeom {

/// Point of H^3 in the hyperboloid model: -x0^2 + x1^2 + x2^2 + x3^2 = -1,
/// x0 >= 1. The Minkowski form has signature (-,+,+,+).
struct HPoint {
    double x0 = 1.0, x1 = 0.0, x2 = 0.0, x3 = 0.0;

    static HPoint origin() { return {1.0, 0.0, 0.0, 0.0}; }

    /// Lift a spatial vector onto the upper hyperboloid sheet.
    static HPoint from_spatial(double x1, double x2, double x3);

    /// Validate the coordinates and rescale onto the sheet.
    /// Throws PreconditionError for vectors that are not close to timelike-unit.
    static HPoint from_coords(double x0, double x1, double x2, double x3);

    /// Map from the Poincare unit ball (|b| < 1).
    static HPoint from_poincare(const std::array<double, 3>& b);

    /// Image in the Poincare unit ball.
    std::array<double, 3> to_poincare() const;
};

/// Minkowski inner product <p, q> = -p0 q0 + p1 q1 + p2 q2 + p3 q3.
double minkowski_dot(const HPoint& p, const HPoint& q);

/// Hyperbolic distance arccosh(-<p, q>), computed through the Minkowski
/// difference norm so nearby points do not lose precision.
double hyp_distance(const HPoint& p, const HPoint& q);

/// Geodesic step: the point at hyperbolic distance r from p in the unit
/// tangent direction u (u must satisfy <u,p> = 0, <u,u> = 1).
HPoint geodesic_point(const HPoint& p, const std::array<double, 4>& tangent, double r);

/// Volume of a hyperbolic ball of radius r: pi * (sinh(2r) - 2r).
double ball_volume(double r);

/// v_{5e/2} / v_{e/2} = (sinh(5e) - 5e) / (sinh(e) - e).
/// Series-evaluated for small arguments; tends to 125 as e -> 0.
double ball_volume_ratio(double epsilon);

/// Compact sampling region: the metric ball B(center, radius).
struct BallDomain {
    HPoint center;
    double radius = 1.0;

    void validate() const;
    bool contains(const HPoint& p) const;
};

/// Deterministic quasi-random point stream, uniform for hyperbolic volume
/// on a ball domain. Halton base points with a seeded Cranley-Patterson shift.
class BallSampler {
public:
    BallSampler(const BallDomain& domain, std::uint64_t seed);
    HPoint next();

private:
    BallDomain domain_;
    std::array<double, 4> tangent_[3];
    std::array<double, 3> shift_;
    std::uint64_t index_;
};

struct NetResult {
    std::vector<HPoint> points;
    double epsilon = 0.0;
    std::vector<std::size_t> seed_indices;  ///< positions of the mandatory seeds
    bool declared_maximal = false;  ///< search budget exhausted without a new point
    std::uint64_t candidates_tried = 0;
};

struct NetOptions {
    std::uint64_t rejection_budget = 10000;   ///< consecutive misses before declaring maximality
    std::uint64_t sweep_candidates = 400000;  ///< final systematic pass size
};

/// Greedy maximal epsilon-separated set containing all seeds.
/// Candidates come from a seeded low-discrepancy stream; maximality is
/// declared after the rejection budget plus a dense final sweep.
NetResult epsilon_net(const BallDomain& domain, double epsilon,
                      const std::vector<HPoint>& seeds, std::uint64_t seed_rng,
                      const NetOptions& options = {});

struct DelaunayOptions {
    double jitter_magnitude = 1e-8;
    int max_jitter_rounds = 3;
    std::uint64_t jitter_seed = 0x9e3779b97f4a7c15ull;
};

struct DelaunayResult {
    simplicial::SimplicialComplex3 complex;
    bool jitter_applied = false;
};

/// Hyperbolic Delaunay triangulation: points are mapped to the Poincare ball
/// and triangulated by the Euclidean empty-circumsphere rule, which agrees
/// with the hyperbolic one there. Cospherical degeneracies trigger a recorded
/// deterministic jitter of magnitude ~1e-8.
DelaunayResult delaunay(const std::vector<HPoint>& points, const DelaunayOptions& options = {});

/// (m * V / v_{eps/2}, v_{5eps/2} / v_{eps/2}): vertex-count and vertex-degree
/// bounds for a good triangulation built from an eps-net.
std::pair<double, double> net_cardinality_and_degree_bounds(std::uint32_t m, double volume,
                                                            double epsilon);

}  // namespace orbi::hypgeom
