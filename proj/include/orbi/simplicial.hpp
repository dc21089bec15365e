#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace orbi::simplicial {

using VertexId = std::uint32_t;
using Simplex = std::vector<VertexId>;  // sorted, distinct vertex indices

/// 3-dimensional simplicial complex: simplex lists per dimension 0..3,
/// face-closed, no duplicates, indices in range. Optional per-vertex
/// coordinates (4 hyperboloid components or an R^n point).
class SimplicialComplex3 {
public:
    /// Build from the top-dimensional simplices plus any lower simplices that
    /// are not faces of them; the face closure is generated automatically.
    static SimplicialComplex3 from_simplices(std::uint32_t vertex_count,
                                             const std::vector<Simplex>& simplices);

    std::uint32_t vertex_count() const { return vertex_count_; }
    const std::vector<Simplex>& simplices(int dim) const;
    std::size_t count(int dim) const { return simplices(dim).size(); }
    std::size_t total_simplices() const;

    bool has_simplex(const Simplex& s) const;

    /// Number of simplices of every dimension containing vertex v.
    std::size_t vertex_degree(VertexId v) const;
    /// Max of vertex_degree over all vertices (0 for an empty complex).
    std::size_t max_vertex_degree() const;

    std::vector<std::vector<double>> coordinates;  ///< optional; size 0 or vertex_count

private:
    std::uint32_t vertex_count_ = 0;
    std::array<std::vector<Simplex>, 4> by_dim_;
};

/// Labeled graph marking inside a complex: the singular locus candidate.
/// Edge labels are local group orders (>= 2); marked vertex degrees in the
/// marked graph stay <= 3 (trivalent singular graphs).
struct MarkedSingularSet {
    struct LabeledEdge {
        VertexId u, v;
        std::uint32_t label;  // >= 2
    };
    std::vector<VertexId> vertices;
    std::vector<LabeledEdge> edges;

    void validate() const;  ///< label and degree constraints; throws PreconditionError
};

struct GoodTriangulationReport {
    bool pass = false;
    std::vector<std::string> violations;  // containment failures, human-readable
};

/// Passes iff every marked vertex is a 0-simplex of K and every marked edge a
/// 1-simplex of K. Indices outside K are structural errors (thrown), not
/// validation failures.
GoodTriangulationReport validate_good_triangulation(const SimplicialComplex3& K,
                                                    const MarkedSingularSet& S);

struct ManifoldCountReport {
    std::size_t vertices = 0, edges = 0, faces = 0, tetrahedra = 0;
    long long euler_characteristic = 0;
    bool faces_equal_twice_tets = false;   // F == 2T, closed-manifold necessary condition
    std::size_t boundary_faces = 0;        // triangles in != 2 tetrahedra
    bool incidence_identity = false;       // sum_v deg(v) == sum_sigma |vertices(sigma)|
    std::size_t degree_sum = 0;
    std::size_t vertex_slot_sum = 0;
    std::size_t max_vertex_degree = 0;
};

/// Count identities behind the simplex-count bound. Failures are report
/// entries, never exceptions.
ManifoldCountReport manifold_count_check(const SimplicialComplex3& K);

/// B * (D - 1), the simplex-count bound from B vertices of degree <= D.
std::uint64_t simplex_count_bound(std::uint64_t B, std::uint64_t D);

/// N^(1 / (1 + eps)): minimal volume compatible with a triangulation of
/// N simplices.
double min_volume_from_complexity(std::uint64_t N, double exponent_epsilon);

}  // namespace orbi::simplicial
