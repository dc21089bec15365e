#include "orbi/simplicial.hpp"
#include "orbi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace orbi::simplicial {

SimplicialComplex3 SimplicialComplex3::from_simplices(std::uint32_t vertex_count,
                                                      const std::vector<Simplex>& simplices) {
    SimplicialComplex3 k;
    k.vertex_count_ = vertex_count;
    std::array<std::set<Simplex>, 4> closed;
    for (std::uint32_t v = 0; v < vertex_count; ++v) closed[0].insert({v});

    // Insert a simplex together with all of its faces.
    auto insert_closure = [&](const Simplex& s, auto&& self) -> void {
        if (s.empty()) return;
        const int dim = static_cast<int>(s.size()) - 1;
        if (dim > 3) throw PreconditionError("simplex dimension above 3");
        for (VertexId v : s)
            if (v >= vertex_count) throw PreconditionError("simplex vertex index out of range");
        if (!closed[dim].insert(s).second) return;
        if (dim == 0) return;
        for (std::size_t omit = 0; omit < s.size(); ++omit) {
            Simplex face;
            face.reserve(s.size() - 1);
            for (std::size_t i = 0; i < s.size(); ++i)
                if (i != omit) face.push_back(s[i]);
            self(face, self);
        }
    };

    for (const Simplex& s : simplices) {
        Simplex sorted = s;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw PreconditionError("simplex has a repeated vertex");
        insert_closure(sorted, insert_closure);
    }
    for (int d = 0; d < 4; ++d)
        k.by_dim_[d].assign(closed[d].begin(), closed[d].end());
    return k;
}

const std::vector<Simplex>& SimplicialComplex3::simplices(int dim) const {
    if (dim < 0 || dim > 3) throw PreconditionError("simplex dimension must be in 0..3");
    return by_dim_[static_cast<std::size_t>(dim)];
}

std::size_t SimplicialComplex3::total_simplices() const {
    std::size_t n = 0;
    for (const auto& v : by_dim_) n += v.size();
    return n;
}

bool SimplicialComplex3::has_simplex(const Simplex& s) const {
    if (s.empty() || s.size() > 4) return false;
    Simplex sorted = s;
    std::sort(sorted.begin(), sorted.end());
    const auto& list = by_dim_[sorted.size() - 1];
    return std::binary_search(list.begin(), list.end(), sorted);
}

std::size_t SimplicialComplex3::vertex_degree(VertexId v) const {
    std::size_t deg = 0;
    for (const auto& list : by_dim_)
        for (const Simplex& s : list)
            if (std::binary_search(s.begin(), s.end(), v)) ++deg;
    return deg;
}

std::size_t SimplicialComplex3::max_vertex_degree() const {
    std::vector<std::size_t> deg(vertex_count_, 0);
    for (const auto& list : by_dim_)
        for (const Simplex& s : list)
            for (VertexId v : s) ++deg[v];
    std::size_t best = 0;
    for (std::size_t d : deg) best = std::max(best, d);
    return best;
}

void MarkedSingularSet::validate() const {
    std::map<VertexId, int> degree;
    std::set<std::pair<VertexId, VertexId>> seen;
    for (const auto& e : edges) {
        if (e.u == e.v) throw PreconditionError("marked edge is a loop");
        if (e.label < 2) throw PreconditionError("marked edge label must be >= 2");
        auto key = std::minmax(e.u, e.v);
        if (!seen.insert(key).second) throw PreconditionError("duplicate marked edge");
        ++degree[e.u];
        ++degree[e.v];
    }
    for (const auto& [v, d] : degree)
        if (d > 3)
            throw PreconditionError("marked graph vertex degree above 3 at vertex " +
                                    std::to_string(v));
}

GoodTriangulationReport validate_good_triangulation(const SimplicialComplex3& K,
                                                    const MarkedSingularSet& S) {
    S.validate();
    auto check_range = [&](VertexId v) {
        if (v >= K.vertex_count())
            throw PreconditionError("marked vertex index " + std::to_string(v) +
                                    " outside the complex");
    };
    for (VertexId v : S.vertices) check_range(v);
    for (const auto& e : S.edges) {
        check_range(e.u);
        check_range(e.v);
    }

    GoodTriangulationReport report;
    report.pass = true;
    for (VertexId v : S.vertices) {
        if (!K.has_simplex({v})) {
            report.pass = false;
            report.violations.push_back("marked vertex " + std::to_string(v) +
                                        " is not a 0-simplex");
        }
    }
    for (const auto& e : S.edges) {
        if (!K.has_simplex({e.u, e.v})) {
            report.pass = false;
            report.violations.push_back("marked edge (" + std::to_string(e.u) + "," +
                                        std::to_string(e.v) + ") is not a 1-simplex");
        }
    }
    return report;
}

ManifoldCountReport manifold_count_check(const SimplicialComplex3& K) {
    if (K.total_simplices() == 0) throw PreconditionError("empty complex");
    ManifoldCountReport r;
    r.vertices = K.count(0);
    r.edges = K.count(1);
    r.faces = K.count(2);
    r.tetrahedra = K.count(3);
    r.euler_characteristic = static_cast<long long>(r.vertices) - static_cast<long long>(r.edges) +
                             static_cast<long long>(r.faces) - static_cast<long long>(r.tetrahedra);

    // Each triangle should lie in exactly two tetrahedra of a closed manifold.
    std::map<Simplex, int> face_use;
    for (const Simplex& t : K.simplices(3)) {
        for (std::size_t omit = 0; omit < 4; ++omit) {
            Simplex f;
            for (std::size_t i = 0; i < 4; ++i)
                if (i != omit) f.push_back(t[i]);
            ++face_use[f];
        }
    }
    r.boundary_faces = 0;
    for (const Simplex& f : K.simplices(2))
        if (face_use[f] != 2) ++r.boundary_faces;
    r.faces_equal_twice_tets = (r.faces == 2 * r.tetrahedra) && (r.boundary_faces == 0);

    std::vector<std::size_t> deg(K.vertex_count(), 0);
    std::size_t slots = 0;
    for (int d = 0; d < 4; ++d)
        for (const Simplex& s : K.simplices(d)) {
            slots += s.size();
            for (VertexId v : s) ++deg[v];
        }
    r.degree_sum = 0;
    r.max_vertex_degree = 0;
    for (std::size_t d : deg) {
        r.degree_sum += d;
        r.max_vertex_degree = std::max(r.max_vertex_degree, d);
    }
    r.vertex_slot_sum = slots;
    r.incidence_identity = (r.degree_sum == r.vertex_slot_sum);
    return r;
}

std::uint64_t simplex_count_bound(std::uint64_t B, std::uint64_t D) {
    if (B < 1) throw PreconditionError("vertex count bound must be >= 1");
    if (D < 2) throw PreconditionError("degree bound must be >= 2");
    return B * (D - 1);
}

double min_volume_from_complexity(std::uint64_t N, double exponent_epsilon) {
    if (N < 1) throw PreconditionError("simplex count must be >= 1");
    if (!(exponent_epsilon > 0.0)) throw PreconditionError("exponent epsilon must be positive");
    return std::pow(static_cast<double>(N), 1.0 / (1.0 + exponent_epsilon));
}

}  // namespace orbi::simplicial
