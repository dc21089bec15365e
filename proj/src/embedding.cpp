#include "orbi/embedding.hpp"
#include "orbi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace orbi::embedding {

namespace {

using Eigen::VectorXd;

double point_segment_distance(const VectorXd& p, const VectorXd& a, const VectorXd& b) {
    const VectorXd d = b - a;
    const double dd = d.squaredNorm();
    if (dd <= 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(d) / dd, 0.0, 1.0);
    return (p - (a + t * d)).norm();
}

// Closest distance between segments [p1,q1] and [p2,q2] (Ericson-style
// clamped minimization; handles parallel and degenerate cases).
double segment_segment_distance(const VectorXd& p1, const VectorXd& q1, const VectorXd& p2,
                                const VectorXd& q2) {
    const VectorXd d1 = q1 - p1;
    const VectorXd d2 = q2 - p2;
    const VectorXd r = p1 - p2;
    const double a = d1.squaredNorm();
    const double e = d2.squaredNorm();
    const double f = d2.dot(r);
    double s = 0.0, t = 0.0;
    if (a <= 0.0 && e <= 0.0) return r.norm();
    if (a <= 0.0) {
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = d1.dot(r);
        if (e <= 0.0) {
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = d1.dot(d2);
            const double denom = a * e - b * b;
            if (denom > 0.0) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return ((p1 + s * d1) - (p2 + t * d2)).norm();
}

// Simplex ids: 0..V-1 vertices, V..V+E-1 edges.
struct SimplexRef {
    bool is_edge;
    std::uint32_t a, b;
};

class SimplexGeometry {
public:
    explicit SimplexGeometry(const EmbeddedComplex& e) : e_(e) {
        for (const auto& edge : e.edges) edge_keys_.insert(pair_key(edge.u, edge.v));
    }

    std::size_t count() const { return e_.coords.size() + e_.edges.size(); }

    SimplexRef ref(std::size_t id) const {
        const std::size_t v = e_.coords.size();
        if (id < v) return {false, static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id)};
        const auto& edge = e_.edges[id - v];
        return {true, edge.u, edge.v};
    }

    // Simplices constrain each other only when their closures are disjoint
    // and they are not faces of a common edge: two endpoints of one edge, or
    // a vertex inside its own edge, intersect through that edge.
    bool disjoint(std::size_t i, std::size_t j) const {
        const SimplexRef a = ref(i), b = ref(j);
        if (!a.is_edge && !b.is_edge) return a.a != b.a && !adjacent(a.a, b.a);
        if (!a.is_edge) return a.a != b.a && a.a != b.b;
        if (!b.is_edge) return b.a != a.a && b.a != a.b;
        return a.a != b.a && a.a != b.b && a.b != b.a && a.b != b.b;
    }

    double distance(std::size_t i, std::size_t j) const {
        const SimplexRef a = ref(i), b = ref(j);
        if (!a.is_edge && !b.is_edge) return (e_.coords[a.a] - e_.coords[b.a]).norm();
        if (!a.is_edge) return point_segment_distance(e_.coords[a.a], e_.coords[b.a], e_.coords[b.b]);
        if (!b.is_edge) return point_segment_distance(e_.coords[b.a], e_.coords[a.a], e_.coords[a.b]);
        return segment_segment_distance(e_.coords[a.a], e_.coords[a.b], e_.coords[b.a],
                                        e_.coords[b.b]);
    }

    std::string describe(std::size_t id) const {
        const SimplexRef s = ref(id);
        std::ostringstream out;
        if (s.is_edge)
            out << "edge(" << s.a << "," << s.b << ")";
        else
            out << "vertex(" << s.a << ")";
        return out.str();
    }

private:
    static std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
        return (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
    }
    bool adjacent(std::uint32_t a, std::uint32_t b) const {
        return edge_keys_.count(pair_key(a, b)) != 0;
    }

    const EmbeddedComplex& e_;
    std::unordered_set<std::uint64_t> edge_keys_;
};

// Uniform grid over the first three coordinates, storing vertex ids. A pair
// of simplices within any full-space distance bound is always discoverable
// through endpoint proximity in the projected subspace.
class VertexGrid {
public:
    explicit VertexGrid(double cell) : cell_(cell) {}

    static std::uint64_t key(long x, long y, long z) {
        auto fold = [](long v) { return static_cast<std::uint64_t>(v + (1l << 20)) & 0x1fffff; };
        return fold(x) | (fold(y) << 21) | (fold(z) << 42);
    }

    std::array<long, 3> cell_of(const VectorXd& p) const {
        std::array<long, 3> c{0, 0, 0};
        for (int k = 0; k < 3 && k < p.size(); ++k)
            c[static_cast<std::size_t>(k)] = static_cast<long>(std::floor(p[k] / cell_));
        return c;
    }

    void insert(std::uint32_t vertex, const VectorXd& p) {
        const auto c = cell_of(p);
        cells_[key(c[0], c[1], c[2])].push_back(vertex);
    }

    template <typename F>
    void for_each_near(const VectorXd& p, double radius, F&& f) const {
        const auto c = cell_of(p);
        const long r = static_cast<long>(std::ceil(radius / cell_)) + 1;
        for (long dx = -r; dx <= r; ++dx)
            for (long dy = -r; dy <= r; ++dy)
                for (long dz = -r; dz <= r; ++dz) {
                    const auto it = cells_.find(key(c[0] + dx, c[1] + dy, c[2] + dz));
                    if (it == cells_.end()) continue;
                    for (std::uint32_t v : it->second) f(v);
                }
    }

private:
    double cell_;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

double triangle_inradius(const VectorXd& a, const VectorXd& b, const VectorXd& c) {
    const double la = (b - c).norm(), lb = (a - c).norm(), lc = (a - b).norm();
    const double s = 0.5 * (la + lb + lc);
    if (s <= 0.0) return 0.0;
    const double h = s * (s - la) * (s - lb) * (s - lc);
    if (h <= 0.0) return 0.0;  // collinear
    return std::sqrt(h) / s;
}

// Inverse of the standard normal CDF (Acklam's rational approximation).
double inverse_normal_cdf(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    p = std::clamp(p, 1e-12, 1.0 - 1e-12);
    if (p < 0.02425) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - 0.02425) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5, r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double halton(std::uint64_t index, std::uint32_t base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

constexpr std::uint32_t kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                     31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

}  // namespace

std::uint32_t EmbeddedComplex::max_degree() const {
    std::vector<std::uint32_t> deg(coords.size(), 0);
    for (const Edge& e : edges) {
        ++deg[e.u];
        ++deg[e.v];
    }
    std::uint32_t best = 0;
    for (std::uint32_t d : deg) best = std::max(best, d);
    return best;
}

void EmbeddedComplex::validate() const {
    if (ambient_dim < 2) throw PreconditionError("ambient dimension must be >= 2");
    if (!(thickness > 0.0)) throw PreconditionError("thickness must be positive");
    for (const auto& p : coords) {
        if (p.size() != ambient_dim)
            throw PreconditionError("vertex coordinate dimension mismatch");
        for (int k = 0; k < p.size(); ++k)
            if (!std::isfinite(p[k])) throw PreconditionError("non-finite vertex coordinate");
    }
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (const Edge& e : edges) {
        if (e.u >= coords.size() || e.v >= coords.size())
            throw PreconditionError("edge endpoint out of range");
        if (e.u == e.v) throw PreconditionError("self-loop edge");
        if (!seen.insert(std::minmax(e.u, e.v)).second)
            throw PreconditionError("duplicate edge");
    }
}

ThicknessReport verify_thickness(const EmbeddedComplex& e, double T) {
    e.validate();
    if (!(T > 0.0)) throw PreconditionError("thickness level must be positive");

    const SimplexGeometry geo(e);
    const std::size_t v_count = e.coords.size();
    const std::size_t total = geo.count();
    const double threshold = 2.0 * T;

    ThicknessReport report;
    report.ok = true;

    auto check_pair = [&](std::size_t i, std::size_t j) {
        if (!geo.disjoint(i, j)) return true;
        const double dist = geo.distance(i, j);
        if (dist > threshold) return true;
        report.ok = false;
        std::ostringstream out;
        out << geo.describe(i) << " and " << geo.describe(j) << " are disjoint but at distance "
            << dist << " <= 2T = " << threshold;
        report.witness = out.str();
        return false;
    };

    if (total <= 6000) {
        for (std::size_t i = 0; i < total && report.ok; ++i)
            for (std::size_t j = i + 1; j < total; ++j)
                if (!check_pair(i, j)) break;
    } else {
        // Grid pass: any close pair has endpoints within 2T + L_max of each
        // other, and projection onto the first three axes only shrinks that.
        double max_len = 0.0;
        for (const auto& edge : e.edges)
            max_len = std::max(max_len, (e.coords[edge.u] - e.coords[edge.v]).norm());
        VertexGrid grid(std::max(1.0, threshold));
        for (std::uint32_t v = 0; v < v_count; ++v) grid.insert(v, e.coords[v]);
        std::vector<std::vector<std::uint32_t>> incident(v_count);
        for (std::size_t k = 0; k < e.edges.size(); ++k) {
            incident[e.edges[k].u].push_back(static_cast<std::uint32_t>(v_count + k));
            incident[e.edges[k].v].push_back(static_cast<std::uint32_t>(v_count + k));
        }
        std::unordered_set<std::uint64_t> done;
        const double radius = threshold + max_len;
        for (std::uint32_t v = 0; v < v_count && report.ok; ++v) {
            std::vector<std::size_t> near_simplices;
            grid.for_each_near(e.coords[v], radius, [&](std::uint32_t u) {
                near_simplices.push_back(u);
                for (std::uint32_t s : incident[u]) near_simplices.push_back(s);
            });
            std::sort(near_simplices.begin(), near_simplices.end());
            near_simplices.erase(std::unique(near_simplices.begin(), near_simplices.end()),
                                 near_simplices.end());
            std::vector<std::size_t> own = {v};
            for (std::uint32_t s : incident[v]) own.push_back(s);
            for (std::size_t i : own) {
                for (std::size_t j : near_simplices) {
                    if (i == j) continue;
                    const std::uint64_t k =
                        (static_cast<std::uint64_t>(std::min(i, j)) << 32) | std::max(i, j);
                    if (!done.insert(k).second) continue;
                    if (!check_pair(i, j)) break;
                }
                if (!report.ok) break;
            }
        }
    }
    if (!report.ok) return report;

    // Joint condition. With pairwise separation in place, the only families
    // of simplices whose T-neighborhoods pairwise meet without a common
    // simplex point are graph triangles; their joint tube intersection is
    // nonempty exactly when the triangle inradius is <= T.
    std::vector<std::set<std::uint32_t>> adj(v_count);
    for (const auto& edge : e.edges) {
        adj[edge.u].insert(edge.v);
        adj[edge.v].insert(edge.u);
    }
    for (const auto& edge : e.edges) {
        const auto [u, v] = std::minmax(edge.u, edge.v);
        for (std::uint32_t w : adj[u]) {
            if (w <= v || !adj[v].count(w)) continue;  // enumerate u < v < w once
            const double r = triangle_inradius(e.coords[u], e.coords[v], e.coords[w]);
            if (r <= T) {
                report.ok = false;
                std::ostringstream out;
                out << "triangle (" << u << "," << v << "," << w << ") has inradius " << r
                    << " <= T = " << T << "; the three edge neighborhoods share a point";
                report.witness = out.str();
                return report;
            }
        }
    }
    return report;
}

double unit_ball_volume(int n) {
    if (n < 0) throw PreconditionError("dimension must be nonnegative");
    return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double capsule_volume(double length, double T, int n) {
    if (!(T > 0.0) || length < 0.0 || n < 1)
        throw PreconditionError("invalid capsule parameters");
    return length * std::pow(T, n - 1) * unit_ball_volume(n - 1) +
           std::pow(T, n) * unit_ball_volume(n);
}

namespace {

// Point-vs-embedding hit test. Items are sorted by the low end of their
// first-axis interval; the bounded interval width makes queries local.
class HitTester {
public:
    HitTester(const EmbeddedComplex& e, double T) : e_(e), T_(T) {
        const std::size_t v = e.coords.size();
        items_.reserve(v + e.edges.size());
        for (std::size_t i = 0; i < v; ++i) {
            const double x = e.coords[i][0];
            items_.push_back({x - T, x + T, i});
        }
        for (std::size_t k = 0; k < e.edges.size(); ++k) {
            const double xa = e.coords[e.edges[k].u][0];
            const double xb = e.coords[e.edges[k].v][0];
            items_.push_back({std::min(xa, xb) - T, std::max(xa, xb) + T, v + k});
        }
        std::sort(items_.begin(), items_.end(),
                  [](const Item& a, const Item& b) { return a.lo < b.lo; });
        max_width_ = 0.0;
        for (const Item& item : items_) max_width_ = std::max(max_width_, item.hi - item.lo);
    }

    bool hit(const VectorXd& p) const {
        const double x = p[0];
        auto last = std::upper_bound(items_.begin(), items_.end(), x,
                                     [](double vx, const Item& item) { return vx < item.lo; });
        auto first = std::lower_bound(items_.begin(), last, x - max_width_,
                                      [](const Item& item, double vx) { return item.lo < vx; });
        for (auto cur = first; cur != last; ++cur) {
            if (cur->hi < x) continue;
            if (distance_to(cur->id, p) <= T_) return true;
        }
        return false;
    }

    double distance_to(std::size_t id, const VectorXd& p) const {
        const std::size_t v = e_.coords.size();
        if (id < v) return (p - e_.coords[id]).norm();
        const auto& edge = e_.edges[id - v];
        return point_segment_distance(p, e_.coords[edge.u], e_.coords[edge.v]);
    }

private:
    struct Item {
        double lo, hi;
        std::size_t id;
    };
    const EmbeddedComplex& e_;
    double T_;
    std::vector<Item> items_;
    double max_width_ = 0.0;
};

}  // namespace

TubeEstimate tube_volume(const EmbeddedComplex& e, double T, std::uint64_t samples,
                         std::uint64_t seed) {
    e.validate();
    if (!(T > 0.0)) throw PreconditionError("tube radius must be positive");
    if (samples < 1000) throw PreconditionError("tube_volume requires at least 1000 samples");
    if (e.coords.empty()) throw PreconditionError("embedding has no vertices");

    const int n = e.ambient_dim;
    VectorXd lo = e.coords[0], hi = e.coords[0];
    for (const auto& p : e.coords) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    lo.array() -= T;
    hi.array() += T;
    double box_volume = 1.0;
    for (int k = 0; k < n; ++k) {
        const double extent = hi[k] - lo[k];
        if (!(extent > 0.0) || !std::isfinite(extent))
            throw PreconditionError("degenerate bounding box");
        box_volume *= extent;
    }

    const HitTester tester(e, T);

    // Fixed substreams combined deterministically, independent of scheduling.
    constexpr std::uint64_t kStreams = 16;
    std::uint64_t hits = 0;
    VectorXd point(n);
    for (std::uint64_t s = 0; s < kStreams; ++s) {
        const std::uint64_t quota = samples / kStreams + (s < samples % kStreams ? 1 : 0);
        std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + s + 1);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (std::uint64_t i = 0; i < quota; ++i) {
            for (int k = 0; k < n; ++k) point[k] = lo[k] + uni(rng) * (hi[k] - lo[k]);
            if (tester.hit(point)) ++hits;
        }
    }

    TubeEstimate est;
    est.samples = samples;
    est.seed = seed;
    est.hits = hits;
    est.box_volume = box_volume;
    const double p_hat = static_cast<double>(hits) / static_cast<double>(samples);
    est.value = p_hat * box_volume;
    // Agresti-Coull keeps the reported interval honest near zero hits.
    const double n_adj = static_cast<double>(samples) + 4.0;
    const double p_adj = (static_cast<double>(hits) + 2.0) / n_adj;
    est.half_width = 1.96 * box_volume * std::sqrt(p_adj * (1.0 - p_adj) / n_adj);
    return est;
}

namespace {

// Orthonormal basis of the hyperplane orthogonal to the unit vector d.
std::vector<VectorXd> hyperplane_basis(const VectorXd& d) {
    const int n = static_cast<int>(d.size());
    std::vector<VectorXd> basis;
    basis.reserve(static_cast<std::size_t>(n) - 1);
    for (int k = 0; k < n && static_cast<int>(basis.size()) < n - 1; ++k) {
        VectorXd v = VectorXd::Zero(n);
        v[k] = 1.0;
        v -= v.dot(d) * d;
        for (const auto& b : basis) v -= v.dot(b) * b;
        const double norm = v.norm();
        if (norm < 1e-8) continue;
        basis.push_back(v / norm);
    }
    if (static_cast<int>(basis.size()) != n - 1)
        throw ConvergenceError("failed to complete hyperplane basis");
    return basis;
}

struct DirectionContext {
    const EmbeddedComplex& e;
    double T;
    bool exact;
    VectorXd direction;
    std::vector<double> proj;                 // per-vertex projection
    std::vector<std::pair<double, double>> simplex_intervals;  // inflated by T

    DirectionContext(const EmbeddedComplex& embedding, double thickness, bool exact_mode,
                     const VectorXd& d)
        : e(embedding), T(thickness), exact(exact_mode), direction(d) {
        proj.resize(e.coords.size());
        for (std::size_t i = 0; i < e.coords.size(); ++i) proj[i] = e.coords[i].dot(d);
        simplex_intervals.reserve(e.coords.size() + e.edges.size());
        for (std::size_t i = 0; i < e.coords.size(); ++i)
            simplex_intervals.push_back({proj[i] - T, proj[i] + T});
        for (const auto& edge : e.edges)
            simplex_intervals.push_back({std::min(proj[edge.u], proj[edge.v]) - T,
                                         std::max(proj[edge.u], proj[edge.v]) + T});
    }

    std::pair<double, double> offset_range() const {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& iv : simplex_intervals) {
            lo = std::min(lo, iv.first);
            hi = std::max(hi, iv.second);
        }
        return {lo, hi};
    }

    // (n-1)-measure of the hyperplane <x,d> = y intersected with the tube.
    double section(double y, std::uint64_t seed, const SliceOptions& options,
                   const std::vector<VectorXd>& basis) const {
        const int n = e.ambient_dim;
        if (exact) {
            double total = 0.0;
            for (std::size_t i = 0; i < e.coords.size(); ++i) {
                const double delta = std::fabs(proj[i] - y);
                if (delta >= T) continue;
                const double r = std::sqrt(T * T - delta * delta);
                total += std::pow(r, n - 1) * unit_ball_volume(n - 1);
            }
            return total;
        }
        // candidates: simplices whose inflated interval contains y
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i < simplex_intervals.size(); ++i)
            if (simplex_intervals[i].first <= y && y <= simplex_intervals[i].second)
                candidates.push_back(i);
        if (candidates.empty()) return 0.0;

        VectorXd blo(n - 1), bhi(n - 1);
        for (int k = 0; k < n - 1; ++k) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (const auto& p : e.coords) {
                const double x = p.dot(basis[static_cast<std::size_t>(k)]);
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
            blo[k] = lo - T;
            bhi[k] = hi + T;
        }
        double area_box = 1.0;
        for (int k = 0; k < n - 1; ++k) area_box *= bhi[k] - blo[k];

        const std::size_t v_count = e.coords.size();
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::uint64_t hits = 0;
        VectorXd point(n);
        for (std::uint64_t i = 0; i < options.section_samples; ++i) {
            point = y * direction;
            for (int k = 0; k < n - 1; ++k)
                point +=
                    (blo[k] + uni(rng) * (bhi[k] - blo[k])) * basis[static_cast<std::size_t>(k)];
            for (std::size_t id : candidates) {
                double dist;
                if (id < v_count) {
                    dist = (point - e.coords[id]).norm();
                } else {
                    const auto& edge = e.edges[id - v_count];
                    dist = point_segment_distance(point, e.coords[edge.u], e.coords[edge.v]);
                }
                if (dist <= T) {
                    ++hits;
                    break;
                }
            }
        }
        return area_box * static_cast<double>(hits) / static_cast<double>(options.section_samples);
    }
};

bool exact_sections_possible(const EmbeddedComplex& e, double T) {
    if (!e.edges.empty() || e.coords.size() > 1000) return false;
    for (std::size_t i = 0; i < e.coords.size(); ++i)
        for (std::size_t j = i + 1; j < e.coords.size(); ++j)
            if ((e.coords[i] - e.coords[j]).norm() <= 2.0 * T) return false;
    return true;
}

double evaluate_direction(const EmbeddedComplex& e, double T, const VectorXd& d,
                          std::uint64_t seed, const SliceOptions& options, bool exact) {
    const DirectionContext ctx(e, T, exact, d);
    const auto [lo, hi] = ctx.offset_range();
    std::vector<VectorXd> basis;
    if (!exact) basis = hyperplane_basis(d);
    double best = 0.0;
    for (int k = 0; k < options.offsets_per_direction; ++k) {
        const double y = lo + (static_cast<double>(k) + 0.5) * (hi - lo) /
                                  static_cast<double>(options.offsets_per_direction);
        best = std::max(best,
                        ctx.section(y, seed + static_cast<std::uint64_t>(k) * 7919u, options, basis));
    }
    return best;
}

}  // namespace

double max_cross_section(const EmbeddedComplex& e, double T, const Eigen::VectorXd& direction,
                         std::uint64_t seed, const SliceOptions& options) {
    e.validate();
    if (!(T > 0.0)) throw PreconditionError("thickness level must be positive");
    if (direction.size() != e.ambient_dim)
        throw PreconditionError("direction dimension mismatch");
    const double norm = direction.norm();
    if (std::fabs(norm - 1.0) > 1e-9)
        throw PreconditionError("direction must be a unit vector");
    return evaluate_direction(e, T, direction / norm, seed, options,
                              exact_sections_possible(e, T));
}

SliceResult slice_search(const EmbeddedComplex& e, double T, int direction_budget,
                         std::uint64_t seed, const SliceOptions& options) {
    e.validate();
    if (!(T > 0.0)) throw PreconditionError("thickness level must be positive");
    if (direction_budget < 1) throw PreconditionError("direction budget must be >= 1");
    const int n = e.ambient_dim;
    const bool exact = exact_sections_possible(e, T);

    std::vector<VectorXd> candidates;
    for (int k = 0; k < n && static_cast<int>(candidates.size()) < direction_budget; ++k) {
        VectorXd axis = VectorXd::Zero(n);
        axis[k] = 1.0;
        candidates.push_back(axis);
    }
    std::uint64_t halton_index = 1 + (seed % 4099);
    while (static_cast<int>(candidates.size()) < direction_budget) {
        VectorXd v(n);
        for (int k = 0; k < n; ++k)
            v[k] = inverse_normal_cdf(halton(halton_index, kPrimes[static_cast<std::size_t>(k)]));
        ++halton_index;
        const double norm = v.norm();
        if (norm < 1e-9) continue;
        candidates.push_back(v / norm);
    }

    SliceResult result;
    result.method = exact ? "exact" : "monte-carlo";
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double value =
            evaluate_direction(e, T, candidates[i], seed ^ (0x51ed2701u + i), options, exact);
        if (value < best) {
            best = value;
            result.direction = candidates[i];
        }
    }

    std::mt19937_64 rng(seed ^ 0xabcdef1234567ull);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double sigma = 0.25;
    for (int round = 0; round < options.refinement_rounds; ++round) {
        VectorXd v = result.direction;
        for (int k = 0; k < n; ++k) v[k] += sigma * gauss(rng);
        const double norm = v.norm();
        if (norm > 1e-9) {
            v /= norm;
            const double value = evaluate_direction(
                e, T, v, seed ^ (0x7a3f9b11u + static_cast<std::uint64_t>(round)), options, exact);
            if (value < best) {
                best = value;
                result.direction = v;
            }
        }
        if (round % 3 == 2) sigma *= 0.5;
    }

    result.max_cross_section = best;
    const DirectionContext ctx(e, T, exact, result.direction);
    const auto [lo, hi] = ctx.offset_range();
    for (int k = 0; k < options.offsets_per_direction; ++k)
        result.offsets.push_back(lo + (static_cast<double>(k) + 0.5) * (hi - lo) /
                                          static_cast<double>(options.offsets_per_direction));
    return result;
}

int fiber_complexity(const EmbeddedComplex& e, const Eigen::VectorXd& direction, double T,
                     int offsets) {
    e.validate();
    if (direction.size() != e.ambient_dim)
        throw PreconditionError("direction dimension mismatch");
    if (std::fabs(direction.norm() - 1.0) > 1e-9)
        throw PreconditionError("direction must be a unit vector");
    if (offsets < 1) throw PreconditionError("offset grid must be nonempty");
    if (!(T > 0.0)) throw PreconditionError("thickness level must be positive");

    const DirectionContext ctx(e, T, false, direction / direction.norm());
    const auto [lo, hi] = ctx.offset_range();
    int best = 0;
    for (int k = 0; k < offsets; ++k) {
        const double y =
            lo + (static_cast<double>(k) + 0.5) * (hi - lo) / static_cast<double>(offsets);
        int count = 0;
        for (const auto& iv : ctx.simplex_intervals)
            if (iv.first <= y && y <= iv.second) ++count;
        best = std::max(best, count);
    }
    return best;
}

GromovGuthReport gromov_guth_evaluate(double lambda1, double v_hyp, double T, double v_tube,
                                      int n, double cn) {
    if (n < 7)
        throw PreconditionError("the inequality hypothesis requires ambient dimension n >= 7");
    if (!(lambda1 > 0.0) || !(v_hyp > 0.0) || !(T > 0.0) || !(v_tube >= 0.0) || !(cn > 0.0))
        throw PreconditionError("inequality inputs must be positive");
    GromovGuthReport r;
    r.lambda1 = lambda1;
    r.v_hyp = v_hyp;
    r.thickness = T;
    r.v_tube = v_tube;
    r.cn = cn;
    r.n = n;
    const double exponent = static_cast<double>(n) / static_cast<double>(n - 1);
    r.lhs = std::pow(lambda1 * v_hyp, exponent);
    r.rhs = cn * std::pow(T, -n) * v_tube;
    r.holds = r.lhs <= r.rhs * (1.0 + 1e-12);
    return r;
}

// ---------------------------------------------------------------------------
// Layered thick embedding
// ---------------------------------------------------------------------------

namespace {

struct PlacementState {
    const spectral::WeightedGraph& graph;
    EmbeddedComplex result;
    std::vector<char> placed;
    std::vector<std::vector<std::uint32_t>> adjacency;
    std::vector<std::vector<std::uint32_t>> incident_edges;  // into result.edges
    ThickEmbedOptions options;

    VertexGrid grid{5.0};
    double max_edge_len = 0.0;
    bool use_grid = false;

    PlacementState(const spectral::WeightedGraph& g, int dim, const ThickEmbedOptions& opt)
        : graph(g), options(opt) {
        result.ambient_dim = dim;
        result.thickness = 1.0;
        result.coords.assign(g.vertex_count, VectorXd());
        placed.assign(g.vertex_count, 0);
        adjacency.assign(g.vertex_count, {});
        incident_edges.assign(g.vertex_count, {});
        for (const auto& e : g.edges) {
            adjacency[e.u].push_back(e.v);
            adjacency[e.v].push_back(e.u);
        }
        use_grid = g.vertex_count + g.edges.size() > 6000;
    }

    void commit_vertex(std::uint32_t v, const VectorXd& pos) {
        result.coords[v] = pos;
        placed[v] = 1;
        if (use_grid) grid.insert(v, pos);
    }

    void commit_edge(std::uint32_t u, std::uint32_t v) {
        incident_edges[u].push_back(static_cast<std::uint32_t>(result.edges.size()));
        incident_edges[v].push_back(static_cast<std::uint32_t>(result.edges.size()));
        result.edges.push_back({u, v});
        max_edge_len = std::max(max_edge_len, (result.coords[u] - result.coords[v]).norm());
    }

    bool candidate_ok(std::uint32_t v, const VectorXd& pos) const {
        std::vector<std::uint32_t> placed_neighbors;
        for (std::uint32_t w : adjacency[v])
            if (placed[w]) placed_neighbors.push_back(w);

        double new_edge_max = 0.0;
        for (std::uint32_t nb : placed_neighbors)
            new_edge_max = std::max(new_edge_max, (pos - result.coords[nb]).norm());

        // placed vertex `other` against the new vertex and the new edges
        auto vertex_conflict = [&](std::uint32_t other) {
            const VectorXd& q = result.coords[other];
            if ((q - pos).norm() <= options.clearance) return true;
            for (std::uint32_t nb : placed_neighbors) {
                if (other == nb) continue;  // incident at nb
                if (point_segment_distance(q, pos, result.coords[nb]) <= options.clearance)
                    return true;
            }
            return false;
        };
        // placed edge against the new vertex and the new edges
        auto edge_conflict = [&](const EmbeddedComplex::Edge& edge) {
            const VectorXd& a = result.coords[edge.u];
            const VectorXd& b = result.coords[edge.v];
            if (point_segment_distance(pos, a, b) <= options.clearance) return true;
            for (std::uint32_t nb : placed_neighbors) {
                if (edge.u == nb || edge.v == nb) continue;  // shares the endpoint nb
                if (segment_segment_distance(pos, result.coords[nb], a, b) <= options.clearance)
                    return true;
            }
            return false;
        };

        if (use_grid) {
            // every relevant simplex has an endpoint within this radius of one
            // of the new simplex endpoints
            const double radius =
                options.clearance + 0.5 * max_edge_len + 0.5 * new_edge_max + 1.0;
            std::vector<std::uint32_t> nearby;
            grid.for_each_near(pos, radius, [&](std::uint32_t u) { nearby.push_back(u); });
            for (std::uint32_t nb : placed_neighbors)
                grid.for_each_near(result.coords[nb], radius,
                                   [&](std::uint32_t u) { nearby.push_back(u); });
            std::sort(nearby.begin(), nearby.end());
            nearby.erase(std::unique(nearby.begin(), nearby.end()), nearby.end());
            std::unordered_set<std::uint32_t> seen_edges;
            for (std::uint32_t u : nearby) {
                if (vertex_conflict(u)) return false;
                for (std::uint32_t k : incident_edges[u])
                    if (seen_edges.insert(k).second && edge_conflict(result.edges[k]))
                        return false;
            }
        } else {
            for (std::uint32_t u = 0; u < graph.vertex_count; ++u) {
                if (!placed[u] || u == v) continue;
                if (vertex_conflict(u)) return false;
            }
            for (const auto& edge : result.edges)
                if (edge_conflict(edge)) return false;
        }

        // triangles closed by the new edges
        for (std::size_t i = 0; i < placed_neighbors.size(); ++i)
            for (std::size_t j = i + 1; j < placed_neighbors.size(); ++j) {
                const std::uint32_t a = placed_neighbors[i], b = placed_neighbors[j];
                if (std::find(adjacency[a].begin(), adjacency[a].end(), b) == adjacency[a].end())
                    continue;
                if (triangle_inradius(pos, result.coords[a], result.coords[b]) <=
                    options.triangle_inradius)
                    return false;
            }
        return true;
    }
};

// Residual-lattice offsets of Chebyshev norm == shell, nearest first.
std::vector<std::vector<int>> shell_offsets(int dims, int shell, std::size_t cap) {
    std::vector<std::vector<int>> out;
    const int effective_dims = std::min(dims, 8);
    std::vector<int> offset(static_cast<std::size_t>(effective_dims), -shell);
    while (true) {
        int cheb = 0;
        for (int o : offset) cheb = std::max(cheb, std::abs(o));
        if (cheb == shell) out.push_back(offset);
        int k = 0;
        while (k < effective_dims && offset[static_cast<std::size_t>(k)] == shell) {
            offset[static_cast<std::size_t>(k)] = -shell;
            ++k;
        }
        if (k == effective_dims) break;
        ++offset[static_cast<std::size_t>(k)];
        if (out.size() > 4 * cap && shell > 1) break;  // bound enumeration in high dims
    }
    std::sort(out.begin(), out.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
        long na = 0, nb = 0;
        for (int x : a) na += static_cast<long>(x) * x;
        for (int x : b) nb += static_cast<long>(x) * x;
        if (na != nb) return na < nb;
        return a < b;
    });
    if (out.size() > cap) out.resize(cap);
    return out;
}

}  // namespace

EmbeddedComplex thick_embed(const spectral::WeightedGraph& g, int ambient_dim,
                            const std::vector<std::vector<std::uint32_t>>& base_cycles,
                            const ThickEmbedOptions& options) {
    g.validate();
    if (g.vertex_count == 0) throw PreconditionError("empty graph");
    if (!g.connected()) throw PreconditionError("thick_embed requires a connected graph");
    const int cycle_count = static_cast<int>(base_cycles.size());
    if (ambient_dim < std::max(2, 2 * cycle_count))
        throw PreconditionError("ambient dimension must be >= 2 * (number of base cycles)");

    std::set<std::pair<std::uint32_t, std::uint32_t>> edge_set;
    for (const auto& e : g.edges) edge_set.insert(std::minmax(e.u, e.v));
    for (const auto& cycle : base_cycles) {
        if (cycle.size() < 3) throw PreconditionError("base cycle must have length >= 3");
        std::set<std::uint32_t> distinct(cycle.begin(), cycle.end());
        if (distinct.size() != cycle.size())
            throw PreconditionError("base cycle repeats a vertex");
        for (std::size_t i = 0; i < cycle.size(); ++i) {
            const std::uint32_t a = cycle[i], b = cycle[(i + 1) % cycle.size()];
            if (a >= g.vertex_count || b >= g.vertex_count)
                throw PreconditionError("base cycle vertex out of range");
            if (!edge_set.count(std::minmax(a, b)))
                throw PreconditionError("base cycle uses a non-edge of the graph");
        }
    }
    std::optional<std::uint32_t> basepoint;
    for (std::size_t i = 0; i < base_cycles.size(); ++i)
        for (std::size_t j = i + 1; j < base_cycles.size(); ++j) {
            std::set<std::uint32_t> a(base_cycles[i].begin(), base_cycles[i].end());
            std::vector<std::uint32_t> common;
            for (std::uint32_t v : base_cycles[j])
                if (a.count(v)) common.push_back(v);
            if (common.size() > 1)
                throw PreconditionError("base cycles share more than one vertex");
            if (common.size() == 1) {
                if (basepoint && *basepoint != common[0])
                    throw PreconditionError("base cycles form a chain, not a bouquet");
                basepoint = common[0];
            }
        }

    std::set<std::uint32_t> base_vertices;
    for (const auto& cycle : base_cycles) base_vertices.insert(cycle.begin(), cycle.end());
    const bool has_extra_vertices =
        base_vertices.size() < g.vertex_count || base_cycles.empty();
    const int residual_dims = ambient_dim - 2 * cycle_count;
    if (has_extra_vertices && g.vertex_count > 1 && residual_dims < 2)
        throw PreconditionError("insufficient ambient dimension for the layered extension");

    // Triangles over a short base can never clear the joint-tube condition
    // (the inradius over a base b tops out at b/2), so a graph containing
    // triangles gets a wider grid.
    ThickEmbedOptions scaled = options;
    {
        std::vector<std::set<std::uint32_t>> adj(g.vertex_count);
        for (const auto& e : g.edges) {
            adj[e.u].insert(e.v);
            adj[e.v].insert(e.u);
        }
        bool has_triangle = false;
        for (const auto& e : g.edges) {
            for (std::uint32_t w : adj[e.u])
                if (w != e.v && adj[e.v].count(w)) {
                    has_triangle = true;
                    break;
                }
            if (has_triangle) break;
        }
        if (has_triangle)
            scaled.spacing = std::max(options.spacing,
                                      2.0 * std::numbers::sqrt3 * options.triangle_inradius * 1.1);
    }

    PlacementState state(g, ambient_dim, scaled);

    // --- base cycles on circles ---------------------------------------------
    for (int k = 0; k < cycle_count; ++k) {
        const auto& cycle = base_cycles[static_cast<std::size_t>(k)];
        const double L = static_cast<double>(cycle.size());
        const double x = std::numbers::pi / L;
        const double chord_per_scale = (L / std::numbers::pi) * std::sin(x);
        // Adjacent circle vertices are disjoint simplices (chord > clearance);
        // 3-cycles additionally need a tube-free core (inradius above the
        // triangle threshold).
        double needed_chord = scaled.clearance * 1.05;
        if (cycle.size() == 3)
            needed_chord = std::max(needed_chord,
                                    2.0 * std::numbers::sqrt3 * scaled.triangle_inradius * 1.05);
        const double scale = std::max(scaled.spacing, needed_chord / chord_per_scale);
        const double radius = scale * L / (2.0 * std::numbers::pi);

        const int ax = 2 * k, ay = 2 * k + 1;
        const bool through_origin =
            basepoint.has_value() &&
            std::find(cycle.begin(), cycle.end(), *basepoint) != cycle.end();
        // Bouquet circles pass through the shared basepoint at the origin;
        // disjoint circles are pushed out along their own plane axis.
        VectorXd center = VectorXd::Zero(ambient_dim);
        center[ax] = through_origin ? radius : radius + scaled.spacing;

        std::size_t start = 0;
        if (through_origin)
            start = static_cast<std::size_t>(
                std::find(cycle.begin(), cycle.end(), *basepoint) - cycle.begin());
        for (std::size_t j = 0; j < cycle.size(); ++j) {
            const std::uint32_t v = cycle[(start + j) % cycle.size()];
            if (state.placed[v]) {
                if (basepoint && v == *basepoint) continue;
                throw PreconditionError("base cycles overlap outside the basepoint");
            }
            const double theta =
                std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) / L;
            VectorXd pos = center;
            pos[ax] += radius * std::cos(theta);
            pos[ay] += radius * std::sin(theta);
            state.commit_vertex(v, pos);
        }
    }
    if (cycle_count == 0) {
        state.commit_vertex(0, VectorXd::Zero(ambient_dim));
        base_vertices.insert(0);
    }

    std::set<std::pair<std::uint32_t, std::uint32_t>> committed;
    for (const auto& e : g.edges) {
        if (state.placed[e.u] && state.placed[e.v]) {
            state.commit_edge(e.u, e.v);
            committed.insert(std::minmax(e.u, e.v));
        }
    }

    // --- breadth-first layers on the residual grid ---------------------------
    std::queue<std::uint32_t> frontier;
    const std::uint32_t no_parent = g.vertex_count;
    std::vector<std::uint32_t> parent(g.vertex_count, no_parent);
    std::vector<int> layer(g.vertex_count, -1);
    for (std::uint32_t v : base_vertices) {
        layer[v] = 0;
        frontier.push(v);
    }
    std::vector<std::uint32_t> order;
    while (!frontier.empty()) {
        const std::uint32_t v = frontier.front();
        frontier.pop();
        for (std::uint32_t w : state.adjacency[v]) {
            if (layer[w] >= 0) continue;
            layer[w] = layer[v] + 1;
            parent[w] = v;
            order.push_back(w);
            frontier.push(w);
        }
    }

    const int res_lo = 2 * cycle_count;

    for (std::uint32_t v : order) {
        const std::uint32_t par = parent[v];
        const VectorXd& base_pos = state.result.coords[par];

        std::vector<VectorXd> candidates;
        if (state.adjacency[par].size() <= 2 && parent[par] != no_parent) {
            // continue a degree-2 chain in a straight line
            const VectorXd dir = state.result.coords[par] - state.result.coords[parent[par]];
            const double norm = dir.norm();
            if (norm > 1e-9) candidates.push_back(base_pos + scaled.spacing * (dir / norm));
        } else if (state.adjacency[par].size() <= 2 && layer[par] == 0 && cycle_count == 0) {
            VectorXd step = VectorXd::Zero(ambient_dim);
            step[res_lo] = scaled.spacing;
            candidates.push_back(base_pos + step);
        }

        bool done = false;
        for (const auto& c : candidates) {
            if (state.candidate_ok(v, c)) {
                state.commit_vertex(v, c);
                done = true;
                break;
            }
        }
        for (int shell = 1; shell <= scaled.max_shell && !done; ++shell) {
            for (const auto& offset : shell_offsets(residual_dims, shell, 2000)) {
                VectorXd c = base_pos;
                for (std::size_t k = 0; k < offset.size(); ++k)
                    c[res_lo + static_cast<int>(k)] += scaled.spacing * offset[k];
                if (state.candidate_ok(v, c)) {
                    state.commit_vertex(v, c);
                    done = true;
                    break;
                }
            }
        }
        if (!done)
            throw ConvergenceError("thick_embed could not place vertex " + std::to_string(v) +
                                   " within the search budget");
        for (std::uint32_t w : state.adjacency[v]) {
            if (!state.placed[w]) continue;
            const auto key = std::minmax(v, w);
            if (committed.insert(key).second) state.commit_edge(key.first, key.second);
        }
    }

    const ThicknessReport check = verify_thickness(state.result, 1.0);
    if (!check.ok)
        throw ConvergenceError("thick_embed construction failed verification: " + check.witness);
    return state.result;
}

}  // namespace orbi::embedding
