#include "orbi/hypgeom.hpp"
#include "orbi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace orbi::hypgeom {

namespace {

constexpr double kSheetTolerance = 1e-10;

double sinh_minus_x(double x) {
    // sinh(x) - x with the cancellation removed for small x.
    if (std::fabs(x) < 0.25) {
        const double x2 = x * x;
        double term = x * x2 / 6.0;
        double sum = term;
        for (int k = 2; k <= 8; ++k) {
            term *= x2 / static_cast<double>((2 * k) * (2 * k + 1));
            sum += term;
        }
        return sum;
    }
    return std::sinh(x) - x;
}

// Halton low-discrepancy sequence value, radical inverse in the given base.
double halton(std::uint64_t index, std::uint32_t base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

// Radius of a uniform-volume sample inside a ball of radius R:
// invert (sinh(2r) - 2r) / (sinh(2R) - 2R) = u by bisection.
double radius_from_uniform(double u, double R) {
    const double target = u * sinh_minus_x(2.0 * R);
    double lo = 0.0, hi = R;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sinh_minus_x(2.0 * mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

HPoint HPoint::from_spatial(double x1, double x2, double x3) {
    HPoint p;
    p.x1 = x1;
    p.x2 = x2;
    p.x3 = x3;
    p.x0 = std::sqrt(1.0 + x1 * x1 + x2 * x2 + x3 * x3);
    return p;
}

HPoint HPoint::from_coords(double x0, double x1, double x2, double x3) {
    if (x0 < 1.0 - 1e-6)
        throw PreconditionError("hyperboloid point must lie on the upper sheet (x0 >= 1)");
    const double q = x0 * x0 - x1 * x1 - x2 * x2 - x3 * x3;
    if (!(q > 0.0) || std::fabs(q - 1.0) > 1e-6)
        throw PreconditionError("coordinates are not close to the unit hyperboloid");
    const double s = 1.0 / std::sqrt(q);
    HPoint p{x0 * s, x1 * s, x2 * s, x3 * s};
    return p;
}

HPoint HPoint::from_poincare(const std::array<double, 3>& b) {
    const double n2 = b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
    if (!(n2 < 1.0)) throw PreconditionError("Poincare ball point must have |b| < 1");
    const double denom = 1.0 - n2;
    return {(1.0 + n2) / denom, 2.0 * b[0] / denom, 2.0 * b[1] / denom, 2.0 * b[2] / denom};
}

std::array<double, 3> HPoint::to_poincare() const {
    const double denom = 1.0 + x0;
    return {x1 / denom, x2 / denom, x3 / denom};
}

double minkowski_dot(const HPoint& p, const HPoint& q) {
    return -p.x0 * q.x0 + p.x1 * q.x1 + p.x2 * q.x2 + p.x3 * q.x3;
}

double hyp_distance(const HPoint& p, const HPoint& q) {
    // <p-q, p-q> = 2(cosh d - 1) = 4 sinh^2(d/2); differences avoid the
    // cancellation of computing -<p,q> - 1 directly.
    const double d0 = p.x0 - q.x0, d1 = p.x1 - q.x1, d2 = p.x2 - q.x2, d3 = p.x3 - q.x3;
    const double s = -d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3;
    if (s < -kSheetTolerance)
        throw PreconditionError("points do not satisfy the hyperboloid constraint");
    const double clamped = std::max(s, 0.0);
    return 2.0 * std::asinh(0.5 * std::sqrt(clamped));
}

HPoint geodesic_point(const HPoint& p, const std::array<double, 4>& u, double r) {
    const double ch = std::cosh(r), sh = std::sinh(r);
    return {p.x0 * ch + u[0] * sh, p.x1 * ch + u[1] * sh, p.x2 * ch + u[2] * sh,
            p.x3 * ch + u[3] * sh};
}

double ball_volume(double r) {
    if (!(r > 0.0)) throw PreconditionError("ball radius must be positive");
    return std::numbers::pi * sinh_minus_x(2.0 * r);
}

double ball_volume_ratio(double epsilon) {
    if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
    return sinh_minus_x(5.0 * epsilon) / sinh_minus_x(epsilon);
}

void BallDomain::validate() const {
    if (!(radius > 0.0)) throw PreconditionError("domain radius must be positive");
}

bool BallDomain::contains(const HPoint& p) const {
    return hyp_distance(center, p) <= radius + 1e-12;
}

BallSampler::BallSampler(const BallDomain& domain, std::uint64_t seed)
    : domain_(domain), index_(1) {
    domain_.validate();
    // Orthonormal tangent frame at the center (Minkowski Gram-Schmidt).
    const HPoint& c = domain_.center;
    std::array<std::array<double, 4>, 3> basis = {{{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}};
    auto mdot = [](const std::array<double, 4>& a, const std::array<double, 4>& b) {
        return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
    };
    const std::array<double, 4> cv = {c.x0, c.x1, c.x2, c.x3};
    for (int i = 0; i < 3; ++i) {
        auto v = basis[static_cast<std::size_t>(i)];
        // project onto the tangent space at c: v + <v,c> c
        const double vc = mdot(v, cv);
        for (int k = 0; k < 4; ++k) v[static_cast<std::size_t>(k)] += vc * cv[static_cast<std::size_t>(k)];
        for (int j = 0; j < i; ++j) {
            const double proj = mdot(v, tangent_[j]);
            for (int k = 0; k < 4; ++k)
                v[static_cast<std::size_t>(k)] -= proj * tangent_[j][static_cast<std::size_t>(k)];
        }
        const double norm = std::sqrt(mdot(v, v));
        for (double& x : v) x /= norm;
        tangent_[i] = v;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (double& s : shift_) s = uni(rng);
    index_ = 1 + (seed % 9973);
}

HPoint BallSampler::next() {
    const double u0 = std::fmod(halton(index_, 2) + shift_[0], 1.0);
    const double u1 = std::fmod(halton(index_, 3) + shift_[1], 1.0);
    const double u2 = std::fmod(halton(index_, 5) + shift_[2], 1.0);
    ++index_;
    const double r = radius_from_uniform(u0, domain_.radius);
    const double z = 2.0 * u1 - 1.0;
    const double phi = 2.0 * std::numbers::pi * u2;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const std::array<double, 3> dir = {rho * std::cos(phi), rho * std::sin(phi), z};
    std::array<double, 4> u = {0, 0, 0, 0};
    for (int k = 0; k < 4; ++k)
        u[static_cast<std::size_t>(k)] = dir[0] * tangent_[0][static_cast<std::size_t>(k)] +
                                         dir[1] * tangent_[1][static_cast<std::size_t>(k)] +
                                         dir[2] * tangent_[2][static_cast<std::size_t>(k)];
    return geodesic_point(domain_.center, u, r);
}

NetResult epsilon_net(const BallDomain& domain, double epsilon, const std::vector<HPoint>& seeds,
                      std::uint64_t seed_rng, const NetOptions& options) {
    domain.validate();
    if (!(epsilon > 0.0)) throw PreconditionError("net epsilon must be positive");

    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (!domain.contains(seeds[i]))
            throw PreconditionError("seed point " + std::to_string(i) + " lies outside the domain");
        for (std::size_t j = i + 1; j < seeds.size(); ++j)
            if (hyp_distance(seeds[i], seeds[j]) < epsilon)
                throw PreconditionError("seed points " + std::to_string(i) + " and " +
                                        std::to_string(j) + " violate the epsilon separation");
    }

    NetResult result;
    result.epsilon = epsilon;
    result.points = seeds;
    for (std::size_t i = 0; i < seeds.size(); ++i) result.seed_indices.push_back(i);

    auto admissible = [&](const HPoint& p) {
        for (const HPoint& q : result.points)
            if (hyp_distance(p, q) < epsilon) return false;
        return true;
    };

    BallSampler sampler(domain, seed_rng);
    std::uint64_t consecutive_rejections = 0;
    while (consecutive_rejections < options.rejection_budget) {
        const HPoint candidate = sampler.next();
        ++result.candidates_tried;
        if (admissible(candidate)) {
            result.points.push_back(candidate);
            consecutive_rejections = 0;
        } else {
            ++consecutive_rejections;
        }
    }

    // Final systematic pass over a fresh deterministic batch; any admissible
    // point found resets the greedy stage.
    bool inserted = true;
    while (inserted) {
        inserted = false;
        BallSampler sweep(domain, seed_rng ^ 0xd1b54a32d192ed03ull);
        for (std::uint64_t i = 0; i < options.sweep_candidates; ++i) {
            const HPoint candidate = sweep.next();
            ++result.candidates_tried;
            if (admissible(candidate)) {
                result.points.push_back(candidate);
                inserted = true;
            }
        }
    }
    result.declared_maximal = true;
    return result;
}

// ---------------------------------------------------------------------------
// Delaunay triangulation (Bowyer-Watson in the Poincare ball)
// ---------------------------------------------------------------------------

namespace {

using Vec3 = std::array<long double, 3>;

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
long double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

long double orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    return dot(sub(b, a), cross(sub(c, a), sub(d, a)));
}

// > 0 when e lies strictly inside the circumsphere of the positively oriented
// tetrahedron (a, b, c, d).
long double insphere(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, const Vec3& e) {
    auto row = [&](const Vec3& p) {
        const Vec3 r = sub(p, e);
        return std::array<long double, 4>{r[0], r[1], r[2], dot(r, r)};
    };
    const auto ra = row(a), rb = row(b), rc = row(c), rd = row(d);
    auto det3 = [](long double m00, long double m01, long double m02, long double m10,
                   long double m11, long double m12, long double m20, long double m21,
                   long double m22) {
        return m00 * (m11 * m22 - m12 * m21) - m01 * (m10 * m22 - m12 * m20) +
               m02 * (m10 * m21 - m11 * m20);
    };
    long double det = 0.0L;
    const std::array<std::array<long double, 4>, 4> rows = {ra, rb, rc, rd};
    for (int i = 0; i < 4; ++i) {
        std::array<std::array<long double, 3>, 3> minor{};
        int mi = 0;
        for (int r = 0; r < 4; ++r) {
            if (r == i) continue;
            minor[static_cast<std::size_t>(mi)] = {rows[static_cast<std::size_t>(r)][0],
                                                   rows[static_cast<std::size_t>(r)][1],
                                                   rows[static_cast<std::size_t>(r)][2]};
            ++mi;
        }
        const long double m = det3(minor[0][0], minor[0][1], minor[0][2], minor[1][0], minor[1][1],
                                   minor[1][2], minor[2][0], minor[2][1], minor[2][2]);
        det += ((i % 2 == 0) ? 1.0L : -1.0L) * rows[static_cast<std::size_t>(i)][3] * m;
    }
    // det as computed equals the standard insphere determinant up to sign
    // conventions; positive orientation is handled by the caller.
    return det;
}

struct Tetra {
    std::array<int, 4> v;  // indices into the point array (negatives = super vertices)
    bool alive = true;
};

struct DegenerateGeometry {};  // internal signal: jitter and retry

std::vector<std::array<int, 4>> bowyer_watson(const std::vector<Vec3>& pts) {
    const std::size_t n = pts.size();
    // Super-tetrahedron comfortably containing the unit ball.
    const long double s = 64.0L;
    const std::vector<Vec3> super = {
        {0.0L, 0.0L, 3.0L * s}, {2.0L * s, 0.0L, -s}, {-s, 1.7L * s, -s}, {-s, -1.7L * s, -s}};
    auto point = [&](int idx) -> const Vec3& {
        return idx >= 0 ? pts[static_cast<std::size_t>(idx)]
                        : super[static_cast<std::size_t>(-idx - 1)];
    };

    std::vector<Tetra> tets;
    tets.push_back({{-1, -2, -3, -4}, true});
    // keep positive orientation
    if (orient3d(point(-1), point(-2), point(-3), point(-4)) < 0.0L)
        std::swap(tets[0].v[0], tets[0].v[1]);

    const long double eps_orient = 1e-24L;
    const long double eps_insphere = 1e-22L;

    for (std::size_t pi = 0; pi < n; ++pi) {
        const Vec3& p = pts[pi];
        std::vector<std::size_t> bad;
        for (std::size_t t = 0; t < tets.size(); ++t) {
            if (!tets[t].alive) continue;
            const auto& v = tets[t].v;
            Vec3 a = point(v[0]), b = point(v[1]), c = point(v[2]), d = point(v[3]);
            long double sign = 1.0L;
            if (orient3d(a, b, c, d) < 0.0L) {
                std::swap(a, b);
                sign = 1.0L;
            }
            const long double ins = insphere(a, b, c, d, p);
            if (std::fabs(ins) < eps_insphere) throw DegenerateGeometry{};
            if (sign * ins > 0.0L) bad.push_back(t);
        }
        if (bad.empty()) throw DegenerateGeometry{};  // point on/outside all spheres: degenerate

        // Boundary facets of the cavity: faces used by exactly one bad tet.
        struct Facet {
            std::array<int, 3> key;    // sorted
            std::array<int, 3> order;  // as seen from the bad tet
            int count = 0;
        };
        std::vector<Facet> facets;
        auto add_face = [&](int a, int b, int c) {
            std::array<int, 3> key = {a, b, c};
            std::sort(key.begin(), key.end());
            for (auto& f : facets)
                if (f.key == key) {
                    ++f.count;
                    return;
                }
            facets.push_back({key, {a, b, c}, 1});
        };
        for (std::size_t t : bad) {
            const auto& v = tets[t].v;
            add_face(v[0], v[1], v[2]);
            add_face(v[0], v[1], v[3]);
            add_face(v[0], v[2], v[3]);
            add_face(v[1], v[2], v[3]);
            tets[t].alive = false;
        }
        for (const auto& f : facets) {
            if (f.count != 1) continue;
            Tetra nt{{f.order[0], f.order[1], f.order[2], static_cast<int>(pi)}, true};
            const long double o = orient3d(point(nt.v[0]), point(nt.v[1]), point(nt.v[2]),
                                           point(nt.v[3]));
            if (std::fabs(o) < eps_orient) throw DegenerateGeometry{};
            if (o < 0.0L) std::swap(nt.v[0], nt.v[1]);
            tets.push_back(nt);
        }
    }

    std::vector<std::array<int, 4>> result;
    for (const auto& t : tets) {
        if (!t.alive) continue;
        if (t.v[0] < 0 || t.v[1] < 0 || t.v[2] < 0 || t.v[3] < 0) continue;
        result.push_back(t.v);
    }
    return result;
}

}  // namespace

DelaunayResult delaunay(const std::vector<HPoint>& points, const DelaunayOptions& options) {
    if (points.size() < 4)
        throw PreconditionError("delaunay requires at least 4 points");

    std::vector<Vec3> base(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto b = points[i].to_poincare();
        base[i] = {b[0], b[1], b[2]};
    }

    // Coplanarity of the whole set is a degenerate input, not a jitter case.
    bool non_coplanar = false;
    for (std::size_t i = 3; i < base.size() && !non_coplanar; ++i)
        if (std::fabs(orient3d(base[0], base[1], base[2], base[i])) > 1e-18L) non_coplanar = true;
    // also try other triples in case the first three are collinear
    if (!non_coplanar) {
        for (std::size_t i = 1; i + 2 < base.size() && !non_coplanar; ++i)
            for (std::size_t j = i + 1; j + 1 < base.size() && !non_coplanar; ++j)
                for (std::size_t k = j + 1; k < base.size() && !non_coplanar; ++k)
                    if (std::fabs(orient3d(base[0], base[i], base[j], base[k])) > 1e-18L)
                        non_coplanar = true;
    }
    if (!non_coplanar)
        throw PreconditionError("delaunay input is coplanar (degenerate)");

    DelaunayResult out;
    std::mt19937_64 rng(options.jitter_seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<Vec3> pts = base;
    for (int round = 0; round <= options.max_jitter_rounds; ++round) {
        try {
            const auto tets = bowyer_watson(pts);
            if (tets.empty()) throw DegenerateGeometry{};
            std::vector<simplicial::Simplex> simplices;
            simplices.reserve(tets.size());
            for (const auto& t : tets)
                simplices.push_back({static_cast<simplicial::VertexId>(t[0]),
                                     static_cast<simplicial::VertexId>(t[1]),
                                     static_cast<simplicial::VertexId>(t[2]),
                                     static_cast<simplicial::VertexId>(t[3])});
            out.complex = simplicial::SimplicialComplex3::from_simplices(
                static_cast<std::uint32_t>(points.size()), simplices);
            out.complex.coordinates.reserve(points.size());
            for (const auto& p : points)
                out.complex.coordinates.push_back({p.x0, p.x1, p.x2, p.x3});
            return out;
        } catch (const DegenerateGeometry&) {
            // cospherical or touching configuration: jitter and retry
            out.jitter_applied = true;
            for (std::size_t i = 0; i < pts.size(); ++i)
                for (int k = 0; k < 3; ++k)
                    pts[i][static_cast<std::size_t>(k)] =
                        base[i][static_cast<std::size_t>(k)] +
                        static_cast<long double>(options.jitter_magnitude * uni(rng));
        }
    }
    throw ConvergenceError("delaunay could not resolve degeneracies by jitter");
}

std::pair<double, double> net_cardinality_and_degree_bounds(std::uint32_t m, double volume,
                                                            double epsilon) {
    if (m < 1) throw PreconditionError("finite-subgroup order bound m must be >= 1");
    if (!(volume > 0.0)) throw PreconditionError("volume must be positive");
    if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
    const double vertex_bound = static_cast<double>(m) * volume / ball_volume(epsilon / 2.0);
    return {vertex_bound, ball_volume_ratio(epsilon)};
}

}  // namespace orbi::hypgeom
