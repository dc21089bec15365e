#include "orbi/spectral.hpp"
#include "orbi/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace orbi::spectral {

void WeightedGraph::validate() const {
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (const Edge& e : edges) {
        if (e.u >= vertex_count || e.v >= vertex_count)
            throw PreconditionError("edge endpoint out of range");
        if (e.u == e.v) throw PreconditionError("self-loops are not allowed");
        if (!(e.w > 0.0)) throw PreconditionError("edge weights must be positive");
        if (!seen.insert(std::minmax(e.u, e.v)).second)
            throw PreconditionError("duplicate edge");
    }
    if (!vertex_weights.empty()) {
        if (vertex_weights.size() != vertex_count)
            throw PreconditionError("vertex weight list size mismatch");
        for (double w : vertex_weights)
            if (!(w > 0.0)) throw PreconditionError("vertex weights must be positive");
    }
}

bool WeightedGraph::connected() const {
    if (vertex_count == 0) return false;
    std::vector<std::vector<std::uint32_t>> adj(vertex_count);
    for (const Edge& e : edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    std::vector<char> seen(vertex_count, 0);
    std::vector<std::uint32_t> stack = {0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const std::uint32_t v = stack.back();
        stack.pop_back();
        for (std::uint32_t w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
    }
    return reached == vertex_count;
}

std::vector<double> WeightedGraph::weighted_degrees() const {
    std::vector<double> deg(vertex_count, 0.0);
    for (const Edge& e : edges) {
        deg[e.u] += e.w;
        deg[e.v] += e.w;
    }
    return deg;
}

double WeightedGraph::total_volume() const {
    double t = 0.0;
    for (const Edge& e : edges) t += 2.0 * e.w;
    return t;
}

namespace {

Eigen::MatrixXd normalized_laplacian(const WeightedGraph& g) {
    const int n = static_cast<int>(g.vertex_count);
    const auto deg = g.weighted_degrees();
    for (double d : deg)
        if (!(d > 0.0)) throw PreconditionError("graph has an isolated vertex");
    Eigen::MatrixXd l = Eigen::MatrixXd::Identity(n, n);
    for (const auto& e : g.edges) {
        const double val = e.w / std::sqrt(deg[e.u] * deg[e.v]);
        l(static_cast<int>(e.u), static_cast<int>(e.v)) -= val;
        l(static_cast<int>(e.v), static_cast<int>(e.u)) -= val;
    }
    return l;
}

struct SpectralPair {
    double lambda1;
    Eigen::VectorXd eigenvector;  // of the normalized Laplacian
};

SpectralPair lambda1_with_vector(const WeightedGraph& g) {
    g.validate();
    if (g.vertex_count < 2) throw PreconditionError("lambda1 requires at least 2 vertices");
    if (!g.connected()) throw PreconditionError("lambda1 requires a connected graph");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(normalized_laplacian(g));
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("eigendecomposition failed");
    return {solver.eigenvalues()[1], solver.eigenvectors().col(1)};
}

}  // namespace

double lambda1(const WeightedGraph& g) { return lambda1_with_vector(g).lambda1; }

double cheeger_constant(const WeightedGraph& g, CheegerMode mode) {
    g.validate();
    if (g.vertex_count < 2) throw PreconditionError("cheeger_constant requires >= 2 vertices");
    if (!g.connected()) throw PreconditionError("cheeger_constant requires a connected graph");

    const auto deg = g.weighted_degrees();
    const double total = std::accumulate(deg.begin(), deg.end(), 0.0);

    if (mode == CheegerMode::exact) {
        const std::uint32_t n = g.vertex_count;
        if (n > 24)
            throw PreconditionError("exact mode enumerates subsets and is limited to 24 vertices; "
                                    "use sweep mode for larger graphs");
        // Enumerate subsets of {0..n-2} in Gray-code order (vertex n-1 stays in
        // the complement, which covers every cut once).
        const std::uint64_t count = 1ull << (n - 1);
        std::vector<char> side(n, 0);
        double cut = 0.0, vol = 0.0;
        std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(n);
        for (const auto& e : g.edges) {
            adj[e.u].push_back({e.v, e.w});
            adj[e.v].push_back({e.u, e.w});
        }
        double best = std::numeric_limits<double>::infinity();
        for (std::uint64_t i = 1; i < count; ++i) {
            const std::uint32_t flip = static_cast<std::uint32_t>(std::countr_zero(i));
            const char now = side[flip] ^= 1;
            vol += now ? deg[flip] : -deg[flip];
            for (const auto& [w, weight] : adj[flip])
                cut += (side[w] == now) ? -weight : weight;
            const double vol_c = total - vol;
            if (vol > 0.0 && vol <= 0.5 * total + 1e-12)
                best = std::min(best, cut / vol);
            if (vol_c > 0.0 && vol_c <= 0.5 * total + 1e-12)
                best = std::min(best, cut / vol_c);
        }
        return best;
    }

    // Sweep cut along the lambda1 eigenvector, in the D^{-1/2}-scaled order.
    const SpectralPair sp = lambda1_with_vector(g);
    std::vector<std::uint32_t> order(g.vertex_count);
    std::iota(order.begin(), order.end(), 0u);
    std::vector<double> score(g.vertex_count);
    for (std::uint32_t v = 0; v < g.vertex_count; ++v)
        score[v] = sp.eigenvector[static_cast<int>(v)] / std::sqrt(deg[v]);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return score[a] < score[b]; });

    std::vector<char> in_prefix(g.vertex_count, 0);
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(g.vertex_count);
    for (const auto& e : g.edges) {
        adj[e.u].push_back({e.v, e.w});
        adj[e.v].push_back({e.u, e.w});
    }
    double cut = 0.0, vol = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < g.vertex_count; ++k) {
        const std::uint32_t v = order[k];
        in_prefix[v] = 1;
        vol += deg[v];
        for (const auto& [w, weight] : adj[v]) cut += in_prefix[w] ? -weight : weight;
        const double denom = std::min(vol, total - vol);
        if (denom > 0.0) best = std::min(best, cut / denom);
    }
    return best;
}

CoareaReport coarea_check(const WeightedGraph& g, const std::vector<double>& values) {
    g.validate();
    if (values.size() != g.vertex_count)
        throw PreconditionError("vertex function size mismatch");
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw PreconditionError("vertex function must be nonnegative and finite");
    }

    CoareaReport r;
    for (const auto& e : g.edges) r.gradient_sum += e.w * std::fabs(values[e.u] - values[e.v]);

    // The level set {g >= s} is constant between consecutive distinct values.
    std::vector<double> levels = values;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (std::size_t t = 0; t + 1 < levels.size(); ++t) {
        const double threshold = levels[t + 1];  // {g >= s} for s in (levels[t], levels[t+1]]
        double cut = 0.0;
        for (const auto& e : g.edges) {
            const bool au = values[e.u] >= threshold;
            const bool av = values[e.v] >= threshold;
            if (au != av) cut += e.w;
        }
        r.levelset_integral += (levels[t + 1] - levels[t]) * cut;
    }

    r.difference = r.gradient_sum - r.levelset_integral;
    const double scale = std::max({1.0, std::fabs(r.gradient_sum), std::fabs(r.levelset_integral)});
    r.equal = std::fabs(r.difference) <= 1e-12 * scale;
    return r;
}

CheegerBuserReport cheeger_buser_report(const WeightedGraph& g) {
    CheegerBuserReport r;
    r.mode_used = g.vertex_count <= 24 ? CheegerMode::exact : CheegerMode::sweep;
    r.h = cheeger_constant(g, r.mode_used);
    r.lambda1 = lambda1(g);
    r.sandwich_lhs = 0.5 * r.h * r.h;
    r.sandwich_rhs = 2.0 * r.h;
    r.sandwich_holds = r.sandwich_lhs <= r.lambda1 + 1e-12 && r.lambda1 <= r.sandwich_rhs + 1e-12;
    r.continuous_lhs = 0.25 * r.h * r.h;
    r.continuous_rhs = 2.0 * 2.0 * r.h + 10.0 * r.h * r.h;  // k = 3
    return r;
}

}  // namespace orbi::spectral
