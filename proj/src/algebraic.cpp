#include "orbi/algebraic.hpp"
#include "orbi/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>

namespace orbi::algebraic {

namespace {

using cld = std::complex<long double>;

// Parlett-Reinsch style balancing: scale row/column pairs by powers of two
// until the off-diagonal 1-norms stop improving.
void balance_companion(Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    Eigen::MatrixXd off = m;
    off.diagonal().setZero();
    const double gamma = 0.9;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i) {
            const double row_norm = off.row(i).lpNorm<1>();
            const double col_norm = off.col(i).lpNorm<1>();
            if (row_norm == 0.0 || col_norm == 0.0) continue;
            int exponent = 0;
            std::frexp(row_norm / col_norm, &exponent);
            exponent /= 2;
            if (exponent != 0) {
                const double scaled_col = std::ldexp(col_norm, exponent);
                const double scaled_row = std::ldexp(row_norm, -exponent);
                if (scaled_col + scaled_row < gamma * (col_norm + row_norm)) {
                    changed = true;
                    off.row(i) *= std::ldexp(1.0, -exponent);
                    off.col(i) *= std::ldexp(1.0, exponent);
                }
            }
        }
    }
    off.diagonal() = m.diagonal();
    m = off;
}

// Horner evaluation of p and p' at z, constant-first coefficients.
void eval_poly(const std::vector<long long>& c, cld z, cld& value, cld& derivative) {
    cld v(0.0L, 0.0L), d(0.0L, 0.0L);
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
        d = d * z + v;
        v = v * z + static_cast<long double>(c[i]);
    }
    value = v;
    derivative = d;
}

struct RefinedRoot {
    cld z;
    long double error_bound;  // heuristic |correction| bound at the final step
};

RefinedRoot refine_root(const std::vector<long long>& coeffs, cld z0) {
    cld z = z0;
    long double last_step = std::numeric_limits<long double>::max();
    for (int iter = 0; iter < 60; ++iter) {
        cld v, d;
        eval_poly(coeffs, z, v, d);
        if (std::abs(d) == 0.0L) break;
        const cld step = v / d;
        z -= step;
        const long double s = std::abs(step);
        if (s <= 1e-18L * std::max<long double>(1.0L, std::abs(z))) {
            last_step = s;
            break;
        }
        if (s >= last_step && iter > 5) break;  // stagnation (multiple root)
        last_step = s;
    }
    cld v, d;
    eval_poly(coeffs, z, v, d);
    long double bound;
    if (std::abs(d) > 0.0L) {
        // |root - z| <= deg * |p(z)/p'(z)| holds near a simple root
        bound = static_cast<long double>(coeffs.size()) * std::abs(v / d);
    } else {
        bound = std::numeric_limits<long double>::infinity();
    }
    return {z, bound};
}

}  // namespace

IntPolynomial::IntPolynomial(std::vector<long long> coeffs) : coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    if (coeffs_.empty()) throw PreconditionError("zero polynomial");
}

IntPolynomial IntPolynomial::parse(const std::string& text) {
    std::istringstream in(text);
    std::vector<long long> c;
    long long v;
    while (in >> v) c.push_back(v);
    if (!in.eof()) throw PreconditionError("polynomial coefficients must be integers: " + text);
    if (c.empty()) throw PreconditionError("no polynomial coefficients given");
    return IntPolynomial(std::move(c));
}

IntPolynomial IntPolynomial::operator*(const IntPolynomial& other) const {
    std::vector<long long> out(coeffs_.size() + other.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < other.coeffs_.size(); ++j)
            out[i + j] += coeffs_[i] * other.coeffs_[j];
    return IntPolynomial(std::move(out));
}

std::string IntPolynomial::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) out << ' ';
        out << coeffs_[i];
    }
    return out.str();
}

void BoundConstants::validate() const {
    const struct { const char* name; double v; } entries[] = {
        {"c1", c1}, {"c2", c2}, {"c4", c4}, {"c5", c5},
        {"margulis_mu3", margulis_mu3}, {"lambda1_floor", lambda1_floor},
        {"cn", cn}, {"cDn", cDn}, {"symmetry_multiplier", symmetry_multiplier},
    };
    for (const auto& e : entries)
        if (!(e.v > 0.0) || !std::isfinite(e.v))
            throw PreconditionError(std::string("constant ") + e.name + " must be positive and finite");
    if (!(c3 >= 0.0) || !std::isfinite(c3))
        throw PreconditionError("constant c3 must be nonnegative and finite");
    if (lambda1_floor > 1.0)
        throw PreconditionError("lambda1_floor must be <= 1");
}

std::uint64_t euler_phi(std::uint64_t n) {
    if (n == 0) throw PreconditionError("euler_phi undefined for n = 0");
    std::uint64_t result = n;
    std::uint64_t m = n;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            result -= result / p;
            while (m % p == 0) m /= p;
        }
    }
    if (m > 1) result -= result / m;
    return result;
}

std::vector<std::uint32_t> euler_phi_table(std::uint32_t limit) {
    std::vector<std::uint32_t> phi(limit + 1);
    std::iota(phi.begin(), phi.end(), 0u);
    for (std::uint32_t p = 2; p <= limit; ++p) {
        if (phi[p] == p) {  // p prime
            for (std::uint32_t k = p; k <= limit; k += p) phi[k] -= phi[k] / p;
        }
    }
    phi[0] = 0;
    return phi;
}

double mahler_measure(const IntPolynomial& p, double precision) {
    if (!(precision > 0.0)) throw PreconditionError("precision must be positive");
    if (p.degree() < 1) throw PreconditionError("mahler_measure requires degree >= 1");

    // Roots at zero contribute max(1, 0) = 1: strip x^m.
    std::vector<long long> c = p.coeffs();
    std::size_t shift = 0;
    while (shift < c.size() - 1 && c[shift] == 0) ++shift;
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(shift));

    const int d = static_cast<int>(c.size()) - 1;
    const long double lead = static_cast<long double>(std::llabs(c.back()));
    if (d == 0) return static_cast<double>(lead);

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
    companion.diagonal(-1).setOnes();
    for (int i = 0; i < d; ++i)
        companion(i, d - 1) = -static_cast<double>(c[i]) / static_cast<double>(c.back());
    balance_companion(companion);

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("companion-matrix eigenvalue iteration failed");

    long double product = lead;
    long double error_sum = 0.0L;
    for (int i = 0; i < d; ++i) {
        const auto ev = solver.eigenvalues()[i];
        const RefinedRoot r = refine_root(c, cld(ev.real(), ev.imag()));
        const long double mod = std::abs(r.z);
        product *= std::max<long double>(1.0L, mod);
        if (mod > 1.0L - 1e-6L) error_sum += std::min<long double>(r.error_bound, 1.0L);
    }
    // First-order sensitivity: shifting each large-modulus root by its bound
    // scales the product by at most (1 + bound) per root.
    const long double certified = product * error_sum * 2.0L + 1e-14L * product;
    if (certified <= static_cast<long double>(precision))
        return static_cast<double>(product);

    // Newton could not certify (clustered or multiple roots): cross-check the
    // estimate against the Graeffe route and accept on agreement.
    const double graeffe = mahler_measure_graeffe(p);
    const double agree_tol = std::max(precision, 1e-6 * static_cast<double>(product));
    if (std::abs(static_cast<double>(product) - graeffe) <= agree_tol)
        return static_cast<double>(product);
    throw ConvergenceError("could not certify root moduli to tolerance");
}

double mahler_measure_graeffe(const IntPolynomial& p, int iterations) {
    if (p.degree() < 1) throw PreconditionError("mahler_measure requires degree >= 1");
    std::vector<long double> c(p.coeffs().begin(), p.coeffs().end());
    // M(P_k) = M(P)^(2^k) and the L2 norm brackets M within polynomial-in-d
    // factors, so log2 ||P_k||_2 / 2^k converges to log2 M.
    long double log2_scale = 0.0L;
    for (int it = 0; it < iterations; ++it) {
        const std::size_t n = c.size();
        std::vector<long double> q(n, 0.0L);
        for (std::size_t j = 0; j < n; ++j) {
            // coefficient of y^j in +-P(x)P(-x)|_{x^2=y}
            long double acc = c[j] * c[j];
            for (std::size_t i = 1; i <= j; ++i) {
                if (j + i >= n) break;
                acc += 2.0L * (i % 2 ? -1.0L : 1.0L) * c[j - i] * c[j + i];
            }
            q[j] = (j % 2 ? -acc : acc);
        }
        long double max_abs = 0.0L;
        for (long double v : q) max_abs = std::max(max_abs, std::fabs(v));
        if (max_abs == 0.0L) throw ConvergenceError("graeffe iteration collapsed to zero");
        for (long double& v : q) v /= max_abs;
        log2_scale = 2.0L * log2_scale + std::log2(max_abs);
        c = std::move(q);
    }
    long double norm2 = 0.0L;
    for (long double v : c) norm2 += v * v;
    const long double log2_m =
        (0.5L * std::log2(norm2) + log2_scale) / std::exp2(static_cast<long double>(iterations));
    return static_cast<double>(std::exp2(log2_m));
}

double dobrowolski_bound(int d, const BoundConstants& constants) {
    constants.validate();
    if (d < 4)
        throw PreconditionError("dobrowolski_bound requires degree >= 4 under base-2 logs");
    const double l = std::log2(static_cast<double>(d));
    const double ll = std::log2(l);
    const double ratio = ll / l;
    return constants.c1 * ratio * ratio * ratio;
}

double translation_length(double mahler, TraceKind kind) {
    if (!(mahler >= 1.0))
        throw PreconditionError("translation_length requires Mahler measure >= 1");
    const double ln_m = std::log(mahler);
    return kind == TraceKind::complex ? 0.5 * ln_m : ln_m;
}

double degree_bound_from_volume(double volume, const BoundConstants& constants) {
    constants.validate();
    if (!(volume > 1.0)) throw PreconditionError("degree_bound_from_volume requires V > 1");
    return constants.c2 * std::log2(volume) + constants.c3;
}

double injectivity_radius_bound(double volume, const BoundConstants& constants) {
    const double deg_k = degree_bound_from_volume(volume, constants);
    const double d = 2.0 * deg_k;
    if (d < 4.0)
        throw PreconditionError("composed polynomial degree below 4; volume out of range");
    const double l = std::log2(d);
    const double ll = std::log2(l);
    const double ratio = ll / l;
    return 0.5 * constants.c1 * ratio * ratio * ratio;
}

std::uint64_t finite_subgroup_order_bound(std::uint32_t deg_k, const BoundConstants& constants) {
    constants.validate();
    if (deg_k == 0) throw PreconditionError("field degree must be >= 1");
    // sqrt(n)/2 <= phi(n) makes n <= 4*deg_k^2 a complete search window.
    const std::uint64_t ceiling = 4ull * deg_k * deg_k;
    std::uint64_t best = 1;
    for (std::uint64_t n = 1; n <= ceiling; ++n)
        if (euler_phi(n) <= deg_k) best = n;
    return static_cast<std::uint64_t>(constants.symmetry_multiplier * static_cast<double>(best));
}

}  // namespace orbi::algebraic
