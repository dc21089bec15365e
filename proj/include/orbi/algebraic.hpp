#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace orbi::algebraic {

/// Integer-coefficient polynomial, constant term first.
/// Trailing zero coefficients are stripped on construction, so
/// degree() == coeffs().size() - 1 and the leading coefficient is nonzero.
class IntPolynomial {
public:
    explicit IntPolynomial(std::vector<long long> coeffs);

    /// Parse space-separated integer coefficients, constant term first.
    static IntPolynomial parse(const std::string& text);

    const std::vector<long long>& coeffs() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    long long leading() const { return coeffs_.back(); }
    long long constant() const { return coeffs_.front(); }

    IntPolynomial operator*(const IntPolynomial& other) const;
    bool operator==(const IntPolynomial& other) const { return coeffs_ == other.coeffs_; }

    std::string to_string() const;

private:
    std::vector<long long> coeffs_;
};

enum class TraceKind { real, complex };

/// Named constants of the bound chain. All are configuration with documented
/// defaults; none is hard-coded inside a formula.
struct BoundConstants {
    double c1 = 0.25;             ///< Mahler-measure lower bound coefficient
    double c2 = 1.0;              ///< field-degree-vs-log-volume slope
    double c3 = 0.0;              ///< field-degree-vs-log-volume offset
    double c4 = 48.0;             ///< closed-form finite-subgroup coefficient (reported only)
    double c5 = 48.0;             ///< finite-subgroup-vs-log-volume coefficient (reported only)
    double margulis_mu3 = 0.1;    ///< Margulis constant for H^3 (configuration)
    double lambda1_floor = 0.75;  ///< spectral gap floor of the congruence cover
    double cn = 1.0;              ///< ambient-dimension constant of the main inequality
    double cDn = 1.0;             ///< tube-volume-per-simplex constant
    double symmetry_multiplier = 12.0;  ///< spherical-symmetry-type order / max cyclic order

    void validate() const;  ///< throws PreconditionError unless all positive
};

/// Euler totient. Exact; rejects n = 0.
std::uint64_t euler_phi(std::uint64_t n);

/// Totients of 1..limit by sieve. phi[0] is unused (set to 0).
std::vector<std::uint32_t> euler_phi_table(std::uint32_t limit);

/// Mahler measure |lead| * prod_i max(1, |root_i|), certified to the given
/// absolute tolerance. Roots come from balanced companion-matrix eigenvalues
/// refined by Newton iteration; a Graeffe-iteration estimate serves as the
/// fallback certificate when refinement alone cannot vouch for the tolerance.
/// Throws ConvergenceError if neither route certifies.
double mahler_measure(const IntPolynomial& p, double precision = 1e-9);

/// Graeffe (root-squaring) estimate of the Mahler measure; independent of the
/// eigenvalue path. Accuracy roughly 1e-8 relative for moderate degrees.
double mahler_measure_graeffe(const IntPolynomial& p, int iterations = 30);

/// c1 * (log2 log2 d / log2 d)^3, defined for d >= 4.
double dobrowolski_bound(int d, const BoundConstants& constants);

/// Geodesic translation length from a Mahler measure: ln(M)/2 for a complex
/// trace, ln(M) for a real one. Natural log; lengths are metric quantities.
double translation_length(double mahler, TraceKind kind);

/// c2 * log2(V) + c3, defined for V > 1.
double degree_bound_from_volume(double volume, const BoundConstants& constants);

/// 0.5 * c1 * (log2 log2 D / log2 D)^3 with D = 2*(c2 log2 V + c3).
/// Rejects inputs whose composed degree D falls below 4.
double injectivity_radius_bound(double volume, const BoundConstants& constants);

/// symmetry_multiplier * max{ n : phi(n) <= deg_k }, by exact enumeration of
/// n <= 4*deg_k^2 (sound since sqrt(n)/2 <= phi(n)).
std::uint64_t finite_subgroup_order_bound(std::uint32_t deg_k, const BoundConstants& constants);

}  // namespace orbi::algebraic
