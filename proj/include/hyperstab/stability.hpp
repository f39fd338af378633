#pragma once

#include <map>
#include <optional>
#include <string>

#include "hyperstab/spectral.hpp"
#include "hyperstab/tensor.hpp"

namespace hyperstab {

enum class CertKind { weighted, box };
enum class Theorem { T1, T2, T3, C1, C2 };

const char* to_string(CertKind k);
const char* to_string(Theorem t);

/// A certified inner approximation of the domain of attraction of the origin:
///   weighted:  { x : max_j |x_j| / delta_j < radius }
///   box:       { x : max_j |x_j|           < radius }
/// radius may be +infinity (globally certified, e.g. a stable linear system).
struct AttractionCertificate {
    CertKind kind = CertKind::box;
    double radius = 0.0;
    std::optional<Vec> delta; // unit positive weights; present iff weighted
    Theorem theorem = Theorem::T3;
    /// Coefficients the root equation consumed, keyed by tensor order:
    /// Perron eigenvalues for the weighted certificates, row absolute sums of
    /// the critical row for the box ones.
    std::map<int, double> lambdas_used;
    /// Row achieving the minimal per-row radius (box certificates), 0-based.
    int critical_row = -1;
    /// Set when the leading eigenvalue vanished and the radius is +infinity.
    bool degenerate = false;

    /// Strict-interior membership test.
    bool contains(const Vec& x) const;
};

/// Unique y > 0 with sum_m c_m y^(m-2) = 1, for nonnegative coefficients
/// keyed by tensor order m >= 2 and c_2 < 1 (ConditionError otherwise).
/// Returns +infinity when every coefficient of order >= 3 vanishes. Bracketing
/// bisection plus a Newton polish; |f(y)| < 1e-12 at the returned root.
double positive_root(const std::map<int, double>& coeffs);

/// Certificate for the homogeneous system x+ = A x^{k-1}, k >= 3: weighted
/// radius (1/lambda)^(1/(k-2)) from a Perron pair (lambda, delta) of |A|.
/// When |A| is reducible the certificate is still produced if the computed
/// pair is strictly positive (the descent argument only needs delta > 0);
/// otherwise a ConditionError reports the witnessing index set.
AttractionCertificate theorem1_certificate(const Tensor& a);

/// Weighted certificate for a non-uniform system whose tensors share a Perron
/// eigenvector delta: radius = positive_root over the common eigenvalues.
/// Requires no constant term and lambda of the order-2 tensor < 1. Throws
/// NoCommonEigenvector when the shared-eigenvector verification fails.
AttractionCertificate theorem2_certificate(const PolySystem& sys);

/// Box certificate from per-row absolute sums: radius = min_p y_p where y_p
/// solves sum_m rowsum_m(p) y^(m-2) = 1. Requires no constant term, every
/// nonzero tensor irreducible, and max_p rowsum_2(p) < 1.
AttractionCertificate theorem3_certificate(const PolySystem& sys);

/// Closed form of the box certificate for orders {2,3}:
/// radius = min_p (1 - C1_p) / C2_p.
AttractionCertificate quadratic_certificate(const PolySystem& sys);

/// Closed form of the box certificate for orders {2,3,4}: per-row positive
/// root of C3 y^2 + C2 y + (C1 - 1) = 0.
AttractionCertificate cubic_certificate(const PolySystem& sys);

enum class LocalStability { stable, unstable, marginal };
const char* to_string(LocalStability s);

/// Spectral radius of the order-2 tensor against 1 (tolerance 1e-10).
LocalStability local_stability(const PolySystem& sys);

/// Spectral radius of the linear part (0 when no order-2 tensor is stored).
double linear_spectral_radius(const PolySystem& sys);

/// Moves the equilibrium a of a constant-term system to the origin: returns
/// sys' without constant term such that evaluate(sys', y) = evaluate(sys, y+a) - a,
/// by multinomial expansion of each tensor over y/a head-slot assignments.
/// Requires ||evaluate(sys, a) - a||_inf < tol.
PolySystem shift_equilibrium(const PolySystem& sys, const Vec& a, double tol = 1e-10);

namespace detail {

struct WeightedData {
    Vec delta;
    std::map<int, double> lambdas; // tensor order -> Perron eigenvalue of |A_m|
};

/// Shared-eigenvector data behind theorem2_certificate and the controlled
/// variant: validates the constant-term/irreducibility preconditions and
/// verifies the common Perron eigenvector of the absolute-value tensors.
WeightedData common_weighted_data(const PolySystem& sys, const char* op);

} // namespace detail

} // namespace hyperstab
