#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hyperstab/tensor.hpp"

namespace hyperstab {

/// A Z-eigenpair: A x^{k-1} = lambda x with ||x||_2 = 1.
struct ZEigenpair {
    double lambda = 0.0;
    Vec x;
    double residual = 0.0; // ||A x^{k-1} - lambda x||_2 at (lambda, x)
};

/// Perron pair of a nonnegative tensor by shifted fixed-point iteration
///   x+ = (A x^{k-1} + alpha x) / ||A x^{k-1} + alpha x||_2,  alpha = k * max|A|,
/// started from the uniform positive vector. lambda = x' (A x^{k-1}) at the
/// fixed point. Throws InputError on negative entries or a zero tensor, and
/// SolverError (carrying the best iterate) when max_iter is exhausted.
ZEigenpair perron_z_eigenpair(const Tensor& a, double tol = 1e-10, long max_iter = 100000);

struct OracleResult {
    std::vector<ZEigenpair> pairs; // sorted by lambda descending
    /// Every direction satisfies the eigenproblem (zero tensor, or scaled
    /// identity-like tensors); `pairs` then holds one representative.
    bool degenerate = false;
    std::string sign_convention;
};

/// Brute-force eigenpair search, independent of perron_z_eigenpair. n = 1 is
/// handled directly; n = 2 parametrizes the unit circle with `resolution`
/// angles and bisects sign changes of the tangential residual; n = 3 seeds a
/// Newton refinement of (A x^{k-1} - lambda x, x'x - 1) from ~`resolution`
/// spherical grid points. All reported pairs have residual < 1e-9. Throws for
/// n > 3. Pairs equivalent under x -> -x are collapsed to one representative
/// (see OracleResult::sign_convention).
OracleResult z_eigenpairs_oracle(const Tensor& a, int resolution = 720);

struct Irreducibility {
    bool irreducible = true;
    std::vector<int> witness; // 0-based index set I when reducible
    explicit operator bool() const { return irreducible; }
};

/// Definition-faithful check: reducible iff some nonempty proper I has
/// A_{i,I'} = 0 for every tail i in I and every head tuple I' avoiding I.
/// A strong-connectivity pre-pass (over the all-equal-heads entries) can
/// confirm irreducibility early; negatives always go through the exhaustive
/// subset scan. Throws for n > 20.
Irreducibility is_irreducible(const Tensor& a);

struct CommonPerron {
    Vec delta;                   // shared unit positive eigenvector
    std::vector<double> lambdas; // per input tensor, in input order
};

/// Computes a Perron pair of the first tensor and verifies that its
/// eigenvector is an eigenvector of every other tensor (relative residual
/// < tol). Returns the shared vector and the per-tensor eigenvalues, or
/// nullopt when any verification fails.
std::optional<CommonPerron> common_perron_eigenvector(const std::vector<Tensor>& tensors, double tol = 1e-8);

/// Spectral radius of an order-2 tensor via a dense eigensolver.
double matrix_spectral_radius(const Tensor& a);

} // namespace hyperstab
