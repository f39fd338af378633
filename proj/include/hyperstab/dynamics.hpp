#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperstab/stability.hpp"
#include "hyperstab/tensor.hpp"

namespace hyperstab {

struct SimParams {
    int max_steps = 1000;
    double eps_conv = 1e-8; // ||x||_inf below this counts as converged
    double m_div = 1e6;     // ||x||_inf above this counts as diverged
};

enum class Verdict { converged, diverged, undecided };
const char* to_string(Verdict v);

struct Trajectory {
    std::vector<Vec> states; // x(0..T); states[t+1] = evaluate(sys, states[t])
    Verdict verdict = Verdict::undecided;
    int steps_run = 0;
    double final_norm = 0.0; // +inf when the iteration overflowed
};

/// Iterates x+ = evaluate(sys, x) until convergence, divergence, or the step
/// budget runs out. A non-finite intermediate marks the trajectory diverged at
/// that step rather than raising.
Trajectory simulate(const PolySystem& sys, const Vec& x0, const SimParams& params = {});

/// V(t) = max_j |x_j(t)| / delta_j per stored state.
std::vector<double> lyapunov_trace(const Trajectory& traj, const Vec& delta);

enum class RegionLabel { inside_converged, outside_converged, outside_diverged, undecided };
const char* to_string(RegionLabel l);

struct RegionSample {
    std::vector<Vec> grid;
    std::vector<RegionLabel> labels;
    std::optional<AttractionCertificate> certificate;
};

/// Simulates every point of a uniform grid over [lo, hi]^n and labels it.
/// Converged points are split by the optional certificate's strict interior;
/// diverged points lie outside the true domain of attraction by definition.
/// n <= 3 and at most 10^6 grid points.
RegionSample sample_region(const PolySystem& sys, const Vec& lo, const Vec& hi, int points_per_axis,
                           const SimParams& params = {}, const std::optional<AttractionCertificate>& cert = {});

/// Susceptible-infected-susceptible dynamics on a contact structure with
/// pairwise rates a (order 2) and group rates b (order 3):
///   x_i+ = (1 - h g_i) x_i + h b1 (1 - x_i) sum_j a_ij x_j
///                          + h b2 (1 - x_i) sum_jl b_ijl x_j x_l.
struct SisParams {
    Vec gamma;   // healing rates, positive
    double beta1 = 0.0;
    double beta2 = 0.0;
    Tensor a;    // nonnegative, order 2
    Tensor b;    // nonnegative, order 3
    double h = 1.0;
};

/// Assembles the tensor form of the SIS step so that evaluate() reproduces the
/// componentwise formula exactly. The -h*b1*x_i*a_ij and -h*b2*x_i*b_ijl cross
/// terms are stored with the full weight on the head pattern (i, j[, l]).
/// Appends a note to `warnings` when h*gamma_i > 1 (the probabilistic reading
/// breaks down).
PolySystem build_sis(const SisParams& params, std::vector<std::string>* warnings = nullptr);

struct VerificationReport {
    int total = 0;
    int converged = 0;
    double worst_final_norm = 0.0;
    std::vector<Vec> failures; // initial conditions that did not converge
};

/// Samples initial conditions uniformly in the certified region's interior
/// (box or weighted geometry per the certificate) and simulates each one.
/// An infinite radius falls back to the box [-1, 1]^n. Deterministic given
/// the seed; a sound certificate converges on every sample.
VerificationReport verify_certificate(const PolySystem& sys, const AttractionCertificate& cert, int samples,
                                      std::uint64_t seed, const SimParams& params = {});

} // namespace hyperstab
