#include "hyperstab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "hyperstab/errors.hpp"

namespace hyperstab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool all_finite(const Vec& v) {
    for (double e : v)
        if (!std::isfinite(e)) return false;
    return true;
}

} // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::converged: return "converged-to-origin";
        case Verdict::diverged: return "diverged";
        case Verdict::undecided: return "undecided";
    }
    return "?";
}

const char* to_string(RegionLabel l) {
    switch (l) {
        case RegionLabel::inside_converged: return "inside-converged";
        case RegionLabel::outside_converged: return "outside-converged";
        case RegionLabel::outside_diverged: return "outside-diverged";
        case RegionLabel::undecided: return "undecided";
    }
    return "?";
}

Trajectory simulate(const PolySystem& sys, const Vec& x0, const SimParams& params) {
    if (static_cast<int>(x0.size()) != sys.dim())
        throw InputError("simulate: initial state length does not match system dimension");
    if (!all_finite(x0)) throw InputError("simulate: initial state must be finite");
    if (params.max_steps < 0 || !(params.eps_conv > 0.0) || !(params.m_div > params.eps_conv))
        throw InputError("simulate: invalid parameters (need max_steps >= 0, 0 < eps_conv < m_div)");

    Trajectory traj;
    traj.states.push_back(x0);
    for (int t = 0;; ++t) {
        const Vec& x = traj.states.back();
        const double nrm = norm_inf(x);
        traj.steps_run = t;
        traj.final_norm = nrm;
        if (nrm < params.eps_conv) {
            traj.verdict = Verdict::converged;
            return traj;
        }
        if (nrm > params.m_div) {
            traj.verdict = Verdict::diverged;
            return traj;
        }
        if (t == params.max_steps) {
            traj.verdict = Verdict::undecided;
            return traj;
        }
        Vec next = evaluate(sys, x);
        if (!all_finite(next)) {
            traj.states.push_back(std::move(next));
            traj.steps_run = t + 1;
            traj.final_norm = kInf;
            traj.verdict = Verdict::diverged;
            return traj;
        }
        traj.states.push_back(std::move(next));
    }
}

std::vector<double> lyapunov_trace(const Trajectory& traj, const Vec& delta) {
    for (double d : delta)
        if (!(d > 0.0)) throw InputError("lyapunov_trace: weights must be strictly positive");
    std::vector<double> v;
    v.reserve(traj.states.size());
    for (const Vec& x : traj.states) {
        if (x.size() != delta.size()) throw InputError("lyapunov_trace: weight length does not match state length");
        double m = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) m = std::max(m, std::abs(x[j]) / delta[j]);
        v.push_back(m);
    }
    return v;
}

RegionSample sample_region(const PolySystem& sys, const Vec& lo, const Vec& hi, int points_per_axis,
                           const SimParams& params, const std::optional<AttractionCertificate>& cert) {
    const int n = sys.dim();
    if (static_cast<int>(lo.size()) != n || static_cast<int>(hi.size()) != n)
        throw InputError("sample_region: bounds must match the system dimension");
    if (n > 3) throw InputError("sample_region: full grids are supported for n <= 3 only");
    if (points_per_axis < 1) throw InputError("sample_region: points_per_axis must be >= 1");
    for (int i = 0; i < n; ++i)
        if (!(lo[static_cast<std::size_t>(i)] < hi[static_cast<std::size_t>(i)]))
            throw InputError("sample_region: lo must be strictly below hi componentwise");

    double total = 1.0;
    for (int i = 0; i < n; ++i) total *= points_per_axis;
    if (total > 1e6) throw InputError("sample_region: grid exceeds 10^6 points");

    RegionSample out;
    out.certificate = cert;
    std::vector<int> digit(static_cast<std::size_t>(n), 0);
    while (true) {
        Vec x0(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double a = lo[static_cast<std::size_t>(i)], b = hi[static_cast<std::size_t>(i)];
            x0[static_cast<std::size_t>(i)] =
                points_per_axis == 1 ? a
                                     : a + (b - a) * digit[static_cast<std::size_t>(i)] / (points_per_axis - 1);
        }
        const Trajectory traj = simulate(sys, x0, params);
        RegionLabel label = RegionLabel::undecided;
        switch (traj.verdict) {
            case Verdict::converged:
                label = (cert && cert->contains(x0)) ? RegionLabel::inside_converged : RegionLabel::outside_converged;
                break;
            case Verdict::diverged:
                label = RegionLabel::outside_diverged;
                break;
            case Verdict::undecided:
                label = RegionLabel::undecided;
                break;
        }
        out.grid.push_back(std::move(x0));
        out.labels.push_back(label);

        int pos = n - 1;
        for (; pos >= 0; --pos) {
            if (++digit[static_cast<std::size_t>(pos)] < points_per_axis) break;
            digit[static_cast<std::size_t>(pos)] = 0;
        }
        if (pos < 0) break;
    }
    return out;
}

PolySystem build_sis(const SisParams& params, std::vector<std::string>* warnings) {
    const int n = static_cast<int>(params.gamma.size());
    if (n < 1) throw InputError("build_sis: empty healing-rate vector");
    if (params.a.order() != 2 || params.b.order() != 3)
        throw InputError("build_sis: contact structures must have orders 2 (a) and 3 (b)");
    if (params.a.dim() != n || params.b.dim() != n)
        throw InputError("build_sis: contact structure dimensions must match the healing-rate vector");
    if (!(params.h > 0.0)) throw InputError("build_sis: step h must be positive");
    if (params.beta1 < 0.0 || params.beta2 < 0.0) throw InputError("build_sis: infection rates must be >= 0");
    for (double g : params.gamma)
        if (!(g > 0.0)) throw InputError("build_sis: healing rates must be positive");
    for (double e : params.a.entries())
        if (e < 0.0) throw InputError("build_sis: pairwise contact rates must be >= 0");
    for (double e : params.b.entries())
        if (e < 0.0) throw InputError("build_sis: group contact rates must be >= 0");

    if (warnings)
        for (int i = 0; i < n; ++i)
            if (params.h * params.gamma[static_cast<std::size_t>(i)] > 1.0)
                warnings->push_back("h*gamma exceeds 1 at node " + std::to_string(i + 1) +
                                    "; the probabilistic interpretation breaks down");

    const double h = params.h;
    Tensor t2(2, n);
    for (int i = 0; i < n; ++i) {
        t2.at({i, i}) = 1.0 - h * params.gamma[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) t2.at({i, j}) += h * params.beta1 * params.a.at({i, j});
    }

    Tensor t3(3, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            for (int l = 0; l < n; ++l) t3.at({i, j, l}) += h * params.beta2 * params.b.at({i, j, l});
            // cross term -h*b1*x_i*a_ij, full weight on head pattern (i, j)
            t3.at({i, i, j}) += -h * params.beta1 * params.a.at({i, j});
        }

    Tensor t4(4, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) t4.at({i, i, j, l}) += -h * params.beta2 * params.b.at({i, j, l});

    PolySystem sys(n);
    sys.set_tensor(std::move(t2));
    if (!t3.is_zero()) sys.set_tensor(std::move(t3));
    if (!t4.is_zero()) sys.set_tensor(std::move(t4));
    return sys;
}

VerificationReport verify_certificate(const PolySystem& sys, const AttractionCertificate& cert, int samples,
                                      std::uint64_t seed, const SimParams& params) {
    if (samples < 0) throw InputError("verify_certificate: sample count must be >= 0");
    const int n = sys.dim();
    const bool bounded = std::isfinite(cert.radius);
    if (cert.kind == CertKind::weighted && bounded && (!cert.delta || static_cast<int>(cert.delta->size()) != n))
        throw InputError("verify_certificate: weighted certificate without usable weights");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto draw = [&rng, &unit]() {
        double u;
        do {
            u = unit(rng);
        } while (!(std::abs(u) < 1.0));
        return u;
    };

    VerificationReport report;
    report.total = samples;
    for (int s = 0; s < samples; ++s) {
        Vec x0(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double u = draw();
            if (!bounded)
                x0[static_cast<std::size_t>(i)] = u; // default box when the region is unbounded
            else if (cert.kind == CertKind::weighted)
                x0[static_cast<std::size_t>(i)] = u * cert.radius * (*cert.delta)[static_cast<std::size_t>(i)];
            else
                x0[static_cast<std::size_t>(i)] = u * cert.radius;
        }
        const Trajectory traj = simulate(sys, x0, params);
        report.worst_final_norm = std::max(report.worst_final_norm, traj.final_norm);
        if (traj.verdict == Verdict::converged)
            ++report.converged;
        else
            report.failures.push_back(std::move(x0));
    }
    return report;
}

} // namespace hyperstab
