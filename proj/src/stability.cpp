#include "hyperstab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include "hyperstab/detail/odometer.hpp"
#include "hyperstab/errors.hpp"

namespace hyperstab {

using detail::next_multi_index;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStrictPositivity = 1e-8;

std::string format_witness(const std::vector<int>& witness) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < witness.size(); ++i) os << (i ? ", " : "") << witness[i] + 1;
    os << "}";
    return os.str();
}

double poly_eval(const std::map<int, double>& coeffs, double y) {
    double f = -1.0;
    for (const auto& [m, c] : coeffs) f += c * std::pow(y, m - 2);
    return f;
}

double poly_deriv(const std::map<int, double>& coeffs, double y) {
    double d = 0.0;
    for (const auto& [m, c] : coeffs)
        if (m >= 3) d += c * (m - 2) * std::pow(y, m - 3);
    return d;
}

} // namespace

const char* to_string(CertKind k) { return k == CertKind::weighted ? "weighted" : "box"; }

const char* to_string(Theorem t) {
    switch (t) {
        case Theorem::T1: return "T1";
        case Theorem::T2: return "T2";
        case Theorem::T3: return "T3";
        case Theorem::C1: return "C1";
        case Theorem::C2: return "C2";
    }
    return "?";
}

const char* to_string(LocalStability s) {
    switch (s) {
        case LocalStability::stable: return "stable";
        case LocalStability::unstable: return "unstable";
        case LocalStability::marginal: return "marginal";
    }
    return "?";
}

bool AttractionCertificate::contains(const Vec& x) const {
    double v = 0.0;
    if (kind == CertKind::weighted) {
        if (!delta || delta->size() != x.size())
            throw InputError("certificate weights missing or of wrong dimension");
        for (std::size_t j = 0; j < x.size(); ++j) v = std::max(v, std::abs(x[j]) / (*delta)[j]);
    } else {
        for (double e : x) v = std::max(v, std::abs(e));
    }
    return v < radius;
}

double positive_root(const std::map<int, double>& coeffs) {
    for (const auto& [m, c] : coeffs) {
        if (m < 2) throw InputError("positive_root: coefficient orders must be >= 2");
        if (!(c >= 0.0) || !std::isfinite(c)) throw InputError("positive_root: coefficients must be finite and >= 0");
    }
    const auto it2 = coeffs.find(2);
    const double c2 = it2 == coeffs.end() ? 0.0 : it2->second;
    if (c2 >= 1.0)
        throw ConditionError("positive_root: order-2 coefficient " + std::to_string(c2) + " must be < 1");

    bool has_higher = false;
    for (const auto& [m, c] : coeffs)
        if (m >= 3 && c > 0.0) has_higher = true;
    if (!has_higher) return kInf; // f stays below 1: nothing bounds the region

    // f(0) = c2 - 1 < 0 and f is strictly increasing; grow the upper end of
    // the bracket geometrically, then bisect, then polish with safeguarded
    // Newton steps.
    double lo = 0.0, hi = 1.0;
    while (poly_eval(coeffs, hi) <= 0.0) {
        hi *= 2.0;
        if (!std::isfinite(hi)) throw ConditionError("positive_root: no finite bracket found");
    }
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (poly_eval(coeffs, mid) < 0.0 ? lo : hi) = mid;
    }
    double y = 0.5 * (lo + hi);
    for (int step = 0; step < 10; ++step) {
        const double f = poly_eval(coeffs, y);
        if (std::abs(f) < 1e-13) break;
        (f < 0.0 ? lo : hi) = y;
        const double d = poly_deriv(coeffs, y);
        const double candidate = y - f / d;
        y = (d > 0.0 && candidate > lo && candidate < hi) ? candidate : 0.5 * (lo + hi);
    }
    return y;
}

AttractionCertificate theorem1_certificate(const Tensor& a) {
    if (a.order() < 3)
        throw InputError("theorem1_certificate: order k >= 3 required (the exponent 1/(k-2) "
                         "is undefined for matrices; use local_stability)");
    const Tensor abs_a = abs_tensor(a);

    AttractionCertificate cert;
    cert.kind = CertKind::weighted;
    cert.theorem = Theorem::T1;

    if (abs_a.is_zero()) {
        cert.radius = kInf;
        cert.degenerate = true;
        cert.delta = Vec(static_cast<std::size_t>(a.dim()), 1.0 / std::sqrt(static_cast<double>(a.dim())));
        cert.lambdas_used[a.order()] = 0.0;
        return cert;
    }

    const Irreducibility irr = is_irreducible(abs_a);
    ZEigenpair pair;
    try {
        pair = perron_z_eigenpair(abs_a);
    } catch (const SolverError& e) {
        if (irr.irreducible) throw;
        throw ConditionError("theorem1_certificate: |A| is reducible (witness I = " + format_witness(irr.witness) +
                             ") and the Perron iteration stalled (" + e.what() + ")");
    }
    if (!irr.irreducible) {
        // The descent argument only needs a strictly positive eigenvector;
        // accept a reducible tensor when the computed pair still provides one.
        const double mn = *std::min_element(pair.x.begin(), pair.x.end());
        if (!(mn > kStrictPositivity))
            throw ConditionError("theorem1_certificate: |A| is reducible (witness I = " + format_witness(irr.witness) +
                                 ") and no strictly positive Perron pair was found");
    }
    cert.delta = pair.x;
    cert.lambdas_used[a.order()] = pair.lambda;
    if (pair.lambda <= 0.0) {
        cert.radius = kInf;
        cert.degenerate = true;
    } else {
        cert.radius = std::pow(1.0 / pair.lambda, 1.0 / (a.order() - 2));
    }
    return cert;
}

namespace {

std::vector<std::pair<int, const Tensor*>> nonzero_tensors(const PolySystem& sys) {
    std::vector<std::pair<int, const Tensor*>> out;
    for (const auto& [m, t] : sys.tensors())
        if (!t.is_zero()) out.emplace_back(m, &t);
    return out;
}

} // namespace

namespace detail {

WeightedData common_weighted_data(const PolySystem& sys, const char* op) {
    if (sys.constant()) throw ConditionError(std::string(op) + ": constant term present; use shift_equilibrium first");

    const auto active = nonzero_tensors(sys);
    WeightedData data;
    if (active.empty()) {
        data.delta = Vec(static_cast<std::size_t>(sys.dim()), 1.0 / std::sqrt(static_cast<double>(sys.dim())));
        return data;
    }

    std::vector<Tensor> abs_parts;
    std::vector<std::pair<int, Irreducibility>> reducible;
    for (const auto& [m, t] : active) {
        abs_parts.push_back(abs_tensor(*t));
        Irreducibility irr = is_irreducible(*t);
        if (!irr.irreducible) reducible.emplace_back(m, std::move(irr));
    }

    std::optional<CommonPerron> common;
    try {
        common = common_perron_eigenvector(abs_parts);
    } catch (const SolverError& e) {
        if (reducible.empty()) throw;
        throw ConditionError(std::string(op) + ": order-" + std::to_string(reducible.front().first) +
                             " tensor is reducible (witness I = " + format_witness(reducible.front().second.witness) +
                             ") and the Perron iteration stalled (" + e.what() + ")");
    }
    if (!common)
        throw NoCommonEigenvector(std::string(op) + ": the tensors' absolute values do not share a "
                                  "Perron eigenvector; theorem3_certificate applies without one");
    if (!reducible.empty()) {
        const double mn = *std::min_element(common->delta.begin(), common->delta.end());
        if (!(mn > kStrictPositivity))
            throw ConditionError(std::string(op) + ": order-" + std::to_string(reducible.front().first) +
                                 " tensor is reducible (witness I = " + format_witness(reducible.front().second.witness) +
                                 ") and the shared eigenvector is not strictly positive");
    }

    data.delta = common->delta;
    for (std::size_t i = 0; i < active.size(); ++i) data.lambdas[active[i].first] = common->lambdas[i];
    return data;
}

} // namespace detail

AttractionCertificate theorem2_certificate(const PolySystem& sys) {
    detail::WeightedData data = detail::common_weighted_data(sys, "theorem2_certificate");

    const auto it2 = data.lambdas.find(2);
    if (it2 != data.lambdas.end() && it2->second >= 1.0)
        throw ConditionError("theorem2_certificate: Perron eigenvalue of the linear part is " +
                             std::to_string(it2->second) + " >= 1");

    AttractionCertificate cert;
    cert.kind = CertKind::weighted;
    cert.theorem = Theorem::T2;
    cert.radius = positive_root(data.lambdas);
    cert.delta = std::move(data.delta);
    cert.lambdas_used = std::move(data.lambdas);
    return cert;
}

namespace {

// Shared frame of the box certificates: validates the preconditions, builds
// the per-row coefficient maps, and reduces with a per-row radius rule.
AttractionCertificate box_certificate(const PolySystem& sys, Theorem theorem, const char* op,
                                      const std::function<double(const std::map<int, double>&)>& row_radius) {
    if (sys.constant()) throw ConditionError(std::string(op) + ": constant term present; use shift_equilibrium first");

    const auto active = nonzero_tensors(sys);
    for (const auto& [m, t] : active) {
        const Irreducibility irr = is_irreducible(*t);
        if (!irr.irreducible)
            throw ConditionError(std::string(op) + ": order-" + std::to_string(m) +
                                 " tensor is reducible (witness I = " + format_witness(irr.witness) + ")");
    }

    const int n = sys.dim();
    std::vector<std::map<int, double>> rows(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p)
        for (const auto& [m, t] : active) rows[static_cast<std::size_t>(p)][m] = row_absolute_sum(*t, p);

    for (int p = 0; p < n; ++p) {
        const auto it2 = rows[static_cast<std::size_t>(p)].find(2);
        if (it2 != rows[static_cast<std::size_t>(p)].end() && it2->second >= 1.0)
            throw ConditionError(std::string(op) + ": row " + std::to_string(p + 1) +
                                 " of the linear part has absolute sum " + std::to_string(it2->second) + " >= 1");
    }

    AttractionCertificate cert;
    cert.kind = CertKind::box;
    cert.theorem = theorem;
    cert.radius = kInf;
    for (int p = 0; p < n; ++p) {
        const double y = row_radius(rows[static_cast<std::size_t>(p)]);
        if (y < cert.radius) {
            cert.radius = y;
            cert.critical_row = p;
            cert.lambdas_used = rows[static_cast<std::size_t>(p)];
        }
    }
    return cert;
}

void require_orders_within(const PolySystem& sys, int max_order, const char* op) {
    for (const auto& [m, t] : sys.tensors())
        if (m > max_order && !t.is_zero())
            throw InputError(std::string(op) + ": tensor orders must be within {2..." + std::to_string(max_order) +
                             "}, found order " + std::to_string(m));
}

} // namespace

AttractionCertificate theorem3_certificate(const PolySystem& sys) {
    return box_certificate(sys, Theorem::T3, "theorem3_certificate", positive_root);
}

AttractionCertificate quadratic_certificate(const PolySystem& sys) {
    require_orders_within(sys, 3, "quadratic_certificate");
    return box_certificate(sys, Theorem::C1, "quadratic_certificate", [](const std::map<int, double>& row) {
        const double c1 = row.count(2) ? row.at(2) : 0.0;
        const double c2 = row.count(3) ? row.at(3) : 0.0;
        return c2 > 0.0 ? (1.0 - c1) / c2 : kInf;
    });
}

AttractionCertificate cubic_certificate(const PolySystem& sys) {
    require_orders_within(sys, 4, "cubic_certificate");
    return box_certificate(sys, Theorem::C2, "cubic_certificate", [](const std::map<int, double>& row) {
        const double c1 = row.count(2) ? row.at(2) : 0.0;
        const double c2 = row.count(3) ? row.at(3) : 0.0;
        const double c3 = row.count(4) ? row.at(4) : 0.0;
        if (c3 == 0.0) return c2 > 0.0 ? (1.0 - c1) / c2 : kInf;
        // Positive root of c3 y^2 + c2 y + (c1 - 1) = 0, written without the
        // subtractive cancellation of the textbook form.
        const double disc = c2 * c2 + 4.0 * c3 * (1.0 - c1);
        return 2.0 * (1.0 - c1) / (c2 + std::sqrt(disc));
    });
}

double linear_spectral_radius(const PolySystem& sys) {
    const Tensor* a1 = sys.tensor(2);
    return a1 ? matrix_spectral_radius(*a1) : 0.0;
}

LocalStability local_stability(const PolySystem& sys) {
    if (sys.constant())
        throw ConditionError("local_stability: constant term present; the origin is not an equilibrium");
    const double rho = linear_spectral_radius(sys);
    if (std::abs(rho - 1.0) <= 1e-10) return LocalStability::marginal;
    return rho < 1.0 ? LocalStability::stable : LocalStability::unstable;
}

PolySystem shift_equilibrium(const PolySystem& sys, const Vec& a, double tol) {
    const int n = sys.dim();
    if (static_cast<int>(a.size()) != n)
        throw InputError("shift_equilibrium: point length does not match system dimension");

    Vec fixed_residual = evaluate(sys, a);
    for (int i = 0; i < n; ++i) fixed_residual[static_cast<std::size_t>(i)] -= a[static_cast<std::size_t>(i)];
    const double res = norm_inf(fixed_residual);
    if (!(res < tol))
        throw InputError("shift_equilibrium: the point is not an equilibrium within tol (residual " +
                         std::to_string(res) + ")");

    const int k = sys.max_order();
    std::map<int, Tensor> built;
    for (int m = 2; m <= std::max(k, 2); ++m) built.emplace(m, Tensor(m, n));

    // Expand each A_m (y + a)^{m-1} by assigning every head slot to either y
    // or a; the y-slots keep their indices and drop into the tensor of order
    // |y-slots| + 1, the a-slots contribute a scalar factor. The all-a term is
    // the constant absorbed by the residual check above.
    for (const auto& [m, t] : sys.tensors()) {
        const int slots = m - 1;
        const std::size_t heads = t.head_count();
        const Vec& e = t.entries();
        std::vector<int> digits(static_cast<std::size_t>(slots), 0);
        std::vector<int> sub;
        std::size_t h = 0;
        do {
            bool any_tail = false;
            for (int i = 0; i < n && !any_tail; ++i)
                any_tail = e[static_cast<std::size_t>(i) * heads + h] != 0.0;
            if (any_tail) {
                for (unsigned mask = 1; mask < (1u << slots); ++mask) {
                    double factor = 1.0;
                    sub.clear();
                    for (int s = 0; s < slots; ++s) {
                        if ((mask >> s) & 1u)
                            sub.push_back(digits[static_cast<std::size_t>(s)]);
                        else
                            factor *= a[static_cast<std::size_t>(digits[static_cast<std::size_t>(s)])];
                    }
                    if (factor == 0.0) continue;
                    Tensor& target = built.at(static_cast<int>(sub.size()) + 1);
                    const std::size_t target_heads = target.head_count();
                    std::size_t hb = 0;
                    for (int d : sub) hb = hb * static_cast<std::size_t>(n) + static_cast<std::size_t>(d);
                    for (int i = 0; i < n; ++i) {
                        const double v = e[static_cast<std::size_t>(i) * heads + h];
                        if (v != 0.0) target.entries()[static_cast<std::size_t>(i) * target_heads + hb] += v * factor;
                    }
                }
            }
            ++h;
        } while (next_multi_index(digits, n));
    }

    PolySystem out(n);
    for (auto& [m, t] : built)
        if (!t.is_zero()) out.set_tensor(std::move(t));
    if (out.tensors().empty()) out.set_tensor(Tensor(2, n));
    return out;
}

} // namespace hyperstab
