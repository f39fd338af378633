#include "hyperstab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "hyperstab/detail/odometer.hpp"
#include "hyperstab/errors.hpp"

namespace hyperstab {

using detail::next_multi_index;

namespace {

constexpr double kOracleResidualTol = 1e-9;

ZEigenpair make_pair(const Tensor& a, Vec x) {
    const double nx = norm2(x);
    for (double& e : x) e /= nx;
    Vec r = contract(a, x);
    ZEigenpair p;
    p.lambda = dot(x, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= p.lambda * x[i];
    p.residual = norm2(r);
    p.x = std::move(x);
    return p;
}

// Pairs related by x -> -x describe the same eigenvector line. For odd order
// the eigenvalue flips sign with x, so the representative keeps lambda >= 0;
// for even order (and for lambda ~ 0) the sign is fixed by the first nonzero
// component.
void canonicalize(ZEigenpair& p, int order) {
    constexpr double tiny = 1e-12;
    if (order % 2 == 1 && p.lambda < -tiny) {
        p.lambda = -p.lambda;
        for (double& e : p.x) e = -e;
    }
    if (order % 2 == 0 || std::abs(p.lambda) <= tiny) {
        for (double e : p.x) {
            if (std::abs(e) > tiny) {
                if (e < 0.0)
                    for (double& v : p.x) v = -v;
                break;
            }
        }
    }
}

bool same_pair(const ZEigenpair& a, const ZEigenpair& b, double scale) {
    if (std::abs(a.lambda - b.lambda) > 1e-7 * std::max(1.0, scale)) return false;
    double d = 0.0;
    for (std::size_t i = 0; i < a.x.size(); ++i) d = std::max(d, std::abs(a.x[i] - b.x[i]));
    return d < 1e-6;
}

OracleResult finish_oracle(std::vector<ZEigenpair> found, const Tensor& a, bool degenerate) {
    const double scale = a.max_abs();
    for (auto& p : found) canonicalize(p, a.order());
    std::sort(found.begin(), found.end(), [](const ZEigenpair& l, const ZEigenpair& r) {
        return l.residual < r.residual;
    });
    OracleResult out;
    out.degenerate = degenerate;
    out.sign_convention =
        "x and -x collapsed: odd order reported with lambda >= 0; "
        "eigenvector sign fixed to first nonzero component positive otherwise";
    for (auto& p : found) {
        bool dup = false;
        for (const auto& q : out.pairs)
            if (same_pair(p, q, scale)) {
                dup = true;
                break;
            }
        if (!dup) out.pairs.push_back(std::move(p));
    }
    std::sort(out.pairs.begin(), out.pairs.end(), [](const ZEigenpair& l, const ZEigenpair& r) {
        return l.lambda > r.lambda;
    });
    return out;
}

ZEigenpair uniform_direction_pair(const Tensor& a) {
    Vec x(static_cast<std::size_t>(a.dim()), 1.0);
    return make_pair(a, std::move(x));
}

OracleResult oracle_circle(const Tensor& a, int resolution) {
    const double tau = 2.0 * std::numbers::pi;
    const int grid = std::max(resolution, 16);
    const double scale = std::max(1.0, a.max_abs());

    auto tangential = [&a](double th) {
        Vec x{std::cos(th), std::sin(th)};
        Vec r = contract(a, x);
        return -std::sin(th) * r[0] + std::cos(th) * r[1];
    };

    std::vector<double> theta(static_cast<std::size_t>(grid) + 1), g(static_cast<std::size_t>(grid) + 1);
    double gmax = 0.0;
    for (int i = 0; i <= grid; ++i) {
        theta[static_cast<std::size_t>(i)] = tau * i / grid;
        g[static_cast<std::size_t>(i)] = tangential(theta[static_cast<std::size_t>(i)]);
        gmax = std::max(gmax, std::abs(g[static_cast<std::size_t>(i)]));
    }
    if (gmax < 1e-12 * scale) {
        // Every direction solves the eigenproblem; report one representative.
        return finish_oracle({uniform_direction_pair(a)}, a, true);
    }

    std::vector<double> roots;
    for (int i = 0; i < grid; ++i) {
        const double gi = g[static_cast<std::size_t>(i)];
        const double gj = g[static_cast<std::size_t>(i) + 1];
        if (gi == 0.0) {
            roots.push_back(theta[static_cast<std::size_t>(i)]);
        } else if (gi * gj < 0.0) {
            double lo = theta[static_cast<std::size_t>(i)], hi = theta[static_cast<std::size_t>(i) + 1];
            double flo = gi;
            for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = tangential(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((flo < 0.0) == (fm < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
    }
    // Tangencies touch zero without a sign change; hunt near-vanishing local
    // minima of |g| by ternary search.
    for (int i = 1; i < grid; ++i) {
        const double gi = std::abs(g[static_cast<std::size_t>(i)]);
        if (gi > 1e-4 * scale) continue;
        if (gi > std::abs(g[static_cast<std::size_t>(i) - 1]) || gi > std::abs(g[static_cast<std::size_t>(i) + 1]))
            continue;
        double lo = theta[static_cast<std::size_t>(i) - 1], hi = theta[static_cast<std::size_t>(i) + 1];
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
            if (std::abs(tangential(m1)) < std::abs(tangential(m2)))
                hi = m2;
            else
                lo = m1;
        }
        roots.push_back(0.5 * (lo + hi));
    }

    std::vector<ZEigenpair> found;
    for (double th : roots) {
        ZEigenpair p = make_pair(a, Vec{std::cos(th), std::sin(th)});
        if (p.residual < kOracleResidualTol) found.push_back(std::move(p));
    }
    return finish_oracle(std::move(found), a, false);
}

// d(A x^{k-1})_i / dx_j: per head tuple, each slot contributes the entry times
// the product of the other slots' factors.
std::vector<Vec> contract_jacobian(const Tensor& a, const Vec& x) {
    const int n = a.dim();
    const int slots = a.order() - 1;
    const std::size_t heads = a.head_count();
    const Vec& e = a.entries();
    std::vector<Vec> jac(static_cast<std::size_t>(n), Vec(static_cast<std::size_t>(n), 0.0));
    std::vector<int> idx(static_cast<std::size_t>(slots), 0);
    std::size_t h = 0;
    do {
        for (int s = 0; s < slots; ++s) {
            double w = 1.0;
            for (int t = 0; t < slots; ++t)
                if (t != s) w *= x[static_cast<std::size_t>(idx[static_cast<std::size_t>(t)])];
            if (w == 0.0) continue;
            const auto col = static_cast<std::size_t>(idx[static_cast<std::size_t>(s)]);
            for (int i = 0; i < n; ++i)
                jac[static_cast<std::size_t>(i)][col] += e[static_cast<std::size_t>(i) * heads + h] * w;
        }
        ++h;
    } while (next_multi_index(idx, n));
    return jac;
}

std::optional<ZEigenpair> refine_sphere(const Tensor& a, Vec x) {
    const int n = a.dim();
    const double nx = norm2(x);
    if (!(nx > 0.0)) return std::nullopt;
    for (double& e : x) e /= nx;
    double lambda = dot(x, contract(a, x));

    Eigen::VectorXd u(n + 1);
    for (int i = 0; i < n; ++i) u[i] = x[static_cast<std::size_t>(i)];
    u[n] = lambda;

    for (int iter = 0; iter < 80; ++iter) {
        Vec xi(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) xi[static_cast<std::size_t>(i)] = u[i];
        if (norm2(xi) > 10.0) return std::nullopt;
        const Vec r = contract(a, xi);
        Eigen::VectorXd f(n + 1);
        for (int i = 0; i < n; ++i) f[i] = r[static_cast<std::size_t>(i)] - u[n] * u[i];
        f[n] = 0.5 * (dot(xi, xi) - 1.0);
        if (f.lpNorm<Eigen::Infinity>() < 1e-13) break;

        const auto jr = contract_jacobian(a, xi);
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n + 1, n + 1);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) jac(i, j) = jr[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            jac(i, i) -= u[n];
            jac(i, n) = -u[i];
            jac(n, i) = u[i];
        }
        const Eigen::VectorXd du = jac.colPivHouseholderQr().solve(-f);
        if (!du.allFinite()) return std::nullopt;
        u += du;
        if (du.lpNorm<Eigen::Infinity>() < 1e-15) break;
    }

    Vec xf(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xf[static_cast<std::size_t>(i)] = u[i];
    if (!(norm2(xf) > 0.0)) return std::nullopt;
    ZEigenpair p = make_pair(a, std::move(xf));
    if (p.residual < kOracleResidualTol) return p;
    return std::nullopt;
}

OracleResult oracle_sphere(const Tensor& a, int resolution) {
    const double pi = std::numbers::pi;
    const int per_axis = std::clamp(static_cast<int>(std::lround(std::sqrt(std::max(resolution, 16)))), 4, 120);
    const double scale = std::max(1.0, a.max_abs());

    std::vector<Vec> seeds;
    for (int j = 0; j < per_axis; ++j) {
        const double th = pi * (j + 0.5) / per_axis;
        for (int i = 0; i < per_axis; ++i) {
            const double ph = 2.0 * pi * i / per_axis;
            seeds.push_back(Vec{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)});
        }
    }
    for (int axis = 0; axis < 3; ++axis)
        for (double s : {1.0, -1.0}) {
            Vec e(3, 0.0);
            e[static_cast<std::size_t>(axis)] = s;
            seeds.push_back(std::move(e));
        }
    seeds.push_back(Vec(3, 1.0 / std::sqrt(3.0)));

    double tangential_max = 0.0;
    for (const auto& s : seeds) {
        Vec x = s;
        const double nx = norm2(x);
        for (double& e : x) e /= nx;
        const Vec r = contract(a, x);
        const double lam = dot(x, r);
        Vec t = r;
        for (std::size_t i = 0; i < t.size(); ++i) t[i] -= lam * x[i];
        tangential_max = std::max(tangential_max, norm2(t));
    }
    if (tangential_max < 1e-12 * scale) return finish_oracle({uniform_direction_pair(a)}, a, true);

    std::vector<ZEigenpair> found;
    for (const auto& s : seeds)
        if (auto p = refine_sphere(a, s)) found.push_back(std::move(*p));
    return finish_oracle(std::move(found), a, false);
}

} // namespace

ZEigenpair perron_z_eigenpair(const Tensor& a, double tol, long max_iter) {
    for (double e : a.entries())
        if (e < 0.0) throw InputError("perron_z_eigenpair: tensor has negative entries");
    const double amax = a.max_abs();
    if (amax == 0.0) throw InputError("perron_z_eigenpair: zero tensor has no distinguished Perron pair");
    if (!(tol > 0.0)) throw InputError("perron_z_eigenpair: tolerance must be positive");

    const int n = a.dim();
    // Shift large enough to make the normalized map monotone on the
    // nonnegative orthant (SS-HOPM style); keeps the iteration inside the cone.
    const double alpha = a.order() * amax;
    Vec x(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));

    ZEigenpair best;
    best.residual = std::numeric_limits<double>::infinity();
    for (long it = 0; it < max_iter; ++it) {
        const Vec r = contract(a, x);
        const double lam = dot(x, r);
        double res = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = r[static_cast<std::size_t>(i)] - lam * x[static_cast<std::size_t>(i)];
            res += d * d;
        }
        res = std::sqrt(res);
        if (res < best.residual) best = ZEigenpair{lam, x, res};
        if (res < tol) return ZEigenpair{lam, x, res};

        Vec y(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            y[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i)] + alpha * x[static_cast<std::size_t>(i)];
        const double ny = norm2(y);
        if (!(ny > 0.0) || !std::isfinite(ny))
            throw SolverError("perron_z_eigenpair: iteration collapsed", best.lambda, best.x, best.residual);
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] / ny;
    }
    throw SolverError("perron_z_eigenpair: no convergence after " + std::to_string(max_iter) +
                          " iterations (best residual " + std::to_string(best.residual) + ")",
                      best.lambda, best.x, best.residual);
}

OracleResult z_eigenpairs_oracle(const Tensor& a, int resolution) {
    const int n = a.dim();
    if (n > 3) throw InputError("z_eigenpairs_oracle supports n <= 3, got n = " + std::to_string(n));
    if (a.max_abs() == 0.0) {
        // lambda = 0 for every unit x.
        OracleResult out = finish_oracle({uniform_direction_pair(a)}, a, true);
        return out;
    }
    if (n == 1) {
        // x = (1): the single entrywise sum is the eigenvalue.
        return finish_oracle({make_pair(a, Vec{1.0})}, a, false);
    }
    if (n == 2) return oracle_circle(a, resolution);
    return oracle_sphere(a, resolution);
}

namespace {

// Digraph over the all-equal-heads entries: arc j -> i when A(i, j, ..., j)
// is nonzero. Strong connectivity of this digraph implies irreducibility; for
// order 2 it is exactly the reducibility digraph.
bool diag_head_strongly_connected(const Tensor& a) {
    const int n = a.dim();
    std::vector<std::vector<int>> fwd(static_cast<std::size_t>(n)), rev(static_cast<std::size_t>(n));
    std::vector<int> idx(static_cast<std::size_t>(a.order()), 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            idx[0] = i;
            for (int s = 1; s < a.order(); ++s) idx[static_cast<std::size_t>(s)] = j;
            if (a.at(idx) != 0.0) {
                fwd[static_cast<std::size_t>(j)].push_back(i);
                rev[static_cast<std::size_t>(i)].push_back(j);
            }
        }
    auto reaches_all = [n](const std::vector<std::vector<int>>& adj) {
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int w : adj[static_cast<std::size_t>(v)])
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    ++count;
                    stack.push_back(w);
                }
        }
        return count == n;
    };
    return reaches_all(fwd) && reaches_all(rev);
}

// True when every entry with tail in I and all heads outside I vanishes.
bool subset_is_witness(const Tensor& a, std::uint32_t mask) {
    const int n = a.dim();
    const int slots = a.order() - 1;
    std::vector<int> inside, outside;
    for (int i = 0; i < n; ++i)
        ((mask >> i) & 1u ? inside : outside).push_back(i);
    if (outside.empty()) return false;

    std::vector<int> digits(static_cast<std::size_t>(slots), 0);
    std::vector<int> tuple(static_cast<std::size_t>(a.order()), 0);
    const int m = static_cast<int>(outside.size());
    for (int i : inside) {
        std::fill(digits.begin(), digits.end(), 0);
        do {
            tuple[0] = i;
            for (int s = 0; s < slots; ++s)
                tuple[static_cast<std::size_t>(s) + 1] = outside[static_cast<std::size_t>(digits[static_cast<std::size_t>(s)])];
            if (a.at(tuple) != 0.0) return false;
        } while (next_multi_index(digits, m));
    }
    return true;
}

} // namespace

Irreducibility is_irreducible(const Tensor& a) {
    const int n = a.dim();
    if (n > 20) throw InputError("is_irreducible: exhaustive subset check supports n <= 20, got n = " + std::to_string(n));
    if (n == 1) return {};
    if (diag_head_strongly_connected(a)) return {};
    const std::uint32_t full = (n >= 32) ? 0xFFFFFFFFu : ((1u << n) - 1u);
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        if (subset_is_witness(a, mask)) {
            Irreducibility out;
            out.irreducible = false;
            for (int i = 0; i < n; ++i)
                if ((mask >> i) & 1u) out.witness.push_back(i);
            return out;
        }
    }
    return {};
}

std::optional<CommonPerron> common_perron_eigenvector(const std::vector<Tensor>& tensors, double tol) {
    if (tensors.empty()) throw InputError("common_perron_eigenvector: empty tensor list");
    const int n = tensors.front().dim();
    for (const auto& t : tensors) {
        if (t.dim() != n) throw InputError("common_perron_eigenvector: tensors must share one dimension");
        for (double e : t.entries())
            if (e < 0.0) throw InputError("common_perron_eigenvector: tensors must be nonnegative");
    }
    const ZEigenpair first = perron_z_eigenpair(tensors.front());
    CommonPerron out;
    out.delta = first.x;
    for (const auto& t : tensors) {
        const Vec r = contract(t, out.delta);
        const double lam = dot(out.delta, r);
        Vec resid = r;
        for (std::size_t i = 0; i < resid.size(); ++i) resid[i] -= lam * out.delta[i];
        if (norm2(resid) / std::max(1.0, std::abs(lam)) >= tol) return std::nullopt;
        out.lambdas.push_back(lam);
    }
    return out;
}

double matrix_spectral_radius(const Tensor& a) {
    if (a.order() != 2) throw InputError("matrix_spectral_radius: order-2 tensor required");
    const int n = a.dim();
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = a.at({i, j});
    return m.eigenvalues().cwiseAbs().maxCoeff();
}

} // namespace hyperstab
