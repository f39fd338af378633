#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "hyperstab/dynamics.hpp"
#include "hyperstab/tensor.hpp"

// Shared example systems and the independent brute-force oracles the tests
// check the library against. Oracles deliberately use plain nested index
// loops, not the library's flat-layout walks.

namespace fixtures {

using hyperstab::PolySystem;
using hyperstab::Tensor;
using hyperstab::Vec;

// ---- example tensors ----------------------------------------------------

// All-ones with the x1*x2 coefficient split evenly: entries (1,1,2), (2,1,2),
// (1,2,1), (2,2,1) are 0.5. Componentwise map: x1^2 + x1 x2 + x2^2.
inline Tensor example_a2() {
    Tensor t = Tensor::filled(3, 2, 1.0);
    t.at({0, 0, 1}) = 0.5;
    t.at({1, 0, 1}) = 0.5;
    t.at({0, 1, 0}) = 0.5;
    t.at({1, 1, 0}) = 0.5;
    return t;
}

// Same componentwise map with the x1*x2 coefficient split as 1.5 / -0.5.
inline Tensor example_a2_tilde() {
    Tensor t = Tensor::filled(3, 2, 1.0);
    t.at({0, 0, 1}) = 1.5;
    t.at({1, 0, 1}) = 1.5;
    t.at({0, 1, 0}) = -0.5;
    t.at({1, 1, 0}) = -0.5;
    return t;
}

inline Tensor example_a1() {
    return Tensor::from_dense(2, 2, {0.1, 0.1, 0.1, 0.1});
}

inline Tensor quarter_matrix() {
    return Tensor::from_dense(2, 2, {0.25, 0.25, 0.25, 0.25});
}

// x_i+ = 0.1 x1 + 0.1 x2 + x1^2 + x1 x2 + x2^2 for both rows.
inline PolySystem example_quadratic_system() {
    PolySystem sys(2);
    sys.set_tensor(example_a1());
    sys.set_tensor(example_a2());
    return sys;
}

inline PolySystem example_quadratic_system_alt() {
    PolySystem sys(2);
    sys.set_tensor(example_a1());
    sys.set_tensor(example_a2_tilde());
    return sys;
}

// ---- brute-force oracles ------------------------------------------------

// Contraction by explicit recursion over the full multi-index tuple.
inline Vec contract_bruteforce(const Tensor& a, const Vec& x) {
    const int n = a.dim();
    const int k = a.order();
    Vec out(static_cast<std::size_t>(n), 0.0);
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    auto recurse = [&](auto&& self, int depth) -> void {
        if (depth == k) {
            double w = a.at(idx);
            for (int s = 1; s < k; ++s) w *= x[static_cast<std::size_t>(idx[static_cast<std::size_t>(s)])];
            out[static_cast<std::size_t>(idx[0])] += w;
            return;
        }
        for (int i = 0; i < n; ++i) {
            idx[static_cast<std::size_t>(depth)] = i;
            self(self, depth + 1);
        }
    };
    recurse(recurse, 0);
    return out;
}

inline double row_absolute_sum_bruteforce(const Tensor& a, int p) {
    const int n = a.dim();
    const int k = a.order();
    double sum = 0.0;
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    idx[0] = p;
    auto recurse = [&](auto&& self, int depth) -> void {
        if (depth == k) {
            sum += std::abs(a.at(idx));
            return;
        }
        for (int i = 0; i < n; ++i) {
            idx[static_cast<std::size_t>(depth)] = i;
            self(self, depth + 1);
        }
    };
    recurse(recurse, 1);
    return sum;
}

// Plain bisection on f(y) = sum_m c_m y^(m-2) - 1, independent of the
// library's bracketing/Newton scheme.
inline double bisection_root_oracle(const std::map<int, double>& coeffs) {
    auto f = [&coeffs](double y) {
        double v = -1.0;
        for (const auto& [m, c] : coeffs) v += c * std::pow(y, m - 2);
        return v;
    };
    double lo = 0.0, hi = 1.0;
    while (f(hi) <= 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Componentwise SIS step, straight from the scalar formula.
inline Vec sis_step_oracle(const hyperstab::SisParams& p, const Vec& x) {
    const int n = static_cast<int>(p.gamma.size());
    Vec out(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double pair_sum = 0.0;
        for (int j = 0; j < n; ++j) pair_sum += p.a.at({i, j}) * x[static_cast<std::size_t>(j)];
        double group_sum = 0.0;
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
                group_sum += p.b.at({i, j, l}) * x[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(l)];
        const double xi = x[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(i)] = (1.0 - p.h * p.gamma[static_cast<std::size_t>(i)]) * xi +
                                           p.h * p.beta1 * (1.0 - xi) * pair_sum +
                                           p.h * p.beta2 * (1.0 - xi) * group_sum;
    }
    return out;
}

// ---- randomness ---------------------------------------------------------

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Vec random_vec(std::mt19937_64& gen, int n, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Vec v(static_cast<std::size_t>(n));
    for (double& e : v) e = dist(gen);
    return v;
}

inline Vec random_unit_vec(std::mt19937_64& gen, int n) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Vec v(static_cast<std::size_t>(n));
    double norm = 0.0;
    do {
        norm = 0.0;
        for (double& e : v) {
            e = dist(gen);
            norm += e * e;
        }
        norm = std::sqrt(norm);
    } while (!(norm > 1e-6));
    for (double& e : v) e /= norm;
    return v;
}

inline Tensor random_tensor(std::mt19937_64& gen, int order, int dim, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Tensor t(order, dim);
    for (double& e : t.entries()) e = dist(gen);
    return t;
}

// Nonnegative supersymmetric tensor: one draw per index multiset, copied to
// all permutations.
inline Tensor random_supersymmetric(std::mt19937_64& gen, int order, int dim, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Tensor t(order, dim);
    std::vector<int> idx(static_cast<std::size_t>(order), 0);
    std::map<std::vector<int>, double> values;
    auto recurse = [&](auto&& self, int depth) -> void {
        if (depth == order) {
            std::vector<int> key = idx;
            std::sort(key.begin(), key.end());
            auto [it, inserted] = values.try_emplace(key, 0.0);
            if (inserted) it->second = dist(gen);
            t.at(idx) = it->second;
            return;
        }
        for (int i = 0; i < dim; ++i) {
            idx[static_cast<std::size_t>(depth)] = i;
            self(self, depth + 1);
        }
    };
    recurse(recurse, 0);
    return t;
}

} // namespace fixtures
