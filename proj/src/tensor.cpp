#include "hyperstab/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>

#include "hyperstab/detail/odometer.hpp"
#include "hyperstab/errors.hpp"

namespace hyperstab {

using detail::next_multi_index;

double norm2(const Vec& v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return std::sqrt(s);
}

double norm_inf(const Vec& v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
}

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

namespace {

std::size_t checked_entry_count(int order, int dim) {
    if (order < 2) throw InputError("tensor order must be >= 2, got " + std::to_string(order));
    if (dim < 1) throw InputError("tensor dimension must be >= 1, got " + std::to_string(dim));
    std::size_t count = 1;
    for (int i = 0; i < order; ++i) {
        if (count > (std::size_t{1} << 40) / static_cast<std::size_t>(dim))
            throw InputError("tensor too large: dim^order exceeds the dense storage budget");
        count *= static_cast<std::size_t>(dim);
    }
    return count;
}

} // namespace

Tensor::Tensor(int order, int dim) : order_(order), dim_(dim), entries_(checked_entry_count(order, dim), 0.0) {}

Tensor Tensor::filled(int order, int dim, double value) {
    Tensor t(order, dim);
    std::fill(t.entries_.begin(), t.entries_.end(), value);
    return t;
}

Tensor Tensor::identity_matrix(int dim) {
    Tensor t(2, dim);
    for (int i = 0; i < dim; ++i) t.entries_[static_cast<std::size_t>(i) * dim + i] = 1.0;
    return t;
}

Tensor Tensor::from_dense(int order, int dim, Vec entries) {
    const std::size_t expected = checked_entry_count(order, dim);
    if (entries.size() != expected)
        throw InputError("dense tensor entry count mismatch: expected " + std::to_string(expected) + ", got " +
                         std::to_string(entries.size()));
    for (double e : entries)
        if (!std::isfinite(e)) throw InputError("tensor entries must be finite");
    Tensor t(order, dim);
    t.entries_ = std::move(entries);
    return t;
}

std::size_t Tensor::flat(std::span<const int> idx) const {
    if (static_cast<int>(idx.size()) != order_)
        throw InputError("index tuple has " + std::to_string(idx.size()) + " components, tensor order is " +
                         std::to_string(order_));
    std::size_t f = 0;
    for (int d : idx) {
        if (d < 0 || d >= dim_)
            throw InputError("tensor index " + std::to_string(d) + " out of range [0, " + std::to_string(dim_ - 1) +
                             "]");
        f = f * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(d);
    }
    return f;
}

double Tensor::at(std::span<const int> idx) const { return entries_[flat(idx)]; }
double& Tensor::at(std::span<const int> idx) { return entries_[flat(idx)]; }
double Tensor::at(std::initializer_list<int> idx) const { return at(std::span<const int>(idx.begin(), idx.size())); }
double& Tensor::at(std::initializer_list<int> idx) { return at(std::span<const int>(idx.begin(), idx.size())); }

double Tensor::max_abs() const {
    double m = 0.0;
    for (double e : entries_) m = std::max(m, std::abs(e));
    return m;
}

Tensor& Tensor::operator+=(const Tensor& other) {
    if (order_ != other.order_ || dim_ != other.dim_) throw InputError("tensor shape mismatch in addition");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

Tensor& Tensor::operator*=(double c) {
    for (double& e : entries_) e *= c;
    return *this;
}

Vec contract(const Tensor& a, const Vec& x) {
    const int n = a.dim();
    if (static_cast<int>(x.size()) != n)
        throw InputError("contract: vector length " + std::to_string(x.size()) + " does not match tensor dimension " +
                         std::to_string(n));
    const std::size_t heads = a.head_count();
    const Vec& e = a.entries();
    Vec out(static_cast<std::size_t>(n), 0.0);
    std::vector<int> idx(static_cast<std::size_t>(a.order() - 1), 0);
    std::size_t h = 0;
    do {
        double w = 1.0;
        for (int d : idx) w *= x[static_cast<std::size_t>(d)];
        if (w != 0.0) {
            for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] += e[static_cast<std::size_t>(i) * heads + h] * w;
        }
        ++h;
    } while (next_multi_index(idx, n));
    return out;
}

Tensor abs_tensor(const Tensor& a) {
    Tensor r = a;
    for (double& e : r.entries()) e = std::abs(e);
    return r;
}

double row_absolute_sum(const Tensor& a, int p) {
    if (p < 0 || p >= a.dim())
        throw InputError("row index " + std::to_string(p) + " out of range [0, " + std::to_string(a.dim() - 1) + "]");
    const std::size_t heads = a.head_count();
    const Vec& e = a.entries();
    double s = 0.0;
    for (std::size_t h = 0; h < heads; ++h) s += std::abs(e[static_cast<std::size_t>(p) * heads + h]);
    return s;
}

bool is_supersymmetric(const Tensor& a, double tol) {
    // Entries sharing the same index multiset must agree; track min/max per
    // sorted index tuple in one pass.
    const int n = a.dim();
    const int k = a.order();
    std::unordered_map<std::size_t, std::pair<double, double>> range;
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    std::vector<int> sorted(static_cast<std::size_t>(k), 0);
    std::size_t f = 0;
    do {
        sorted.assign(idx.begin(), idx.end());
        std::sort(sorted.begin(), sorted.end());
        std::size_t key = 0;
        for (int d : sorted) key = key * static_cast<std::size_t>(n) + static_cast<std::size_t>(d);
        const double v = a.entries()[f];
        auto [it, inserted] = range.try_emplace(key, v, v);
        if (!inserted) {
            it->second.first = std::min(it->second.first, v);
            it->second.second = std::max(it->second.second, v);
        }
        ++f;
    } while (next_multi_index(idx, n));
    for (const auto& [key, mm] : range)
        if (mm.second - mm.first > tol) return false;
    return true;
}

PolySystem::PolySystem(int dim) : dim_(dim) {
    if (dim < 1) throw InputError("system dimension must be >= 1, got " + std::to_string(dim));
}

void PolySystem::set_tensor(Tensor t) {
    if (t.dim() != dim_)
        throw InputError("tensor dimension " + std::to_string(t.dim()) + " does not match system dimension " +
                         std::to_string(dim_));
    tensors_.insert_or_assign(t.order(), std::move(t));
}

const Tensor* PolySystem::tensor(int order) const {
    auto it = tensors_.find(order);
    return it == tensors_.end() ? nullptr : &it->second;
}

void PolySystem::set_constant(Vec b) {
    if (static_cast<int>(b.size()) != dim_)
        throw InputError("constant vector length " + std::to_string(b.size()) + " does not match system dimension " +
                         std::to_string(dim_));
    for (double e : b)
        if (!std::isfinite(e)) throw InputError("constant vector entries must be finite");
    constant_ = std::move(b);
}

int PolySystem::max_order() const { return tensors_.empty() ? 0 : tensors_.rbegin()->first; }

Vec evaluate(const PolySystem& sys, const Vec& x) {
    if (static_cast<int>(x.size()) != sys.dim())
        throw InputError("evaluate: state length " + std::to_string(x.size()) + " does not match system dimension " +
                         std::to_string(sys.dim()));
    Vec out(x.size(), 0.0);
    for (const auto& [order, t] : sys.tensors()) {
        Vec part = contract(t, x);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += part[i];
    }
    if (sys.constant()) {
        const Vec& b = *sys.constant();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    }
    return out;
}

} // namespace hyperstab
