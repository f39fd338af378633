#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace hyperstab {

using Vec = std::vector<double>;

double norm2(const Vec& v);
double norm_inf(const Vec& v);
double dot(const Vec& a, const Vec& b);

/// Dense cubical tensor of a given order k and dimension n, stored row-major:
/// the flat position of (i1, ..., ik) is i1*n^(k-1) + i2*n^(k-2) + ... + ik,
/// so the first index (the tail of a hyperedge) is the slowest one and the
/// remaining head indices enumerate a contiguous block per tail. Indices are
/// 0-based throughout the C++ API; file formats use 1-based indices.
class Tensor {
public:
    Tensor(int order, int dim);

    static Tensor filled(int order, int dim, double value);
    static Tensor identity_matrix(int dim);
    /// Builds from a flat row-major entry array; validates the count and that
    /// every entry is finite.
    static Tensor from_dense(int order, int dim, Vec entries);

    int order() const noexcept { return order_; }
    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return entries_.size(); }
    /// Number of head multi-indices per tail, n^(k-1).
    std::size_t head_count() const noexcept { return entries_.size() / static_cast<std::size_t>(dim_); }

    double at(std::span<const int> idx) const;
    double& at(std::span<const int> idx);
    double at(std::initializer_list<int> idx) const;
    double& at(std::initializer_list<int> idx);

    const Vec& entries() const noexcept { return entries_; }
    Vec& entries() noexcept { return entries_; }

    double max_abs() const;
    bool is_zero() const { return max_abs() == 0.0; }

    Tensor& operator+=(const Tensor& other);
    Tensor& operator*=(double c);
    friend Tensor operator+(Tensor a, const Tensor& b) {
        a += b;
        return a;
    }
    friend Tensor operator*(double c, Tensor a) {
        a *= c;
        return a;
    }

private:
    std::size_t flat(std::span<const int> idx) const;

    int order_;
    int dim_;
    Vec entries_;
};

/// v_i = sum over all head multi-indices I of A_{i,I} * x_{i2} * ... * x_{ik}.
/// For order 2 this is the matrix-vector product.
Vec contract(const Tensor& a, const Vec& x);

/// Entrywise absolute value.
Tensor abs_tensor(const Tensor& a);

/// Sum of |A_{p,I}| over every head multi-index I, for a fixed tail p (0-based).
double row_absolute_sum(const Tensor& a, int p);

/// True iff entries agree within tol across all permutations of each index tuple.
bool is_supersymmetric(const Tensor& a, double tol);

/// x+ = A_{k-1} x^{k-1} + ... + A_1 x + b, held as a map from tensor order m
/// (2..k) to the tensor carrying the degree-(m-1) term, plus an optional
/// constant vector. Absent orders are zero tensors.
class PolySystem {
public:
    explicit PolySystem(int dim);

    /// Inserts or replaces the tensor for its own order. The dimension must match.
    void set_tensor(Tensor t);
    /// nullptr when no tensor of that order is stored.
    const Tensor* tensor(int order) const;
    const std::map<int, Tensor>& tensors() const noexcept { return tensors_; }

    void set_constant(Vec b);
    void clear_constant() { constant_.reset(); }
    const std::optional<Vec>& constant() const noexcept { return constant_; }

    int dim() const noexcept { return dim_; }
    /// Largest stored tensor order; 0 when no tensor is stored.
    int max_order() const;

private:
    int dim_;
    std::map<int, Tensor> tensors_;
    std::optional<Vec> constant_;
};

/// One step of the system: sum of contractions over all stored tensors plus
/// the constant term when present.
Vec evaluate(const PolySystem& sys, const Vec& x);

} // namespace hyperstab
