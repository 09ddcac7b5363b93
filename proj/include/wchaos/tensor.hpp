// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wchaos {

/// Dense real tensor of order n over R^d, stored row-major in index-tuple
/// order. Order 0 holds a single scalar.
class Tensor {
public:
    Tensor() : Tensor(0, 1) {}

    /// Zero tensor of the given shape.
    Tensor(int order, int dim);

    /// Tensor from row-major coefficients; size must be dim^order and every
    /// entry finite.
    Tensor(int order, int dim, std::vector<double> coeffs);

    static Tensor scalar(double value);

    /// Basis vector e_i (0-based) of R^dim.
    static Tensor basis(int dim, int index);

    [[nodiscard]] int order() const { return order_; }
    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] std::size_t size() const { return coeffs_.size(); }
    [[nodiscard]] std::span<const double> coeffs() const { return coeffs_; }

    /// Entry at a full index tuple (length == order).
    [[nodiscard]] double at(std::span<const int> index) const;
    [[nodiscard]] double operator[](std::size_t flat) const { return coeffs_[flat]; }

    /// Value of an order-0 tensor.
    [[nodiscard]] double value() const;

    [[nodiscard]] std::size_t flatIndex(std::span<const int> index) const;

private:
    int order_;
    int dim_;
    std::vector<double> coeffs_;
};

/// Tensor invariant under every permutation of its indices. Instances are
/// only produced by symmetrize() or by builders that are symmetric by
/// construction, so symmetry holds bitwise.
class SymTensor {
public:
    SymTensor() = default;

    /// Order-2 tensor from a row-major d x d matrix, replaced by (A + A^T)/2.
    static SymTensor fromMatrix(int dim, std::span<const double> rowMajor);

    static SymTensor scalar(double value);

    /// symmetrize(e_{i1} (x) ... (x) e_{in}) for 0-based indices.
    static SymTensor basisProduct(int dim, std::span<const int> indices);

    [[nodiscard]] const Tensor& tensor() const { return t_; }
    operator const Tensor&() const { return t_; }  // NOLINT(google-explicit-constructor)

    [[nodiscard]] int order() const { return t_.order(); }
    [[nodiscard]] int dim() const { return t_.dim(); }
    [[nodiscard]] std::span<const double> coeffs() const { return t_.coeffs(); }
    [[nodiscard]] double at(std::span<const int> index) const { return t_.at(index); }

    [[nodiscard]] SymTensor scaled(double c) const;
    [[nodiscard]] SymTensor plus(const SymTensor& other) const;

private:
    explicit SymTensor(Tensor t) : t_(std::move(t)) {}
    friend SymTensor symmetrize(const Tensor& t);

    Tensor t_;
};

/// Average of t over all permutations of its index positions. Works orbit by
/// orbit: one pass per non-decreasing index tuple, writing the orbit mean to
/// every distinct arrangement.
SymTensor symmetrize(const Tensor& t);

/// Contraction of order p:
///   out[j_1..j_{n-p}, k_1..k_{m-p}] = sum_i f[i_1..i_p, j..] g[i_1..i_p, k..].
/// p = 0 is the tensor product, p = n = m the scalar <f, g>.
Tensor contract(const Tensor& f, const Tensor& g, int p);

/// ||f (x)_p f||^2 for a symmetric f, without keeping the contraction around.
double contractionNormSquared(const SymTensor& f, int p);

/// ||symmetrize(f (x)_0 f)||^2 for a symmetric f, from the contraction norms
/// of f instead of the order-2n tensor.
double symmetrizedSquareNormSquared(const SymTensor& f);

double innerProduct(const Tensor& f, const Tensor& g);
double norm(const Tensor& f);
Tensor add(const Tensor& f, const Tensor& g);
Tensor scale(const Tensor& f, double c);

/// Number of entries d^n, throwing std::length_error if it would not fit.
std::size_t tensorSize(int order, int dim);

}  // namespace wchaos
