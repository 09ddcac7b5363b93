// SPDX-License-Identifier: Apache-2.0
#include "wchaos/tensor.hpp"

#include "wchaos/combinatorics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace wchaos {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void requireSameShape(const Tensor& f, const Tensor& g, const char* what)
{
    if (f.order() != g.order() || f.dim() != g.dim()) {
        throw std::invalid_argument(std::string(what) + ": shape mismatch (order " +
                                    std::to_string(f.order()) + "/" + std::to_string(g.order()) +
                                    ", dim " + std::to_string(f.dim()) + "/" +
                                    std::to_string(g.dim()) + ")");
    }
}

}  // namespace

std::size_t tensorSize(int order, int dim)
{
    if (order < 0 || dim < 1) {
        throw std::invalid_argument("tensor order must be >= 0 and dim >= 1");
    }
    constexpr std::size_t cap = std::size_t{1} << 34;
    std::size_t n = 1;
    for (int i = 0; i < order; ++i) {
        if (n > cap / static_cast<std::size_t>(dim)) {
            throw std::length_error("tensor of order " + std::to_string(order) + " over dim " +
                                    std::to_string(dim) + " is too large to store densely");
        }
        n *= static_cast<std::size_t>(dim);
    }
    return n;
}

Tensor::Tensor(int order, int dim)
    : order_(order), dim_(dim), coeffs_(tensorSize(order, dim), 0.0)
{
}

Tensor::Tensor(int order, int dim, std::vector<double> coeffs)
    : order_(order), dim_(dim), coeffs_(std::move(coeffs))
{
    if (coeffs_.size() != tensorSize(order, dim)) {
        throw std::invalid_argument("tensor coefficient count " + std::to_string(coeffs_.size()) +
                                    " does not match dim^order");
    }
    for (double c : coeffs_) {
        if (!std::isfinite(c)) {
            throw std::invalid_argument("tensor coefficients must be finite");
        }
    }
}

Tensor Tensor::scalar(double value)
{
    return Tensor(0, 1, {value});
}

Tensor Tensor::basis(int dim, int index)
{
    if (index < 0 || index >= dim) {
        throw std::invalid_argument("basis index out of range");
    }
    std::vector<double> c(static_cast<std::size_t>(dim), 0.0);
    c[static_cast<std::size_t>(index)] = 1.0;
    return Tensor(1, dim, std::move(c));
}

std::size_t Tensor::flatIndex(std::span<const int> index) const
{
    if (static_cast<int>(index.size()) != order_) {
        throw std::invalid_argument("index tuple length differs from tensor order");
    }
    std::size_t flat = 0;
    for (int i : index) {
        if (i < 0 || i >= dim_) {
            throw std::out_of_range("tensor index out of range");
        }
        flat = flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
    }
    return flat;
}

double Tensor::at(std::span<const int> index) const
{
    return coeffs_[flatIndex(index)];
}

double Tensor::value() const
{
    if (order_ != 0) {
        throw std::logic_error("value() requires an order-0 tensor");
    }
    return coeffs_[0];
}

SymTensor SymTensor::fromMatrix(int dim, std::span<const double> rowMajor)
{
    const auto d = static_cast<std::size_t>(dim);
    if (rowMajor.size() != tensorSize(2, dim)) {
        throw std::invalid_argument("fromMatrix: expected dim*dim entries");
    }
    std::vector<double> c(d * d);
    for (std::size_t i = 0; i < d; ++i) {
        c[i * d + i] = rowMajor[i * d + i];
        for (std::size_t j = i + 1; j < d; ++j) {
            const double v = 0.5 * (rowMajor[i * d + j] + rowMajor[j * d + i]);
            c[i * d + j] = v;
            c[j * d + i] = v;
        }
    }
    return SymTensor(Tensor(2, dim, std::move(c)));
}

SymTensor SymTensor::scalar(double value)
{
    return SymTensor(Tensor::scalar(value));
}

SymTensor SymTensor::basisProduct(int dim, std::span<const int> indices)
{
    Tensor t(static_cast<int>(indices.size()), dim);
    std::vector<double> c(t.size(), 0.0);
    c[t.flatIndex(indices)] = 1.0;
    return symmetrize(Tensor(t.order(), dim, std::move(c)));
}

SymTensor SymTensor::scaled(double c) const
{
    return SymTensor(scale(t_, c));
}

SymTensor SymTensor::plus(const SymTensor& other) const
{
    return SymTensor(add(t_, other.t_));
}

SymTensor symmetrize(const Tensor& t)
{
    const int n = t.order();
    if (n <= 1) {
        return SymTensor(t);
    }
    std::vector<double> out(t.size(), 0.0);
    std::vector<int> perm(static_cast<std::size_t>(n));
    forEachSortedTuple(n, t.dim(), [&](std::span<const int> sorted) {
        // Distinct arrangements of the multiset; the n!-fold average weights
        // each of them equally.
        std::copy(sorted.begin(), sorted.end(), perm.begin());
        double sum = 0.0;
        int count = 0;
        do {
            sum += t[t.flatIndex(perm)];
            ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        const double mean = sum / count;
        std::copy(sorted.begin(), sorted.end(), perm.begin());
        do {
            out[t.flatIndex(perm)] = mean;
        } while (std::next_permutation(perm.begin(), perm.end()));
    });
    return SymTensor(Tensor(n, t.dim(), std::move(out)));
}

Tensor contract(const Tensor& f, const Tensor& g, int p)
{
    if (f.dim() != g.dim()) {
        throw std::invalid_argument("contract: dimension mismatch");
    }
    if (p < 0 || p > std::min(f.order(), g.order())) {
        throw std::invalid_argument("contract: order p=" + std::to_string(p) +
                                    " outside [0, min(n, m)]");
    }
    const int d = f.dim();
    const auto rows = static_cast<Eigen::Index>(tensorSize(p, d));
    const auto fCols = static_cast<Eigen::Index>(tensorSize(f.order() - p, d));
    const auto gCols = static_cast<Eigen::Index>(tensorSize(g.order() - p, d));
    const int outOrder = f.order() + g.order() - 2 * p;

    Eigen::Map<const RowMatrix> fm(f.coeffs().data(), rows, fCols);
    Eigen::Map<const RowMatrix> gm(g.coeffs().data(), rows, gCols);
    std::vector<double> out(tensorSize(outOrder, d));
    Eigen::Map<RowMatrix> om(out.data(), fCols, gCols);
    om.noalias() = fm.transpose() * gm;
    return Tensor(outOrder, d, std::move(out));
}

double contractionNormSquared(const SymTensor& f, int p)
{
    if (p == 0 || p == f.order()) {
        const double n2 = innerProduct(f, f);
        return n2 * n2;
    }
    const Tensor c = contract(f, f, p);
    return innerProduct(c, c);
}

double symmetrizedSquareNormSquared(const SymTensor& f)
{
    // (2n)! ||(f (x) f)_s||^2 = (n!)^2 [ 2 ||f||^4 + sum_{p=1}^{n-1} C(n,p)^2 ||f (x)_p f||^2 ]
    const int n = f.order();
    const double f2 = innerProduct(f, f);
    double bracket = 2.0 * f2 * f2;
    for (int p = 1; p <= n - 1; ++p) {
        const double c = binomial(n, p);
        bracket += c * c * contractionNormSquared(f, p);
    }
    const double nf = factorial(n);
    return nf * nf / factorial(2 * n) * bracket;
}

double innerProduct(const Tensor& f, const Tensor& g)
{
    requireSameShape(f, g, "innerProduct");
    double s = 0.0;
    const auto a = f.coeffs();
    const auto b = g.coeffs();
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double norm(const Tensor& f)
{
    return std::sqrt(innerProduct(f, f));
}

Tensor add(const Tensor& f, const Tensor& g)
{
    requireSameShape(f, g, "add");
    std::vector<double> c(f.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = f[i] + g[i];
    }
    return Tensor(f.order(), f.dim(), std::move(c));
}

Tensor scale(const Tensor& f, double c)
{
    std::vector<double> out(f.coeffs().begin(), f.coeffs().end());
    for (double& v : out) {
        v *= c;
    }
    return Tensor(f.order(), f.dim(), std::move(out));
}

}  // namespace wchaos
