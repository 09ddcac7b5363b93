// SPDX-License-Identifier: Apache-2.0
#include "wchaos/kron.hpp"

#include <stdexcept>

namespace wchaos {

Eigen::MatrixXd kroneckerProduct(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

std::vector<double> applyAxisOperators(const std::vector<Eigen::MatrixXd>& ops,
                                       std::span<const int> shape, std::span<const double> data)
{
    using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    if (ops.size() != shape.size()) {
        throw std::invalid_argument("applyAxisOperators: one operator per axis required");
    }
    std::vector<Eigen::Index> dims(shape.begin(), shape.end());
    std::size_t total = 1;
    for (auto n : dims) {
        total *= static_cast<std::size_t>(n);
    }
    if (total != data.size()) {
        throw std::invalid_argument("applyAxisOperators: data size does not match shape");
    }
    std::vector<double> cur(data.begin(), data.end());
    for (std::size_t k = 0; k < ops.size(); ++k) {
        const auto& op = ops[k];
        if (op.cols() != dims[k]) {
            throw std::invalid_argument("applyAxisOperators: operator/axis size mismatch");
        }
        Eigen::Index pre = 1;
        Eigen::Index post = 1;
        for (std::size_t j = 0; j < k; ++j) {
            pre *= dims[j];
        }
        for (std::size_t j = k + 1; j < dims.size(); ++j) {
            post *= dims[j];
        }
        std::vector<double> next(static_cast<std::size_t>(pre * op.rows() * post));
        for (Eigen::Index a = 0; a < pre; ++a) {
            Eigen::Map<const RowMatrix> in(cur.data() + a * dims[k] * post, dims[k], post);
            Eigen::Map<RowMatrix> out(next.data() + a * op.rows() * post, op.rows(), post);
            out.noalias() = op * in;
        }
        dims[k] = op.rows();
        cur = std::move(next);
    }
    return cur;
}

}  // namespace wchaos
