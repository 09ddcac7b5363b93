// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace wchaos {

Eigen::MatrixXd kroneckerProduct(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// (ops[0] (x) ops[1] (x) ... ) applied to `data`, a row-major array of the
/// given shape, without forming the Kronecker product. ops[k] is
/// rows_k x shape[k]; the result has shape (rows_0, rows_1, ...).
std::vector<double> applyAxisOperators(const std::vector<Eigen::MatrixXd>& ops,
                                       std::span<const int> shape, std::span<const double> data);

}  // namespace wchaos
