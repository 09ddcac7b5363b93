// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wchaos/chaos.hpp"
#include "wchaos/kron.hpp"
#include "wchaos/tensor.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace wchaos {

enum class ProcessKind { BrownianMotion, FractionalBM, BrownianSheet };

/// Covariance of one of the supported centered Gaussian processes:
///   fBm:    R_H(t, s) = (s^{2H} + t^{2H} - |t - s|^{2H}) / 2
///   BM:     fBm with H = 1/2
///   sheet:  prod_i min(x_i, y_i) on [0,1]^n
class CovarianceModel {
public:
    static CovarianceModel brownianMotion();
    static CovarianceModel fractionalBM(double hurst);
    static CovarianceModel brownianSheet(int dims);

    [[nodiscard]] ProcessKind kind() const { return kind_; }
    [[nodiscard]] double hurst() const { return hurst_; }
    [[nodiscard]] int dims() const { return dims_; }
    [[nodiscard]] bool isSheet() const { return kind_ == ProcessKind::BrownianSheet; }

    /// Covariance for one-parameter processes.
    [[nodiscard]] double covariance(double s, double t) const;
    /// Covariance for any kind; points have length dims().
    [[nodiscard]] double covariance(std::span<const double> x, std::span<const double> y) const;

    /// E[(X_b - X_a)(X_e - X_c)] for disjoint or equal cells [a,b], [c,e] of
    /// a one-parameter process (per axis for the sheet).
    [[nodiscard]] double incrementCovariance(double a, double b, double c, double e) const;

    bool operator==(const CovarianceModel&) const = default;

private:
    CovarianceModel(ProcessKind kind, double hurst, int dims)
        : kind_(kind), hurst_(hurst), dims_(dims)
    {
    }

    ProcessKind kind_;
    double hurst_;
    int dims_;
};

/// Partition 0 = t_0 < t_1 < ... < t_d = 1 of [0,1].
class Grid {
public:
    static Grid uniform(int cells);
    /// Cells [r^{k+1}, r^k] for k = 0..cells-2 plus [0, r^{cells-1}]: widths
    /// shrink by `ratio` toward the origin.
    static Grid geometric(int cells, double ratio);
    /// cells-1 geometric cells covering [floor, 1] plus the cell [0, floor].
    static Grid geometricDownTo(int cells, double floor);
    static Grid fromNodes(std::vector<double> nodes);

    [[nodiscard]] int cells() const { return static_cast<int>(nodes_.size()) - 1; }
    [[nodiscard]] const std::vector<double>& nodes() const { return nodes_; }
    [[nodiscard]] double lower(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] double upper(int i) const { return nodes_[static_cast<std::size_t>(i) + 1]; }
    [[nodiscard]] double midpoint(int i) const { return 0.5 * (lower(i) + upper(i)); }
    [[nodiscard]] double width(int i) const { return upper(i) - lower(i); }

    bool operator==(const Grid&) const = default;

private:
    explicit Grid(std::vector<double> nodes) : nodes_(std::move(nodes)) {}
    std::vector<double> nodes_;
};

/// Generators 1_{cell} of one axis: their Gram matrix and a lower-triangular
/// factor with gram = factor * factor^T. Row i of the factor holds the
/// orthonormal coordinates of the i-th cell indicator.
struct AxisEmbedding {
    Grid grid;
    Eigen::MatrixXd gram;
    Eigen::MatrixXd factor;
    double jitter = 0.0;  ///< relative diagonal jitter that was needed (0 if none)
};

/// Finite orthonormal coordinates for a process on a grid. Generators are the
/// product cells of the axis grids in row-major order; the Gram matrix and the
/// factor are Kronecker products of the per-axis ones.
class GridEmbedding {
public:
    GridEmbedding(CovarianceModel model, std::vector<AxisEmbedding> axes);

    [[nodiscard]] const CovarianceModel& model() const { return model_; }
    [[nodiscard]] const std::vector<AxisEmbedding>& axes() const { return axes_; }
    [[nodiscard]] const AxisEmbedding& axis(int i) const { return axes_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] int axisCount() const { return static_cast<int>(axes_.size()); }
    [[nodiscard]] int generatorCount() const;

    /// Dense D x D matrices; throws std::length_error for D > 8192.
    [[nodiscard]] Eigen::MatrixXd gram() const;
    [[nodiscard]] Eigen::MatrixXd factor() const;

    /// Axis cell indices of generator g.
    [[nodiscard]] std::vector<int> cellIndex(int generator) const;

private:
    CovarianceModel model_;
    std::vector<AxisEmbedding> axes_;
};

/// Uniform grid with `cellsPerAxis` cells on every axis.
GridEmbedding buildEmbedding(const CovarianceModel& model, int cellsPerAxis);
/// Same grid on every axis.
GridEmbedding buildEmbedding(const CovarianceModel& model, const Grid& axisGrid);

/// Factor of a symmetric positive semidefinite matrix. The matrix is scaled
/// to unit diagonal, then Cholesky is retried with eps * I added, eps doubling
/// from 1e-14 up to 1e-10. Throws NumericalError if all attempts fail.
struct Factorization {
    Eigen::MatrixXd factor;
    double jitter = 0.0;
};
Factorization factorGram(const Eigen::MatrixXd& gram);

using Kernel1D = std::function<double(double, double)>;
using KernelND = std::function<double(std::span<const double>, std::span<const double>)>;

/// K(x, y) = prod_i factors[i](x_i, y_i).
struct ProductKernel {
    std::vector<Kernel1D> factors;

    double operator()(std::span<const double> x, std::span<const double> y) const;
};

/// Orthonormal coordinates L^T C L of the midpoint collocation
/// C[i,j] = K(mid_i, mid_j) on one axis.
Eigen::MatrixXd embedAxisKernel(const Kernel1D& kernel, const AxisEmbedding& axis);

/// Order-2 kernel of a one-parameter process in orthonormal coordinates.
SymTensor embedKernel2(const Kernel1D& kernel, const GridEmbedding& emb);
/// Product kernel: Kronecker product of the per-axis coordinates.
SymTensor embedKernel2(const ProductKernel& kernel, const GridEmbedding& emb);
/// General kernel collocated at product-cell midpoints with the dense factor.
SymTensor embedKernelND(const KernelND& kernel, const GridEmbedding& emb);

/// Process values on the node lattice of the embedding, with the sample that
/// generated them. One-parameter processes: d+1 values, value 0 at t = 0.
/// Sheets: (d_1+1) x ... x (d_n+1) row-major lattice, zero on the axes.
struct PathSample {
    CovarianceModel model;
    std::vector<Grid> grids;
    std::vector<double> values;
    GaussianSample xi;

    [[nodiscard]] double valueAt(std::span<const int> nodeIndex) const;
};

PathSample samplePath(const GridEmbedding& emb, const GaussianSample& xi);

}  // namespace wchaos
