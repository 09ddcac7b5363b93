// SPDX-License-Identifier: Apache-2.0
#include "wchaos/embedding.hpp"

#include "wchaos/errors.hpp"
#include "wchaos/kron.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace wchaos {

CovarianceModel CovarianceModel::brownianMotion()
{
    return {ProcessKind::BrownianMotion, 0.5, 1};
}

CovarianceModel CovarianceModel::fractionalBM(double hurst)
{
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw std::invalid_argument("Hurst parameter must lie in (0, 1)");
    }
    return {ProcessKind::FractionalBM, hurst, 1};
}

CovarianceModel CovarianceModel::brownianSheet(int dims)
{
    if (dims < 1) {
        throw std::invalid_argument("Brownian sheet needs at least one dimension");
    }
    return {ProcessKind::BrownianSheet, 0.5, dims};
}

double CovarianceModel::covariance(double s, double t) const
{
    if (dims_ != 1) {
        throw std::invalid_argument("scalar covariance requested for a multi-parameter sheet");
    }
    if (kind_ != ProcessKind::FractionalBM) {
        return std::min(s, t);
    }
    const double h2 = 2.0 * hurst_;
    return 0.5 * (std::pow(s, h2) + std::pow(t, h2) - std::pow(std::abs(t - s), h2));
}

double CovarianceModel::covariance(std::span<const double> x, std::span<const double> y) const
{
    if (static_cast<int>(x.size()) != dims_ || static_cast<int>(y.size()) != dims_) {
        throw std::invalid_argument("covariance: point dimension mismatch");
    }
    if (!isSheet()) {
        return covariance(x[0], y[0]);
    }
    double c = 1.0;
    for (int i = 0; i < dims_; ++i) {
        c *= std::min(x[i], y[i]);
    }
    return c;
}

double CovarianceModel::incrementCovariance(double a, double b, double c, double e) const
{
    const double h2 = 2.0 * hurst_;
    if (a == c && b == e) {
        return std::pow(b - a, h2);
    }
    if (c < a) {
        std::swap(a, c);
        std::swap(b, e);
    }
    if (b > c) {
        throw std::invalid_argument("incrementCovariance: cells overlap");
    }
    if (h2 == 1.0) {
        return 0.0;
    }
    // (R(b,e) - R(b,c) - R(a,e) + R(a,c)) reduces to
    // ((e-a)^{2H} - (e-b)^{2H} - (c-a)^{2H} + (c-b)^{2H}) / 2; each pair
    // difference is evaluated through expm1/log1p so distant cells keep
    // their relative accuracy.
    const auto pairDiff = [&](double x) {
        if (x == b) {
            return std::pow(x - a, h2);
        }
        return std::pow(x - b, h2) * std::expm1(h2 * std::log1p((b - a) / (x - b)));
    };
    return 0.5 * (pairDiff(e) - pairDiff(c));
}

Grid Grid::uniform(int cells)
{
    if (cells < 1) {
        throw std::invalid_argument("grid needs at least one cell");
    }
    std::vector<double> nodes(static_cast<std::size_t>(cells) + 1);
    for (int i = 0; i <= cells; ++i) {
        nodes[static_cast<std::size_t>(i)] = static_cast<double>(i) / cells;
    }
    nodes.back() = 1.0;
    return Grid(std::move(nodes));
}

Grid Grid::geometric(int cells, double ratio)
{
    if (cells < 1) {
        throw std::invalid_argument("grid needs at least one cell");
    }
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw std::invalid_argument("geometric grid ratio must lie in (0, 1)");
    }
    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(cells) + 1);
    nodes.push_back(0.0);
    for (int k = cells - 1; k >= 0; --k) {
        nodes.push_back(std::pow(ratio, k));
    }
    if (nodes[1] <= 0.0) {
        throw std::invalid_argument("geometric grid underflows double precision");
    }
    return Grid(std::move(nodes));
}

Grid Grid::geometricDownTo(int cells, double floor)
{
    if (cells < 2) {
        throw std::invalid_argument("geometricDownTo needs at least two cells");
    }
    if (!(floor > 0.0 && floor < 1.0)) {
        throw std::invalid_argument("geometricDownTo floor must lie in (0, 1)");
    }
    const int geo = cells - 1;
    const double logFloor = std::log(floor);
    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(cells) + 1);
    nodes.push_back(0.0);
    nodes.push_back(floor);
    for (int k = geo - 1; k >= 1; --k) {
        nodes.push_back(std::exp(logFloor * k / geo));
    }
    nodes.push_back(1.0);
    return Grid(std::move(nodes));
}

Grid Grid::fromNodes(std::vector<double> nodes)
{
    if (nodes.size() < 2 || nodes.front() != 0.0 || nodes.back() != 1.0) {
        throw std::invalid_argument("grid nodes must start at 0 and end at 1");
    }
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (!(nodes[i] > nodes[i - 1])) {
            throw std::invalid_argument("grid nodes must be strictly increasing");
        }
    }
    return Grid(std::move(nodes));
}

Factorization factorGram(const Eigen::MatrixXd& gram)
{
    const Eigen::Index d = gram.rows();
    if (gram.cols() != d) {
        throw std::invalid_argument("factorGram: matrix is not square");
    }
    Eigen::VectorXd scale(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        if (!(gram(i, i) > 0.0)) {
            throw NumericalError("degenerate model/grid: Gram diagonal entry " + std::to_string(i) +
                                 " is not positive");
        }
        scale(i) = std::sqrt(gram(i, i));
    }
    const Eigen::MatrixXd corr = scale.cwiseInverse().asDiagonal() * gram * scale.cwiseInverse().asDiagonal();

    const auto attempt = [&](double eps) -> std::optional<Eigen::MatrixXd> {
        Eigen::MatrixXd shifted = corr;
        shifted.diagonal().array() += eps;
        Eigen::LLT<Eigen::MatrixXd> llt(shifted);
        if (llt.info() != Eigen::Success) {
            return std::nullopt;
        }
        Eigen::MatrixXd l = llt.matrixL();
        const double err = (corr - l * l.transpose()).cwiseAbs().maxCoeff();
        if (!std::isfinite(err) || err > 1e-10) {
            return std::nullopt;
        }
        return l;
    };

    double eps = 0.0;
    while (true) {
        if (auto l = attempt(eps)) {
            return {scale.asDiagonal() * (*l), eps};
        }
        eps = eps == 0.0 ? 1e-14 : 2.0 * eps;
        if (eps > 1e-10) {
            throw NumericalError("degenerate model/grid: Gram matrix not factorizable with jitter <= 1e-10");
        }
    }
}

namespace {

AxisEmbedding embedAxis(const CovarianceModel& axisModel, const Grid& grid)
{
    const int d = grid.cells();
    Eigen::MatrixXd gram(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double g = axisModel.incrementCovariance(grid.lower(i), grid.upper(i),
                                                           grid.lower(j), grid.upper(j));
            gram(i, j) = g;
            gram(j, i) = g;
        }
    }
    auto f = factorGram(gram);
    return {grid, std::move(gram), std::move(f.factor), f.jitter};
}

}  // namespace

GridEmbedding::GridEmbedding(CovarianceModel model, std::vector<AxisEmbedding> axes)
    : model_(model), axes_(std::move(axes))
{
    if (static_cast<int>(axes_.size()) != model_.dims()) {
        throw std::invalid_argument("embedding needs one axis per process dimension");
    }
}

int GridEmbedding::generatorCount() const
{
    long long n = 1;
    for (const auto& a : axes_) {
        n *= a.grid.cells();
        if (n > (1LL << 30)) {
            throw std::length_error("embedding has too many generators");
        }
    }
    return static_cast<int>(n);
}

Eigen::MatrixXd GridEmbedding::gram() const
{
    if (generatorCount() > 8192) {
        throw std::length_error("dense Gram matrix too large");
    }
    Eigen::MatrixXd g = axes_.front().gram;
    for (std::size_t i = 1; i < axes_.size(); ++i) {
        g = kroneckerProduct(g, axes_[i].gram);
    }
    return g;
}

Eigen::MatrixXd GridEmbedding::factor() const
{
    if (generatorCount() > 8192) {
        throw std::length_error("dense factor too large");
    }
    Eigen::MatrixXd f = axes_.front().factor;
    for (std::size_t i = 1; i < axes_.size(); ++i) {
        f = kroneckerProduct(f, axes_[i].factor);
    }
    return f;
}

std::vector<int> GridEmbedding::cellIndex(int generator) const
{
    std::vector<int> idx(axes_.size());
    for (int k = axisCount() - 1; k >= 0; --k) {
        const int n = axes_[static_cast<std::size_t>(k)].grid.cells();
        idx[static_cast<std::size_t>(k)] = generator % n;
        generator /= n;
    }
    return idx;
}

GridEmbedding buildEmbedding(const CovarianceModel& model, int cellsPerAxis)
{
    return buildEmbedding(model, Grid::uniform(cellsPerAxis));
}

GridEmbedding buildEmbedding(const CovarianceModel& model, const Grid& axisGrid)
{
    if (!model.isSheet()) {
        return GridEmbedding(model, {embedAxis(model, axisGrid)});
    }
    const AxisEmbedding axis = embedAxis(CovarianceModel::brownianMotion(), axisGrid);
    return GridEmbedding(model, std::vector<AxisEmbedding>(static_cast<std::size_t>(model.dims()), axis));
}

double ProductKernel::operator()(std::span<const double> x, std::span<const double> y) const
{
    if (x.size() != factors.size() || y.size() != factors.size()) {
        throw std::invalid_argument("ProductKernel: point dimension mismatch");
    }
    double v = 1.0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        v *= factors[i](x[i], y[i]);
    }
    return v;
}

namespace {

void requireSymmetric(const Eigen::MatrixXd& c)
{
    const double scale = c.cwiseAbs().maxCoeff();
    const double asym = (c - c.transpose()).cwiseAbs().maxCoeff();
    if (!std::isfinite(scale) || asym > 1e-12 * scale) {
        throw std::invalid_argument("kernel collocation matrix is not symmetric");
    }
}

SymTensor toSymTensor(const Eigen::MatrixXd& m)
{
    const auto d = static_cast<int>(m.rows());
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
    return SymTensor::fromMatrix(d, std::span<const double>(rm.data(), static_cast<std::size_t>(rm.size())));
}

}  // namespace

Eigen::MatrixXd embedAxisKernel(const Kernel1D& kernel, const AxisEmbedding& axis)
{
    const int d = axis.grid.cells();
    Eigen::MatrixXd c(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            c(i, j) = kernel(axis.grid.midpoint(i), axis.grid.midpoint(j));
        }
    }
    requireSymmetric(c);
    Eigen::MatrixXd m = axis.factor.transpose() * c * axis.factor;
    return 0.5 * (m + m.transpose());
}

SymTensor embedKernel2(const Kernel1D& kernel, const GridEmbedding& emb)
{
    if (emb.axisCount() != 1) {
        throw std::invalid_argument("embedKernel2: one-parameter kernel on a multi-axis embedding");
    }
    return toSymTensor(embedAxisKernel(kernel, emb.axis(0)));
}

SymTensor embedKernel2(const ProductKernel& kernel, const GridEmbedding& emb)
{
    if (static_cast<int>(kernel.factors.size()) != emb.axisCount()) {
        throw std::invalid_argument("embedKernel2: product kernel has wrong number of factors");
    }
    if (emb.generatorCount() > 8192) {
        throw std::length_error("embedKernel2: dense product kernel too large");
    }
    Eigen::MatrixXd m = embedAxisKernel(kernel.factors.front(), emb.axis(0));
    for (int k = 1; k < emb.axisCount(); ++k) {
        m = kroneckerProduct(m, embedAxisKernel(kernel.factors[static_cast<std::size_t>(k)], emb.axis(k)));
    }
    return toSymTensor(m);
}

SymTensor embedKernelND(const KernelND& kernel, const GridEmbedding& emb)
{
    const int n = emb.generatorCount();
    const auto dims = static_cast<std::size_t>(emb.axisCount());
    std::vector<std::vector<double>> mids(static_cast<std::size_t>(n), std::vector<double>(dims));
    for (int g = 0; g < n; ++g) {
        const auto idx = emb.cellIndex(g);
        for (std::size_t k = 0; k < dims; ++k) {
            mids[static_cast<std::size_t>(g)][k] = emb.axes()[k].grid.midpoint(idx[k]);
        }
    }
    Eigen::MatrixXd c(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            c(i, j) = kernel(mids[static_cast<std::size_t>(i)], mids[static_cast<std::size_t>(j)]);
        }
    }
    requireSymmetric(c);
    const Eigen::MatrixXd l = emb.factor();
    const Eigen::MatrixXd m = l.transpose() * c * l;
    return toSymTensor(m);
}

double PathSample::valueAt(std::span<const int> nodeIndex) const
{
    if (nodeIndex.size() != grids.size()) {
        throw std::invalid_argument("valueAt: node index has wrong length");
    }
    std::size_t flat = 0;
    for (std::size_t k = 0; k < grids.size(); ++k) {
        const auto n = static_cast<std::size_t>(grids[k].cells()) + 1;
        const auto i = static_cast<std::size_t>(nodeIndex[k]);
        if (i >= n) {
            throw std::out_of_range("valueAt: node index out of range");
        }
        flat = flat * n + i;
    }
    return values[flat];
}

PathSample samplePath(const GridEmbedding& emb, const GaussianSample& xi)
{
    if (xi.dim() != emb.generatorCount()) {
        throw std::invalid_argument("samplePath: sample length " + std::to_string(xi.dim()) +
                                    " differs from generator count " +
                                    std::to_string(emb.generatorCount()));
    }
    std::vector<Eigen::MatrixXd> factors;
    std::vector<int> cellShape;
    for (const auto& a : emb.axes()) {
        factors.push_back(a.factor);
        cellShape.push_back(a.grid.cells());
    }
    const std::vector<double> increments = applyAxisOperators(factors, cellShape, xi.xi);

    // Lattice of nodes, zero on the lower faces, filled by cumulative sums.
    std::vector<int> nodeShape;
    for (int c : cellShape) {
        nodeShape.push_back(c + 1);
    }
    std::size_t total = 1;
    for (int n : nodeShape) {
        total *= static_cast<std::size_t>(n);
    }
    std::vector<double> values(total, 0.0);
    const auto dims = cellShape.size();
    std::vector<int> cell(dims, 0);
    for (std::size_t g = 0; g < increments.size(); ++g) {
        std::size_t flat = 0;
        for (std::size_t k = 0; k < dims; ++k) {
            flat = flat * static_cast<std::size_t>(nodeShape[k]) + static_cast<std::size_t>(cell[k] + 1);
        }
        values[flat] = increments[g];
        for (int k = static_cast<int>(dims) - 1; k >= 0; --k) {
            if (++cell[static_cast<std::size_t>(k)] < cellShape[static_cast<std::size_t>(k)]) {
                break;
            }
            cell[static_cast<std::size_t>(k)] = 0;
        }
    }
    std::size_t stride = 1;
    for (int k = static_cast<int>(dims) - 1; k >= 0; --k) {
        const auto n = static_cast<std::size_t>(nodeShape[static_cast<std::size_t>(k)]);
        for (std::size_t flat = 0; flat < total; ++flat) {
            if ((flat / stride) % n != 0) {
                values[flat] += values[flat - stride];
            }
        }
        stride *= n;
    }

    std::vector<Grid> grids;
    for (const auto& a : emb.axes()) {
        grids.push_back(a.grid);
    }
    return {emb.model(), std::move(grids), std::move(values), xi};
}

}  // namespace wchaos
