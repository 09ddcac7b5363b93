// SPDX-License-Identifier: Apache-2.0
#include "wchaos/functionals.hpp"

#include "wchaos/kron.hpp"

#include <cmath>
#include <stdexcept>

namespace wchaos {

namespace {

/// (1 - m^a) / a, continuous at a = 0 where it equals -log m.
double powerTail(double m, double a)
{
    const double lm = std::log(m);
    if (a == 0.0) {
        return -lm;
    }
    return -std::expm1(a * lm) / a;
}

double logInv(double eps)
{
    return -std::log(eps);
}

void requireSameProcess(const FunctionalParams& p, const CovarianceModel& m)
{
    const CovarianceModel want = processModel(p);
    const bool ok = p.isSheet()
                        ? (m.isSheet() && m.dims() == want.dims())
                        : (!m.isSheet() && m.hurst() == want.hurst());
    if (!ok) {
        throw std::invalid_argument("process model does not match functional family " +
                                    familyName(p.family));
    }
}

}  // namespace

std::string familyName(Family f)
{
    switch (f) {
    case Family::FBeta: return "F_beta";
    case Family::LEps: return "L_eps";
    case Family::ABeta: return "A_beta";
    case Family::BEps: return "B_eps";
    }
    return "unknown";
}

Family parseFamily(const std::string& name)
{
    for (Family f : {Family::FBeta, Family::LEps, Family::ABeta, Family::BEps}) {
        if (name == familyName(f)) {
            return f;
        }
    }
    throw std::invalid_argument("unknown functional family '" + name + "'");
}

FunctionalParams FunctionalParams::fBeta(double hurst, double beta)
{
    FunctionalParams p;
    p.family = Family::FBeta;
    p.hurst = hurst;
    p.beta = {beta};
    p.validate();
    return p;
}

FunctionalParams FunctionalParams::lEps(double hurst, double eps)
{
    FunctionalParams p;
    p.family = Family::LEps;
    p.hurst = hurst;
    p.eps = eps;
    p.validate();
    return p;
}

FunctionalParams FunctionalParams::aBeta(std::vector<double> beta)
{
    FunctionalParams p;
    p.family = Family::ABeta;
    p.sheetDims = static_cast<int>(beta.size());
    p.beta = std::move(beta);
    p.validate();
    return p;
}

FunctionalParams FunctionalParams::bEps(int dims, double eps)
{
    FunctionalParams p;
    p.family = Family::BEps;
    p.sheetDims = dims;
    p.eps = eps;
    p.validate();
    return p;
}

void FunctionalParams::validate() const
{
    switch (family) {
    case Family::FBeta:
        if (!(hurst > 0.0 && hurst < 1.0)) {
            throw std::invalid_argument("F_beta: Hurst parameter must lie in (0, 1)");
        }
        if (beta.size() != 1 || !(2.0 * beta[0] + 2.0 * hurst + 1.0 > 0.0)) {
            throw std::invalid_argument("F_beta: requires 2*beta + 2*H + 1 > 0");
        }
        break;
    case Family::LEps:
        if (!(hurst > 0.0 && hurst < 1.0)) {
            throw std::invalid_argument("L_eps: Hurst parameter must lie in (0, 1)");
        }
        if (!(eps > 0.0 && eps < 1.0)) {
            throw std::invalid_argument("L_eps: eps must lie in (0, 1)");
        }
        break;
    case Family::ABeta:
        if (sheetDims < 1 || static_cast<int>(beta.size()) != sheetDims) {
            throw std::invalid_argument("A_beta: need one beta per sheet dimension");
        }
        for (double b : beta) {
            if (!(2.0 * b + 2.0 > 0.0)) {
                throw std::invalid_argument("A_beta: requires every 2*beta_i + 2 > 0");
            }
        }
        break;
    case Family::BEps:
        if (sheetDims < 1) {
            throw std::invalid_argument("B_eps: sheet dimension must be >= 1");
        }
        if (!(eps > 0.0 && eps < 1.0)) {
            throw std::invalid_argument("B_eps: eps must lie in (0, 1)");
        }
        break;
    }
}

ChaosKernel chaosKernel(const FunctionalParams& p)
{
    p.validate();
    ChaosKernel out;
    switch (p.family) {
    case Family::FBeta: {
        const double a = 2.0 * p.beta[0] + 1.0;
        out.mean = 1.0 / (2.0 * p.beta[0] + 2.0 * p.hurst + 1.0);
        out.kernel.factors.push_back([a](double s, double t) { return powerTail(std::max(s, t), a); });
        break;
    }
    case Family::LEps: {
        const double h = p.hurst;
        const double eps = p.eps;
        out.mean = logInv(eps);
        out.kernel.factors.push_back([h, eps](double s, double t) {
            return powerTail(std::max({eps, s, t}), -2.0 * h);
        });
        break;
    }
    case Family::ABeta: {
        out.mean = 1.0;
        for (double b : p.beta) {
            const double a = 2.0 * b + 1.0;
            out.mean /= 2.0 * b + 2.0;
            out.kernel.factors.push_back([a](double x, double y) { return powerTail(std::max(x, y), a); });
        }
        break;
    }
    case Family::BEps: {
        const double eps = p.eps;
        out.mean = std::pow(logInv(eps), p.sheetDims);
        for (int i = 0; i < p.sheetDims; ++i) {
            out.kernel.factors.push_back([eps](double x, double y) { return 1.0 / std::max({eps, x, y}) - 1.0; });
        }
        break;
    }
    }
    return out;
}

CovarianceModel processModel(const FunctionalParams& p)
{
    if (p.isSheet()) {
        return CovarianceModel::brownianSheet(p.sheetDims);
    }
    if (p.hurst == 0.5) {
        return CovarianceModel::brownianMotion();
    }
    return CovarianceModel::fractionalBM(p.hurst);
}

double statisticScale(const FunctionalParams& p)
{
    p.validate();
    switch (p.family) {
    case Family::FBeta: return std::sqrt(2.0 * p.beta[0] + 2.0 * p.hurst + 1.0);
    case Family::LEps: return 1.0 / std::sqrt(logInv(p.eps));
    case Family::ABeta: {
        double s = 1.0;
        for (double b : p.beta) {
            s *= std::sqrt(2.0 * b + 2.0);
        }
        return s;
    }
    case Family::BEps: return std::pow(logInv(p.eps), -0.5 * p.sheetDims);
    }
    return 1.0;
}

Grid defaultGrid(const FunctionalParams& p, int cells, double ratio)
{
    switch (p.family) {
    case Family::FBeta:
    case Family::ABeta: return Grid::geometric(cells, ratio);
    case Family::LEps:
    case Family::BEps: return Grid::geometricDownTo(cells, p.eps);
    }
    return Grid::uniform(cells);
}

double directEvaluate(const FunctionalParams& p, const PathSample& path)
{
    p.validate();
    requireSameProcess(p, path.model);
    const auto dims = path.grids.size();
    const bool clipped = p.family == Family::LEps || p.family == Family::BEps;

    // Per axis: for every cell, the (clipped) midpoint, its weight
    // width * density(mid), and its linear interpolation coefficient.
    struct CellRule {
        double weight;
        double frac;  // position of the midpoint inside the cell, in [0,1]
    };
    std::vector<std::vector<CellRule>> rules(dims);
    for (std::size_t k = 0; k < dims; ++k) {
        const Grid& g = path.grids[k];
        for (int i = 0; i < g.cells(); ++i) {
            double lo = g.lower(i);
            const double hi = g.upper(i);
            if (clipped) {
                if (hi <= p.eps) {
                    rules[k].push_back({0.0, 0.5});
                    continue;
                }
                lo = std::max(lo, p.eps);
            }
            const double mid = 0.5 * (lo + hi);
            double density = 1.0;
            switch (p.family) {
            case Family::FBeta: density = std::pow(mid, 2.0 * p.beta[0]); break;
            case Family::LEps: density = std::pow(mid, -2.0 * p.hurst - 1.0); break;
            case Family::ABeta: density = std::pow(mid, 2.0 * p.beta[k]); break;
            case Family::BEps: density = 1.0 / (mid * mid); break;
            }
            rules[k].push_back({(hi - lo) * density, (mid - g.lower(i)) / g.width(i)});
        }
    }

    std::vector<int> cell(dims, 0);
    std::vector<int> corner(dims, 0);
    double total = 0.0;
    while (true) {
        double weight = 1.0;
        for (std::size_t k = 0; k < dims; ++k) {
            weight *= rules[k][static_cast<std::size_t>(cell[k])].weight;
        }
        if (weight != 0.0) {
            // multilinear interpolation over the 2^n cell corners
            double value = 0.0;
            for (unsigned mask = 0; mask < (1U << dims); ++mask) {
                double w = 1.0;
                for (std::size_t k = 0; k < dims; ++k) {
                    const double f = rules[k][static_cast<std::size_t>(cell[k])].frac;
                    const bool up = ((mask >> k) & 1U) != 0;
                    corner[k] = cell[k] + (up ? 1 : 0);
                    w *= up ? f : 1.0 - f;
                }
                value += w * path.valueAt(corner);
            }
            total += weight * value * value;
        }
        int k = static_cast<int>(dims) - 1;
        for (; k >= 0; --k) {
            if (++cell[static_cast<std::size_t>(k)] < path.grids[static_cast<std::size_t>(k)].cells()) {
                break;
            }
            cell[static_cast<std::size_t>(k)] = 0;
        }
        if (k < 0) {
            break;
        }
    }
    return total;
}

double normalizedStatistic(const FunctionalParams& p, const GaussianSample& xi,
                           const GridEmbedding& emb)
{
    requireSameProcess(p, emb.model());
    const ChaosKernel ck = chaosKernel(p);
    const SymTensor k = emb.axisCount() == 1 ? embedKernel2(ck.kernel.factors.front(), emb)
                                             : embedKernel2(ck.kernel, emb);
    return statisticScale(p) * evalIntegral(k, xi);
}

double varianceClosedFormSheet(std::span<const double> beta)
{
    // Per axis, ||(1 - (x v y)^a)/a||^2 = 1/((2b+2)(2b+3)) with a = 2b+1; the
    // normalization multiplies it by (2b+2), and Var I_2(K) = 2 ||K||^2.
    double v = 2.0;
    for (double b : beta) {
        if (!(2.0 * b + 2.0 > 0.0)) {
            throw std::invalid_argument("varianceClosedFormSheet: requires every 2*beta_i + 2 > 0");
        }
        v /= 2.0 * b + 3.0;
    }
    return v;
}

double varianceClosedFormSheetEps(int dims, double eps)
{
    if (!(eps > 0.0 && eps < 1.0) || dims < 1) {
        throw std::invalid_argument("varianceClosedFormSheetEps: eps in (0,1), dims >= 1 required");
    }
    const double l = logInv(eps);
    // ||(eps v x v y)^{-1} - 1||^2 = 2 (log(1/eps) - 1 + eps) per axis
    return 2.0 * std::pow(2.0 * (l - 1.0 + eps) / l, dims);
}

StatisticOperator::StatisticOperator(const FunctionalParams& p, const GridEmbedding& emb)
    : params_(p), mean_(0.0), scale_(statisticScale(p)), dim_(emb.generatorCount()), trace_(1.0)
{
    requireSameProcess(p, emb.model());
    const ChaosKernel ck = chaosKernel(p);
    mean_ = ck.mean;
    for (int k = 0; k < emb.axisCount(); ++k) {
        axes_.push_back(embedAxisKernel(ck.kernel.factors[static_cast<std::size_t>(k)], emb.axis(k)));
        shape_.push_back(emb.axis(k).grid.cells());
        trace_ *= axes_.back().trace();
    }
}

double StatisticOperator::chaosPart(const GaussianSample& xi) const
{
    if (xi.dim() != dim_) {
        throw std::invalid_argument("StatisticOperator: sample length differs from generator count");
    }
    const std::vector<double> y = applyAxisOperators(axes_, shape_, xi.xi);
    double q = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        q += xi.xi[i] * y[i];
    }
    return q - trace_;
}

SymTensor StatisticOperator::kernelTensor() const
{
    if (dim_ > 8192) {
        throw std::length_error("kernelTensor: too many generators for a dense kernel");
    }
    Eigen::MatrixXd m = axes_.front();
    for (std::size_t k = 1; k < axes_.size(); ++k) {
        m = kroneckerProduct(m, axes_[k]);
    }
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
    return SymTensor::fromMatrix(dim_, std::span<const double>(rm.data(), static_cast<std::size_t>(rm.size())));
}

}  // namespace wchaos
