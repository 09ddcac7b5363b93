// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wchaos/chaos.hpp"
#include "wchaos/embedding.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace wchaos {

/// Quadratic functionals of fBm B^H and of the Brownian sheet W:
///   F_beta = int_0^1 t^{2 beta} (B_t)^2 dt
///   L_eps  = int_eps^1 (B_t)^2 t^{-2H-1} dt
///   A_beta = int_{[0,1]^n} prod x_i^{2 beta_i} W(x)^2 dx
///   B_eps  = int_{[eps,1]^n} W(x)^2 / (x_1 ... x_n)^2 dx
enum class Family { FBeta, LEps, ABeta, BEps };

std::string familyName(Family f);
Family parseFamily(const std::string& name);

struct FunctionalParams {
    Family family = Family::FBeta;
    double hurst = 0.5;
    std::vector<double> beta;  ///< one entry for F_beta, one per axis for A_beta
    double eps = 0.0;
    int sheetDims = 1;

    static FunctionalParams fBeta(double hurst, double beta);
    static FunctionalParams lEps(double hurst, double eps);
    static FunctionalParams aBeta(std::vector<double> beta);
    static FunctionalParams bEps(int dims, double eps);

    [[nodiscard]] bool isSheet() const { return family == Family::ABeta || family == Family::BEps; }

    /// Throws std::invalid_argument unless: H in (0,1); F_beta: 2 beta + 2H + 1 > 0;
    /// A_beta: every 2 beta_i + 2 > 0; L_eps, B_eps: eps in (0,1).
    void validate() const;
};

/// Wiener chaos decomposition functional = mean + I_2(kernel).
struct ChaosKernel {
    double mean = 0.0;
    ProductKernel kernel;  ///< a single factor for the fBm families
};

ChaosKernel chaosKernel(const FunctionalParams& p);

/// Process the functional is defined on.
CovarianceModel processModel(const FunctionalParams& p);

/// Factor s with normalized statistic = s * (functional - mean):
/// (2beta+2H+1)^{1/2}, (log 1/eps)^{-1/2}, prod (2beta_i+2)^{1/2}, (log 1/eps)^{-n/2}.
double statisticScale(const FunctionalParams& p);

/// Grid used by the sweeps: cells shrinking by `ratio` toward the origin for
/// F_beta and A_beta, geometric cells down to eps (plus [0, eps]) for L_eps
/// and B_eps.
Grid defaultGrid(const FunctionalParams& p, int cells, double ratio = 0.5);

/// Riemann midpoint sum of the defining integral over the path, with the
/// process value at a cell midpoint interpolated (multi)linearly from the
/// nodes. Cells are clipped to [eps, 1] for the eps families.
double directEvaluate(const FunctionalParams& p, const PathSample& path);

/// statisticScale(p) * I_2(embedded kernel)(xi).
double normalizedStatistic(const FunctionalParams& p, const GaussianSample& xi,
                           const GridEmbedding& emb);

/// Exact variance of prod (2beta_i+2)^{1/2} (A_beta - mean):
/// 2 * prod_i 1 / (2 beta_i + 3).
double varianceClosedFormSheet(std::span<const double> beta);

/// Exact variance of (log 1/eps)^{-n/2} (B_eps - (log 1/eps)^n):
/// 2 * prod_i 2 (log(1/eps) - 1 + eps) / log(1/eps).
double varianceClosedFormSheetEps(int dims, double eps);

/// A functional's embedded chaos kernel, kept in Kronecker form
/// (one matrix per axis) for repeated evaluation.
class StatisticOperator {
public:
    StatisticOperator(const FunctionalParams& p, const GridEmbedding& emb);

    [[nodiscard]] const FunctionalParams& params() const { return params_; }
    [[nodiscard]] double mean() const { return mean_; }
    [[nodiscard]] double scale() const { return scale_; }
    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] const std::vector<Eigen::MatrixXd>& axisMatrices() const { return axes_; }

    /// I_2(K)(xi) = xi^T M xi - trace(M).
    [[nodiscard]] double chaosPart(const GaussianSample& xi) const;
    [[nodiscard]] double functional(const GaussianSample& xi) const { return mean_ + chaosPart(xi); }
    [[nodiscard]] double statistic(const GaussianSample& xi) const { return scale_ * chaosPart(xi); }

    /// Dense orthonormal-coordinate kernel; only for modest generator counts.
    [[nodiscard]] SymTensor kernelTensor() const;

private:
    FunctionalParams params_;
    double mean_;
    double scale_;
    int dim_;
    std::vector<Eigen::MatrixXd> axes_;
    std::vector<int> shape_;
    double trace_;
};

}  // namespace wchaos
