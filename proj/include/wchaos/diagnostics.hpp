// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wchaos/rng.hpp"
#include "wchaos/tensor.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace wchaos {

/// Kolmogorov-Smirnov distance to the standard normal at the 5% level.
struct KSResult {
    double statistic = 0.0;
    std::size_t n = 0;
    double threshold = 0.0;  ///< 1.358 / sqrt(n)
    bool pass = false;
};

/// Throws std::invalid_argument for fewer than 100 samples.
KSResult ksAgainstStdNormal(std::span<const double> samples);

/// Moments with delete-one jackknife standard errors. Skewness and kurtosis
/// use population central moments; kurtosis is the raw (not excess) value.
struct SampleSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;
    double skewness = 0.0;
    double kurtosis = 0.0;
    double meanSE = 0.0;
    double varianceSE = 0.0;
    double skewnessSE = 0.0;
    double kurtosisSE = 0.0;

    [[nodiscard]] double excessKurtosis() const { return kurtosis - 3.0; }
};

/// Needs at least 3 samples.
SampleSummary summarize(std::span<const double> samples);

struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

/// Sample mean and its standard error s / sqrt(n).
Estimate meanWithError(std::span<const double> samples);

/// Symmetric operator of a second-chaos kernel with its eigenvalues
/// (ascending). I_2(f) = sum_i lambda_i (xi_i^2 - 1) in law.
struct HSOperator {
    Eigen::MatrixXd matrix;  ///< empty when built from Kronecker factors
    Eigen::VectorXd spectrum;

    [[nodiscard]] int dim() const { return static_cast<int>(spectrum.size()); }
};

HSOperator hsFromKernel(const SymTensor& f);
/// Asymmetry up to 1e-10 * ||m|| is averaged away; more is rejected.
HSOperator hsFromMatrix(const Eigen::MatrixXd& m);
/// Spectrum of a Kronecker product of symmetric matrices (products of the
/// factor eigenvalues); the dense matrix is not formed.
HSOperator hsFromKronecker(const std::vector<Eigen::MatrixXd>& factors);

/// kappa_1 = 0, kappa_j = 2^{j-1} (j-1)! sum lambda^j for j >= 2.
double cumulant(const HSOperator& op, int j);
/// E[exp(i theta I_2)] = prod_i exp(-i theta lambda_i) (1 - 2 i theta lambda_i)^{-1/2}.
std::complex<double> charFunction(const HSOperator& op, double theta);
/// One draw of sum_i lambda_i (xi_i^2 - 1).
double sampleSecondChaos(const HSOperator& op, StreamRng& rng);

/// Sequence f_k of kernels of one fixed order >= 2, indexed by a real
/// parameter. The limit is approached as the parameter increases, or
/// decreases when towardLimitDecreasing is set.
struct KernelSequence {
    std::string name;
    std::function<SymTensor(double)> generator;
    std::vector<double> schedule;
    bool towardLimitDecreasing = false;
};

enum class Verdict { GaussianConsistent, Inconsistent, NoVerdict };

std::string verdictName(Verdict v);

/// One schedule point, for the kernel rescaled to unit variance.
struct DiagnosticRow {
    double parameter = 0.0;
    int dim = 0;
    double rawVariance = 0.0;  ///< n! ||f_k||^2 before rescaling
    double fourthMoment = 0.0;
    double excess = 0.0;  ///< fourthMoment - 3
    std::vector<double> contractionNorms;  ///< ||f (x)_p f||^2, p = 1..n-1
    SampleSummary mc;
    KSResult ks;
};

struct DiagnosticReport {
    std::string name;
    int order = 0;
    std::vector<DiagnosticRow> rows;  ///< sorted toward the limit
    Verdict verdict = Verdict::NoVerdict;
    std::string reason;
};

/// Fourth-moment diagnostics along the schedule. Verdict: GaussianConsistent
/// when the last excess and every last contraction norm are below half their
/// first values and the last KS test passes; NoVerdict when a raw variance is
/// zero or not finite or the variances span more than a factor 1e8.
/// Monte Carlo draw i of sorted point j uses stream (seed, name/j, i).
DiagnosticReport theoremOneReport(const KernelSequence& seq, std::size_t mcSamples,
                                  std::uint64_t seed);

/// Built-in sequences: "clt" k -> k^{-1/2} sum_{i<k} sym(e_{2i} (x) e_{2i+1}),
/// "constant-cross" -> sym(e_1 (x) e_2), "square" -> e_1 (x) e_1.
KernelSequence builtinSequence(const std::string& family, std::vector<double> schedule);

}  // namespace wchaos
