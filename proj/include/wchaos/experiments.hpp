// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wchaos/diagnostics.hpp"
#include "wchaos/functionals.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wchaos {

/// How Monte Carlo draws of a normalized statistic are produced.
///   Spectral:  scale * sum_i lambda_i (xi_i^2 - 1), same law, O(D) per draw.
///   Quadratic: scale * (xi^T M xi - tr M) on the embedding coordinates,
///              i.e. the value coupled to the sampled path.
enum class SamplingMethod { Spectral, Quadratic };

std::string methodName(SamplingMethod m);
SamplingMethod parseMethod(const std::string& name);

/// Eigenvalues of a statistic's embedded kernel (product spectrum for sheets).
HSOperator statisticSpectrum(const StatisticOperator& op);

/// Draw i uses stream (seed, tag, i); result does not depend on threadCount().
std::vector<double> sampleNormalizedStatistic(const StatisticOperator& op, const HSOperator& spectrum,
                                              std::size_t samples, std::uint64_t seed,
                                              const std::string& tag, SamplingMethod method);

/// One (parameters, grid) point of a sweep.
struct SweepRow {
    FunctionalParams params;
    int cells = 0;
    int generators = 0;
    double control = 0.0;       ///< 2beta+2H+1, prod(2beta_i+2), or eps
    double exactVariance = 0.0;  ///< variance of the embedded statistic
    double exactExcess = 0.0;    ///< its excess kurtosis, 12 sum l^4 / (sum l^2)^2
    double contractionRatio = 0.0;  ///< ||f (x)_1 f||^2 / ||f||^4
    double closedFormVariance = 0.0;  ///< sheets only; NaN otherwise
    SampleSummary mc;
    KSResult ks;  ///< of the draws divided by sqrt(exactVariance)
};

/// Uses the same grid on every axis.
SweepRow runSweepPoint(const FunctionalParams& p, const Grid& axisGrid, std::size_t samples,
                       std::uint64_t seed, const std::string& tag, SamplingMethod method);

/// F_beta parameters with 2beta + 2H + 1 = delta.
FunctionalParams fBetaFromDelta(double hurst, double delta);

/// A_beta parameters with every 2beta_i + 2 = c.
FunctionalParams aBetaFromControl(int dims, double c);

}  // namespace wchaos
