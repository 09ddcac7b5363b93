// SPDX-License-Identifier: Apache-2.0
#include "wchaos/experiments.hpp"

#include "wchaos/parallel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wchaos {

std::string methodName(SamplingMethod m)
{
    return m == SamplingMethod::Spectral ? "spectral" : "quadratic";
}

SamplingMethod parseMethod(const std::string& name)
{
    if (name == "spectral") {
        return SamplingMethod::Spectral;
    }
    if (name == "quadratic") {
        return SamplingMethod::Quadratic;
    }
    throw std::invalid_argument("unknown sampling method '" + name + "'");
}

HSOperator statisticSpectrum(const StatisticOperator& op)
{
    if (op.axisMatrices().size() == 1) {
        HSOperator h = hsFromMatrix(op.axisMatrices().front());
        h.matrix.resize(0, 0);
        return h;
    }
    return hsFromKronecker(op.axisMatrices());
}

std::vector<double> sampleNormalizedStatistic(const StatisticOperator& op, const HSOperator& spectrum,
                                              std::size_t samples, std::uint64_t seed,
                                              const std::string& tag, SamplingMethod method)
{
    std::vector<double> out(samples);
    const double s = op.scale();
    parallelFor(samples, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            StreamRng rng(seed, tag, i);
            if (method == SamplingMethod::Spectral) {
                out[i] = s * sampleSecondChaos(spectrum, rng);
            } else {
                out[i] = op.statistic(drawGaussianSample(op.dim(), rng));
            }
        }
    });
    return out;
}

FunctionalParams fBetaFromDelta(double hurst, double delta)
{
    return FunctionalParams::fBeta(hurst, 0.5 * (delta - 2.0 * hurst - 1.0));
}

FunctionalParams aBetaFromControl(int dims, double c)
{
    return FunctionalParams::aBeta(std::vector<double>(static_cast<std::size_t>(dims), 0.5 * c - 1.0));
}

SweepRow runSweepPoint(const FunctionalParams& p, const Grid& axisGrid, std::size_t samples,
                       std::uint64_t seed, const std::string& tag, SamplingMethod method)
{
    const GridEmbedding emb = buildEmbedding(processModel(p), axisGrid);
    const StatisticOperator op(p, emb);
    const HSOperator spec = statisticSpectrum(op);

    SweepRow row;
    row.params = p;
    row.cells = axisGrid.cells();
    row.generators = emb.generatorCount();
    switch (p.family) {
    case Family::FBeta: row.control = 2.0 * p.beta[0] + 2.0 * p.hurst + 1.0; break;
    case Family::ABeta:
        row.control = 1.0;
        for (double b : p.beta) {
            row.control *= 2.0 * b + 2.0;
        }
        break;
    case Family::LEps:
    case Family::BEps: row.control = p.eps; break;
    }
    const double s2 = spec.spectrum.squaredNorm();
    const double s4 = spec.spectrum.array().pow(4).sum();
    row.exactVariance = 2.0 * op.scale() * op.scale() * s2;
    row.exactExcess = 12.0 * s4 / (s2 * s2);
    row.contractionRatio = s4 / (s2 * s2);
    row.closedFormVariance = std::numeric_limits<double>::quiet_NaN();
    if (p.family == Family::ABeta) {
        row.closedFormVariance = varianceClosedFormSheet(p.beta);
    } else if (p.family == Family::BEps) {
        row.closedFormVariance = varianceClosedFormSheetEps(p.sheetDims, p.eps);
    }
    if (samples > 0) {
        const auto draws = sampleNormalizedStatistic(op, spec, samples, seed, tag, method);
        row.mc = summarize(draws);
        if (samples >= 100) {
            // KS of the draws standardized by the exact variance
            std::vector<double> z(draws);
            const double sd = std::sqrt(row.exactVariance);
            for (double& v : z) {
                v /= sd;
            }
            row.ks = ksAgainstStdNormal(z);
        }
    }
    return row;
}

}  // namespace wchaos
