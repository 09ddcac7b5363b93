// SPDX-License-Identifier: Apache-2.0
#include "wchaos/experiments.hpp"
#include "wchaos/parallel.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

using namespace wchaos;

namespace {

struct ThreadGuard {
    int saved = threadCount();
    ~ThreadGuard() { setThreadCount(saved); }
};

}  // namespace

TEST(Sampling, DrawsDoNotDependOnThreadCount)
{
    ThreadGuard guard;
    const FunctionalParams p = FunctionalParams::aBeta({-0.5, 0.5});
    const StatisticOperator op(p, buildEmbedding(processModel(p), defaultGrid(p, 12)));
    const HSOperator hs = statisticSpectrum(op);
    for (SamplingMethod m : {SamplingMethod::Spectral, SamplingMethod::Quadratic}) {
        setThreadCount(1);
        const auto a = sampleNormalizedStatistic(op, hs, 3000, 5, "det", m);
        setThreadCount(4);
        const auto b = sampleNormalizedStatistic(op, hs, 3000, 5, "det", m);
        EXPECT_EQ(a, b) << methodName(m);
    }
}

TEST(Sampling, SpectralAndQuadraticAgreeInLaw)
{
    const FunctionalParams p = FunctionalParams::fBeta(0.7, -0.5);
    const StatisticOperator op(p, buildEmbedding(processModel(p), defaultGrid(p, 48)));
    const HSOperator hs = statisticSpectrum(op);
    const SampleSummary s = summarize(sampleNormalizedStatistic(op, hs, 40000, 6, "law", SamplingMethod::Spectral));
    const SampleSummary q = summarize(sampleNormalizedStatistic(op, hs, 40000, 7, "law", SamplingMethod::Quadratic));
    const double exact = 2.0 * op.scale() * op.scale() * hs.spectrum.squaredNorm();
    EXPECT_LE(std::abs(s.variance - exact), 4.0 * s.varianceSE);
    EXPECT_LE(std::abs(q.variance - exact), 4.0 * q.varianceSE);
    const double se = std::hypot(s.kurtosisSE, q.kurtosisSE);
    EXPECT_LE(std::abs(s.kurtosis - q.kurtosis), 4.0 * se);
}

TEST(Sampling, SpectrumTraceMatchesOperator)
{
    const FunctionalParams p = FunctionalParams::bEps(2, 0.05);
    const StatisticOperator op(p, buildEmbedding(processModel(p), defaultGrid(p, 6)));
    const HSOperator hs = statisticSpectrum(op);
    const SymTensor k = op.kernelTensor();
    ASSERT_EQ(hs.dim(), 36);
    double tr = 0.0;
    for (int i = 0; i < 36; ++i) {
        const int ii[] = {i, i};
        tr += k.at(ii);
    }
    EXPECT_NEAR(hs.spectrum.sum(), tr, 1e-10 * (1.0 + std::abs(tr)));
    const double n = norm(k);
    EXPECT_NEAR(hs.spectrum.squaredNorm(), n * n, 1e-10 * n * n);
}

TEST(Sweep, RowColumns)
{
    const FunctionalParams p = fBetaFromDelta(0.75, 0.2);
    EXPECT_NEAR(2 * p.beta[0] + 2 * p.hurst + 1, 0.2, 1e-15);
    const SweepRow row = runSweepPoint(p, defaultGrid(p, 32), 2000, 1, "row", SamplingMethod::Spectral);
    EXPECT_EQ(row.cells, 32);
    EXPECT_EQ(row.generators, 32);
    EXPECT_NEAR(row.control, 0.2, 1e-15);
    EXPECT_TRUE(std::isnan(row.closedFormVariance));
    EXPECT_GT(row.exactVariance, 0.0);
    EXPECT_NEAR(row.exactExcess, 12.0 * row.contractionRatio, 1e-12);
    EXPECT_EQ(row.mc.n, 2000U);
    EXPECT_EQ(row.ks.n, 2000U);

    const FunctionalParams a = aBetaFromControl(2, 0.5);
    EXPECT_EQ(a.beta, (std::vector<double>{-0.75, -0.75}));
    const SweepRow sheet = runSweepPoint(a, defaultGrid(a, 8), 500, 1, "row", SamplingMethod::Spectral);
    EXPECT_EQ(sheet.generators, 64);
    EXPECT_NEAR(sheet.control, 0.25, 1e-15);
    EXPECT_NEAR(sheet.closedFormVariance, varianceClosedFormSheet(a.beta), 1e-15);
}

TEST(Sweep, ParseNames)
{
    EXPECT_EQ(parseMethod("spectral"), SamplingMethod::Spectral);
    EXPECT_EQ(parseMethod(methodName(SamplingMethod::Quadratic)), SamplingMethod::Quadratic);
    EXPECT_THROW(parseMethod("fft"), std::invalid_argument);
}
