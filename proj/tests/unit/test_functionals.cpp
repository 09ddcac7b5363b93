// SPDX-License-Identifier: Apache-2.0
#include "wchaos/diagnostics.hpp"
#include "wchaos/experiments.hpp"
#include "wchaos/functionals.hpp"
#include "wchaos/rng.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace wchaos;

TEST(ChaosKernel, Examples)
{
    const ChaosKernel f = chaosKernel(FunctionalParams::fBeta(0.5, 0.0));
    EXPECT_DOUBLE_EQ(f.mean, 0.5);
    ASSERT_EQ(f.kernel.factors.size(), 1U);
    EXPECT_DOUBLE_EQ(f.kernel.factors[0](0.3, 0.7), 0.3);
    EXPECT_DOUBLE_EQ(f.kernel.factors[0](0.9, 0.2), 1.0 - 0.9);

    EXPECT_NEAR(chaosKernel(FunctionalParams::lEps(0.7, std::exp(-1.0))).mean, 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(chaosKernel(FunctionalParams::aBeta({0.0, 0.0})).mean, 0.25);
    EXPECT_NEAR(chaosKernel(FunctionalParams::bEps(2, 0.1)).mean, std::pow(std::log(10.0), 2), 1e-13);
}

TEST(ChaosKernel, FractionalKernelFormulas)
{
    const double h = 0.7;
    const double beta = 0.4;
    const ChaosKernel f = chaosKernel(FunctionalParams::fBeta(h, beta));
    EXPECT_NEAR(f.mean, 1.0 / (2 * beta + 2 * h + 1), 1e-15);
    EXPECT_NEAR(f.kernel.factors[0](0.2, 0.6), (1 - std::pow(0.6, 2 * beta + 1)) / (2 * beta + 1), 1e-15);

    const double eps = 0.05;
    const ChaosKernel l = chaosKernel(FunctionalParams::lEps(h, eps));
    EXPECT_NEAR(l.kernel.factors[0](0.01, 0.02), (std::pow(eps, -2 * h) - 1) / (2 * h), 1e-12);
    EXPECT_NEAR(l.kernel.factors[0](0.3, 0.6), (std::pow(0.6, -2 * h) - 1) / (2 * h), 1e-12);
    const ChaosKernel half = chaosKernel(FunctionalParams::lEps(0.5, eps));
    EXPECT_NEAR(half.kernel.factors[0](0.3, 0.6), 1 / 0.6 - 1, 1e-14);
}

TEST(Params, RejectInvalidRanges)
{
    EXPECT_THROW(FunctionalParams::fBeta(0.5, -1.1).validate(), std::invalid_argument);
    EXPECT_THROW(FunctionalParams::fBeta(1.0, 0.0).validate(), std::invalid_argument);
    EXPECT_THROW(FunctionalParams::lEps(0.6, 1.5).validate(), std::invalid_argument);
    EXPECT_THROW(FunctionalParams::lEps(0.6, 0.0).validate(), std::invalid_argument);
    EXPECT_THROW(FunctionalParams::aBeta({-1.2}).validate(), std::invalid_argument);
    EXPECT_THROW(FunctionalParams::bEps(0, 0.1).validate(), std::invalid_argument);
    EXPECT_THROW(chaosKernel(FunctionalParams::fBeta(0.5, -1.1)), std::invalid_argument);
    EXPECT_THROW(varianceClosedFormSheet(std::vector<double>{-1.0}), std::invalid_argument);
    EXPECT_THROW(parseFamily("G_beta"), std::invalid_argument);
    EXPECT_EQ(parseFamily(familyName(Family::BEps)), Family::BEps);
}

TEST(Params, FamilyMismatchIsRejected)
{
    const GridEmbedding sheet = buildEmbedding(CovarianceModel::brownianSheet(1), 4);
    const GridEmbedding fbm = buildEmbedding(CovarianceModel::fractionalBM(0.6), 4);
    const PathSample path = samplePath(sheet, GaussianSample{std::vector<double>(4, 0.0)});
    EXPECT_THROW(directEvaluate(FunctionalParams::fBeta(0.6, 0.0), path), std::invalid_argument);
    EXPECT_THROW(StatisticOperator(FunctionalParams::fBeta(0.7, 0.0), fbm), std::invalid_argument);
    EXPECT_THROW(StatisticOperator(FunctionalParams::aBeta({0.0}), fbm), std::invalid_argument);
}

TEST(DirectEvaluate, ZeroPath)
{
    const FunctionalParams p = FunctionalParams::fBeta(0.6, 0.3);
    const GridEmbedding emb = buildEmbedding(processModel(p), 16);
    EXPECT_EQ(directEvaluate(p, samplePath(emb, GaussianSample{std::vector<double>(16, 0.0)})), 0.0);
}

namespace {

PathSample constantPath(const GridEmbedding& emb)
{
    PathSample p = samplePath(emb, GaussianSample{std::vector<double>(static_cast<std::size_t>(emb.generatorCount()), 0.0)});
    std::fill(p.values.begin(), p.values.end(), 1.0);
    return p;
}

}  // namespace

TEST(DirectEvaluate, ConstantPath)
{
    for (double h : {0.3, 0.6, 0.9}) {
        const FunctionalParams f = FunctionalParams::fBeta(h, 0.0);
        EXPECT_NEAR(directEvaluate(f, constantPath(buildEmbedding(processModel(f), 10))), 1.0, 1e-14);

        const double eps = 0.01;
        const FunctionalParams l = FunctionalParams::lEps(h, eps);
        const GridEmbedding emb = buildEmbedding(processModel(l), Grid::geometricDownTo(400, eps));
        const double expected = (std::pow(eps, -2 * h) - 1) / (2 * h);
        EXPECT_NEAR(directEvaluate(l, constantPath(emb)), expected, 1e-3 * expected) << "H=" << h;
    }
    const FunctionalParams a = FunctionalParams::aBeta({0.0, 0.0});
    EXPECT_NEAR(directEvaluate(a, constantPath(buildEmbedding(processModel(a), 6))), 1.0, 1e-14);
}

TEST(Statistic, ZeroNoiseGivesMinusScaledTrace)
{
    const FunctionalParams p = FunctionalParams::fBeta(0.75, 0.0);
    const GridEmbedding emb = buildEmbedding(processModel(p), 32);
    const StatisticOperator op(p, emb);
    const SymTensor k = op.kernelTensor();
    double tr = 0.0;
    for (int i = 0; i < 32; ++i) {
        const int ii[] = {i, i};
        tr += k.at(ii);
    }
    const GaussianSample zero{std::vector<double>(32, 0.0)};
    EXPECT_NEAR(normalizedStatistic(p, zero, emb), -statisticScale(p) * tr, 1e-12);
    EXPECT_NEAR(op.statistic(zero), -statisticScale(p) * tr, 1e-12);
}

TEST(Statistic, OperatorMatchesDenseKernel)
{
    StreamRng rng(8, "op-dense", 0);
    for (const FunctionalParams& p : {FunctionalParams::fBeta(0.6, -0.3), FunctionalParams::lEps(0.8, 0.01),
                                      FunctionalParams::aBeta({0.5, -0.5}), FunctionalParams::bEps(2, 0.05)}) {
        const Grid g = defaultGrid(p, 8);
        const GridEmbedding emb = buildEmbedding(processModel(p), g);
        const StatisticOperator op(p, emb);
        for (int i = 0; i < 5; ++i) {
            const GaussianSample xi = drawGaussianSample(emb.generatorCount(), rng);
            const double a = op.statistic(xi);
            const double b = normalizedStatistic(p, xi, emb);
            EXPECT_NEAR(a, b, 1e-10 * (1.0 + std::abs(b))) << familyName(p.family);
        }
    }
}

TEST(ClosedForm, SheetExamples)
{
    EXPECT_NEAR(varianceClosedFormSheet(std::vector<double>{-0.995}), 2.0 / 1.01, 1e-12);
    EXPECT_NEAR(varianceClosedFormSheet(std::vector<double>{-0.995}), 1.9802, 1e-4);
    EXPECT_NEAR(varianceClosedFormSheet(std::vector<double>{-0.995, -0.995}), 2.0 / (1.01 * 1.01), 1e-12);
    EXPECT_NEAR(varianceClosedFormSheet(std::vector<double>{-1.0 + 1e-9}), 2.0, 1e-8);
    EXPECT_NEAR(varianceClosedFormSheet(std::vector<double>{-1.0 + 1e-9, -1.0 + 1e-9}), 2.0, 1e-8);
}

namespace {

// 2 int_0^1 m k(m)^2 dm for a kernel depending on s v t only.
template <class F>
double maxKernelNormSquared(F k, double split)
{
    boost::math::quadrature::tanh_sinh<double> q;
    auto f = [&](double m) {
        if (m <= 0.0) {
            return 0.0;
        }
        const double r = std::sqrt(m) * k(m);
        return 2.0 * r * r;
    };
    if (split <= 0.0) {
        return q.integrate(f, 0.0, 1.0);
    }
    return q.integrate(f, 0.0, split) + q.integrate(f, split, 1.0);
}

}  // namespace

TEST(ClosedForm, AgreesWithQuadrature)
{
    for (const std::vector<double>& beta :
         {std::vector<double>{0.0}, {-0.5}, {1.5}, {-0.9, 0.3}, {0.2, -0.7, 2.0}}) {
        double prod = 2.0;
        for (double b : beta) {
            const double a = 2 * b + 1;
            const double nk = maxKernelNormSquared(
                [a](double m) { return a == 0.0 ? -std::log(m) : (1 - std::pow(m, a)) / a; }, 0.0);
            prod *= (2 * b + 2) * nk;
        }
        EXPECT_NEAR(varianceClosedFormSheet(beta), prod, 1e-10 * prod);
    }
    for (int n : {1, 2, 3}) {
        for (double eps : {0.3, 0.01, 1e-4}) {
            const double l = std::log(1 / eps);
            const double nk = maxKernelNormSquared([eps](double m) { return 1 / std::max(m, eps) - 1; }, eps);
            const double expected = 2.0 * std::pow(nk / l, n);
            EXPECT_NEAR(varianceClosedFormSheetEps(n, eps), expected, 1e-10 * expected);
        }
    }
}

TEST(ClosedForm, EmbeddedVarianceApproachesClosedForm)
{
    const FunctionalParams p = FunctionalParams::bEps(1, 0.01);
    double last = 1e300;
    for (int cells : {8, 32, 128}) {
        const StatisticOperator op(p, buildEmbedding(processModel(p), defaultGrid(p, cells)));
        const HSOperator hs = statisticSpectrum(op);
        const double v = 2.0 * op.scale() * op.scale() * hs.spectrum.squaredNorm();
        const double err = std::abs(v - varianceClosedFormSheetEps(1, 0.01));
        EXPECT_LT(err, last);
        last = err;
    }
    EXPECT_LT(last, 1e-2);
}

TEST(SheetStatistic, MonteCarloVarianceNearClosedForm)
{
    const FunctionalParams p = FunctionalParams::aBeta({-0.995});
    const SweepRow row = runSweepPoint(p, Grid::geometric(1024, 0.7), 100000, 1, "sheet-unit", SamplingMethod::Spectral);
    EXPECT_LE(std::abs(row.mc.variance - row.exactVariance), 4.0 * row.mc.varianceSE);
    EXPECT_NEAR(row.exactVariance, 1.9802, 0.03 * 1.9802);
    EXPECT_NEAR(row.closedFormVariance, 1.9802, 1e-4);
}

TEST(SheetStatistic, DirectPathVarianceMatchesProductForm)
{
    const FunctionalParams p = FunctionalParams::aBeta({0.0, 0.0});
    const GridEmbedding emb = buildEmbedding(processModel(p), 24);
    std::vector<double> vals(20000);
    for (std::size_t i = 0; i < vals.size(); ++i) {
        StreamRng rng(12, "sheet-direct", i);
        const PathSample path = samplePath(emb, drawGaussianSample(emb.generatorCount(), rng));
        vals[i] = statisticScale(p) * directEvaluate(p, path);
    }
    const SampleSummary s = summarize(vals);
    const double beta[] = {0.0, 0.0};
    EXPECT_LE(std::abs(s.variance - varianceClosedFormSheet(beta)), 4.0 * s.varianceSE);
}

TEST(Coupling, DirectAndChaosRoutesConverge)
{
    const FunctionalParams p = FunctionalParams::fBeta(0.6, 0.0);
    double prev = 1e300;
    for (int d : {32, 128}) {
        const GridEmbedding emb = buildEmbedding(processModel(p), d);
        const StatisticOperator op(p, emb);
        std::vector<double> err;
        for (std::size_t i = 0; i < 40; ++i) {
            StreamRng rng(5, "coupling-unit", i);
            const GaussianSample xi = drawGaussianSample(d, rng);
            err.push_back(std::abs(directEvaluate(p, samplePath(emb, xi)) - op.functional(xi)));
        }
        std::nth_element(err.begin(), err.begin() + 20, err.end());
        EXPECT_LT(err[20], prev);
        prev = err[20];
    }
}

TEST(Divergence, LEpsMeanGrowsLikeLog)
{
    const double h = 0.75;
    double prev = 0.0;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        const FunctionalParams p = FunctionalParams::lEps(h, eps);
        const GridEmbedding emb = buildEmbedding(processModel(p), Grid::geometricDownTo(96, eps));
        std::vector<double> vals(4000);
        for (std::size_t i = 0; i < vals.size(); ++i) {
            StreamRng rng(21, "leps-mean", i);
            vals[i] = directEvaluate(p, samplePath(emb, drawGaussianSample(emb.generatorCount(), rng)));
        }
        const Estimate m = meanWithError(vals);
        EXPECT_GT(m.value, prev);
        EXPECT_LE(std::abs(m.value - std::log(1 / eps)), 4.0 * m.se) << "eps=" << eps;
        prev = m.value;
    }
}

TEST(Divergence, LEpsVarianceGrowsLikeLog)
{
    std::vector<double> ratios;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const FunctionalParams p = FunctionalParams::lEps(0.75, eps);
        const SweepRow row = runSweepPoint(p, defaultGrid(p, 192), 200, 3, "leps-var", SamplingMethod::Spectral);
        ratios.push_back(row.exactVariance);
    }
    for (std::size_t i = 1; i < ratios.size(); ++i) {
        const double r = ratios[i] / ratios[i - 1];
        EXPECT_GE(r, 0.7);
        EXPECT_LE(r, 1.3);
    }
}

TEST(Limits, SquaredDeviationShrinksTowardCritical)
{
    const double h = 0.75;
    double prev = 1e300;
    for (double delta : {0.4, 0.2, 0.1, 0.05}) {
        const FunctionalParams p = fBetaFromDelta(h, delta);
        const StatisticOperator op(p, buildEmbedding(processModel(p), defaultGrid(p, 96)));
        const HSOperator hs = statisticSpectrum(op);
        const auto draws = sampleNormalizedStatistic(op, hs, 20000, 4, "l2-conv", SamplingMethod::Spectral);
        std::vector<double> dev(draws.size());
        for (std::size_t i = 0; i < draws.size(); ++i) {
            // delta F - 1 = sqrt(delta) * G
            dev[i] = delta * draws[i] * draws[i];
        }
        const Estimate m = meanWithError(dev);
        EXPECT_LT(m.value, prev) << "delta=" << delta;
        prev = m.value;
    }
}

TEST(Limits, LargeBetaApproachesSquaredEndpoint)
{
    const double h = 0.7;
    const GridEmbedding emb = buildEmbedding(CovarianceModel::fractionalBM(h), 128);
    double prev = 1e300;
    for (double beta : {1.0, 4.0, 16.0}) {
        const FunctionalParams p = FunctionalParams::fBeta(h, beta);
        const double delta = 2 * beta + 2 * h + 1;
        std::vector<double> sq(500);
        for (std::size_t i = 0; i < sq.size(); ++i) {
            StreamRng rng(6, "noncentral-unit", i);
            const PathSample path = samplePath(emb, drawGaussianSample(128, rng));
            const double b1 = path.values.back();
            const double diff = delta * directEvaluate(p, path) - b1 * b1;
            sq[i] = diff * diff;
        }
        const Estimate m = meanWithError(sq);
        EXPECT_LT(m.value, prev) << "beta=" << beta;
        prev = m.value;
    }
}
