// SPDX-License-Identifier: Apache-2.0
#include "wchaos/chaos.hpp"
#include "wchaos/diagnostics.hpp"
#include "wchaos/kron.hpp"
#include "wchaos/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

using namespace wchaos;

namespace {

SymTensor randomSym2(int dim, StreamRng& rng)
{
    std::vector<double> c(static_cast<std::size_t>(dim * dim));
    for (double& v : c) {
        v = rng.gaussian();
    }
    return symmetrize(Tensor(2, dim, std::move(c)));
}

SymTensor basis2(int d, int i, int j)
{
    const int idx[] = {i, j};
    return SymTensor::basisProduct(d, idx);
}

std::vector<double> normals(std::size_t n, std::uint64_t seed, const char* tag)
{
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        StreamRng rng(seed, tag, i);
        out[i] = rng.gaussian();
    }
    return out;
}

}  // namespace

TEST(Spectrum, SquareKernel)
{
    const HSOperator op = hsFromKernel(basis2(1, 0, 0));
    ASSERT_EQ(op.dim(), 1);
    EXPECT_DOUBLE_EQ(op.spectrum[0], 1.0);
    EXPECT_DOUBLE_EQ(cumulant(op, 1), 0.0);
    EXPECT_DOUBLE_EQ(cumulant(op, 2), 2.0);
    EXPECT_DOUBLE_EQ(cumulant(op, 4), 48.0);
    EXPECT_EQ(charFunction(op, 0.0), std::complex<double>(1.0, 0.0));
}

TEST(Spectrum, CrossKernel)
{
    const HSOperator op = hsFromKernel(basis2(2, 0, 1));
    ASSERT_EQ(op.dim(), 2);
    EXPECT_DOUBLE_EQ(op.spectrum[0], -0.5);
    EXPECT_DOUBLE_EQ(op.spectrum[1], 0.5);
    EXPECT_DOUBLE_EQ(cumulant(op, 3), 0.0);
    EXPECT_DOUBLE_EQ(cumulant(op, 2), 1.0);
}

TEST(Spectrum, RejectsWrongOrderAndAsymmetry)
{
    const int idx[] = {0, 1, 1};
    EXPECT_THROW(hsFromKernel(SymTensor::basisProduct(2, idx)), std::invalid_argument);
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 0.3, 0.1, 2.0;
    EXPECT_THROW(hsFromMatrix(m), std::invalid_argument);
    m(1, 0) = 0.3 + 1e-14;
    const HSOperator op = hsFromMatrix(m);
    EXPECT_EQ(op.matrix(0, 1), op.matrix(1, 0));
}

TEST(Spectrum, CumulantsMatchMomentFormulas)
{
    StreamRng rng(31, "spectral-bridge", 0);
    for (int d : {2, 3, 5, 8}) {
        const SymTensor f = randomSym2(d, rng);
        const HSOperator op = hsFromKernel(f);
        const double k2 = secondMomentExact(f);
        const double k4 = fourthMomentExact(f) - 3.0 * k2 * k2;
        EXPECT_NEAR(cumulant(op, 2), k2, 1e-9 * k2);
        EXPECT_NEAR(cumulant(op, 4), k4, 1e-9 * k4);
        const double l4 = op.spectrum.array().pow(4).sum();
        EXPECT_NEAR(contractionNormSquared(f, 1), l4, 1e-9 * l4);
        for (int j = 2; j <= 5; ++j) {
            Eigen::MatrixXd p = Eigen::MatrixXd::Identity(d, d);
            for (int k = 0; k < j; ++k) {
                p = p * op.matrix;
            }
            const double lj = op.spectrum.array().pow(j).sum();
            EXPECT_NEAR(p.trace(), lj, 1e-9 * (1.0 + std::abs(lj)));
        }
    }
}

TEST(Spectrum, KroneckerSpectrumIsProductOfFactors)
{
    StreamRng rng(32, "kron-spec", 0);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2, 2);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j <= i; ++j) {
            a(i, j) = a(j, i) = rng.gaussian();
        }
    }
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j <= i; ++j) {
            b(i, j) = b(j, i) = rng.gaussian();
        }
    }
    const HSOperator k = hsFromKronecker({a, b});
    const HSOperator dense = hsFromMatrix(kroneckerProduct(a, b));
    ASSERT_EQ(k.dim(), 6);
    EXPECT_EQ(k.matrix.size(), 0);
    for (int i = 0; i < 6; ++i) {
        EXPECT_NEAR(k.spectrum[i], dense.spectrum[i], 1e-12);
    }
}

TEST(Spectrum, CharFunctionAgreesWithMonteCarlo)
{
    StreamRng krng(33, "cf-kernel", 0);
    const HSOperator op = hsFromKernel(randomSym2(4, krng).scaled(0.3));
    const std::size_t n = 40000;
    for (double theta : {0.5, 1.0, 2.0}) {
        std::vector<double> re(n);
        std::vector<double> im(n);
        for (std::size_t i = 0; i < n; ++i) {
            StreamRng rng(34, "cf-draw", i);
            const double x = sampleSecondChaos(op, rng);
            re[i] = std::cos(theta * x);
            im[i] = std::sin(theta * x);
        }
        const std::complex<double> cf = charFunction(op, theta);
        const Estimate r = meanWithError(re);
        const Estimate s = meanWithError(im);
        EXPECT_LE(std::abs(r.value - cf.real()), 4.0 * r.se) << "theta=" << theta;
        EXPECT_LE(std::abs(s.value - cf.imag()), 4.0 * s.se) << "theta=" << theta;
    }
}

TEST(KS, CalibratedOnStandardNormal)
{
    int passes = 0;
    for (std::uint64_t rep = 0; rep < 40; ++rep) {
        passes += ksAgainstStdNormal(normals(10000, rep, "ks-calib")).pass ? 1 : 0;
    }
    EXPECT_GE(passes, 36);
}

TEST(KS, RejectsProductOfNormals)
{
    std::vector<double> x(10000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        StreamRng rng(35, "ks-prod", i);
        x[i] = rng.gaussian() * rng.gaussian();
    }
    const KSResult ks = ksAgainstStdNormal(x);
    EXPECT_FALSE(ks.pass);
    EXPECT_GT(ks.statistic, ks.threshold);
    EXPECT_NEAR(ks.threshold, 1.358 / 100.0, 1e-15);
    const SampleSummary s = summarize(x);
    EXPECT_LE(std::abs(s.kurtosis - 9.0), 4.0 * s.kurtosisSE);
}

TEST(KS, ConstantSamplesFail)
{
    const KSResult ks = ksAgainstStdNormal(std::vector<double>(500, 0.0));
    EXPECT_GE(ks.statistic, 0.5);
    EXPECT_FALSE(ks.pass);
    EXPECT_THROW(ksAgainstStdNormal(std::vector<double>(99, 0.0)), std::invalid_argument);
}

TEST(Summary, MomentsAndStandardErrors)
{
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0, 10.0};
    const SampleSummary s = summarize(x);
    const double mean = 4.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    double ss = 0.0;
    for (double v : x) {
        m2 += (v - mean) * (v - mean) / 5.0;
        m3 += std::pow(v - mean, 3) / 5.0;
        m4 += std::pow(v - mean, 4) / 5.0;
        ss += (v - mean) * (v - mean);
    }
    EXPECT_DOUBLE_EQ(s.mean, mean);
    EXPECT_NEAR(s.variance, ss / 4.0, 1e-12);
    EXPECT_NEAR(s.skewness, m3 / std::pow(m2, 1.5), 1e-12);
    EXPECT_NEAR(s.kurtosis, m4 / (m2 * m2), 1e-12);
    EXPECT_NEAR(s.meanSE, std::sqrt(ss / 4.0 / 5.0), 1e-12);
    EXPECT_THROW(summarize(std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST(Summary, JackknifeMatchesExplicitLeaveOneOut)
{
    std::vector<double> x = normals(60, 3, "jack");
    for (double& v : x) {
        v = v * v * v + 1.0;
    }
    const SampleSummary s = summarize(x);
    const std::size_t n = x.size();
    std::vector<double> kurt(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> y = x;
        y.erase(y.begin() + static_cast<std::ptrdiff_t>(i));
        const double m = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
        double c2 = 0.0;
        double c4 = 0.0;
        for (double v : y) {
            c2 += (v - m) * (v - m);
            c4 += std::pow(v - m, 4);
        }
        c2 /= static_cast<double>(y.size());
        c4 /= static_cast<double>(y.size());
        kurt[i] = c4 / (c2 * c2);
    }
    const double kbar = std::accumulate(kurt.begin(), kurt.end(), 0.0) / static_cast<double>(n);
    double acc = 0.0;
    for (double k : kurt) {
        acc += (k - kbar) * (k - kbar);
    }
    const double se = std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n) * acc);
    EXPECT_NEAR(s.kurtosisSE, se, 1e-9 * se);
}

TEST(Report, CltFamilyIsConsistent)
{
    const DiagnosticReport r = theoremOneReport(builtinSequence("clt", {4, 16, 64, 256}), 10000, 42);
    ASSERT_EQ(r.rows.size(), 4U);
    EXPECT_EQ(r.order, 2);
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const double k = r.rows[i].parameter;
        EXPECT_NEAR(r.rows[i].excess, 6.0 / k, 1e-12);
        EXPECT_NEAR(r.rows[i].contractionNorms[0], 1.0 / (8.0 * k), 1e-14);
        EXPECT_NEAR(r.rows[i].rawVariance, 1.0, 1e-12);
    }
}

TEST(Report, CltFamilyVerdictRate)
{
    int consistent = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const DiagnosticReport r = theoremOneReport(builtinSequence("clt", {4, 16, 64, 256}), 10000, seed);
        consistent += r.verdict == Verdict::GaussianConsistent ? 1 : 0;
    }
    EXPECT_GE(consistent, 16);
}

TEST(Report, ConstantCrossIsInconsistent)
{
    const DiagnosticReport r = theoremOneReport(builtinSequence("constant-cross", {1, 2, 3}), 10000, 42);
    EXPECT_EQ(r.verdict, Verdict::Inconsistent);
    for (const DiagnosticRow& row : r.rows) {
        EXPECT_NEAR(row.fourthMoment, 9.0, 1e-12);
        EXPECT_FALSE(row.ks.pass);
        EXPECT_LE(std::abs(row.mc.kurtosis - 9.0), 4.0 * row.mc.kurtosisSE);
    }
    EXPECT_EQ(verdictName(r.verdict), "inconsistent");
}

TEST(Report, SquareHasConstantExcess)
{
    const DiagnosticReport r = theoremOneReport(builtinSequence("square", {1, 2}), 1000, 1);
    for (const DiagnosticRow& row : r.rows) {
        EXPECT_NEAR(row.excess, 12.0, 1e-12);
    }
    EXPECT_EQ(r.verdict, Verdict::Inconsistent);
    EXPECT_THROW(builtinSequence("unknown", {1}), std::invalid_argument);
}

TEST(Report, DegenerateSequencesGiveNoVerdict)
{
    KernelSequence zero{"zero", [](double) { return basis2(2, 0, 1).scaled(0.0); }, {1, 2}, false};
    EXPECT_EQ(theoremOneReport(zero, 200, 1).verdict, Verdict::NoVerdict);

    KernelSequence blowup{"blowup", [](double k) { return basis2(2, 0, 1).scaled(std::pow(10.0, k)); }, {0, 5}, false};
    const DiagnosticReport r = theoremOneReport(blowup, 200, 1);
    EXPECT_EQ(r.verdict, Verdict::NoVerdict);
    EXPECT_FALSE(r.reason.empty());
}

TEST(Report, VerdictDoesNotDependOnScheduleOrder)
{
    const DiagnosticReport a = theoremOneReport(builtinSequence("clt", {4, 16, 64}), 2000, 9);
    const DiagnosticReport b = theoremOneReport(builtinSequence("clt", {64, 4, 16}), 2000, 9);
    EXPECT_EQ(a.verdict, b.verdict);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].parameter, b.rows[i].parameter);
        EXPECT_EQ(a.rows[i].mc.kurtosis, b.rows[i].mc.kurtosis);
    }

    KernelSequence down = builtinSequence("clt", {});
    down.name = "clt-reversed";
    down.generator = [g = builtinSequence("clt", {}).generator](double t) { return g(1.0 / t); };
    down.schedule = {1.0 / 4, 1.0 / 16, 1.0 / 64};
    down.towardLimitDecreasing = true;
    const DiagnosticReport c = theoremOneReport(down, 2000, 9);
    EXPECT_EQ(c.verdict, a.verdict);
    EXPECT_NEAR(c.rows.back().excess, a.rows.back().excess, 1e-12);
}
