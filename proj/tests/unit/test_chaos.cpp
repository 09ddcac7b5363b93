// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include "wchaos/chaos.hpp"
#include "wchaos/diagnostics.hpp"
#include "wchaos/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

using namespace wchaos;

namespace {

SymTensor randomSym(int order, int dim, StreamRng& rng)
{
    std::vector<double> c(tensorSize(order, dim));
    for (double& v : c) {
        v = rng.gaussian();
    }
    return symmetrize(Tensor(order, dim, std::move(c)));
}

SymTensor basis2(int d, int i, int j)
{
    const int idx[] = {i, j};
    return SymTensor::basisProduct(d, idx);
}

SymTensor basis1(int d, int i)
{
    const int idx[] = {i};
    return SymTensor::basisProduct(d, idx);
}

}  // namespace

TEST(Hermite, Examples)
{
    EXPECT_EQ(hermite(0, 3.7), 1.0);
    EXPECT_EQ(hermite(2, 2.0), 3.0);
    EXPECT_EQ(hermite(3, 1.0), -2.0);
    EXPECT_DOUBLE_EQ(hermite(4, 1.5), std::pow(1.5, 4) - 6 * 1.5 * 1.5 + 3);
    EXPECT_THROW(hermite(-1, 0.0), std::invalid_argument);
}

TEST(EvalIntegral, Examples)
{
    const GaussianSample xi{{0.7, -1.3, 2.1}};
    EXPECT_DOUBLE_EQ(evalIntegral(basis2(3, 0, 0), xi), 0.7 * 0.7 - 1.0);
    EXPECT_DOUBLE_EQ(evalIntegral(basis2(3, 0, 1), xi), 0.7 * -1.3);
    EXPECT_DOUBLE_EQ(evalIntegral(basis1(3, 2), xi), 2.1);
    EXPECT_DOUBLE_EQ(evalIntegral(SymTensor::scalar(4.0), xi), 4.0);
}

TEST(EvalIntegral, RejectsDimensionMismatch)
{
    EXPECT_THROW(evalIntegral(basis2(3, 0, 0), GaussianSample{{1.0, 2.0}}), std::invalid_argument);
}

TEST(EvalIntegral, MatchesSymbolicExpansion)
{
    StreamRng rng(5, "eval-symbolic", 0);
    for (int n = 1; n <= 3; ++n) {
        for (int d = 1; d <= 3; ++d) {
            const SymTensor f = randomSym(n, d, rng);
            const auto poly = oracle::chaosPolynomial(f);
            const GaussianSample xi = drawGaussianSample(d, rng);
            double ref = 0.0;
            for (const auto& [e, c] : poly) {
                double term = c;
                for (int j = 0; j < d; ++j) {
                    term *= std::pow(xi.xi[static_cast<std::size_t>(j)], e[static_cast<std::size_t>(j)]);
                }
                ref += term;
            }
            EXPECT_NEAR(evalIntegral(f, xi), ref, 1e-10 * (1.0 + std::abs(ref)));
        }
    }
}

TEST(ProductFormula, Examples)
{
    const ChaosElement a = productFormula(basis1(1, 0), basis1(1, 0));
    ASSERT_NE(a.term(2), nullptr);
    ASSERT_NE(a.term(0), nullptr);
    EXPECT_DOUBLE_EQ(a.term(2)->coeffs()[0], 1.0);
    EXPECT_DOUBLE_EQ(a.mean(), 1.0);

    const ChaosElement b = productFormula(basis2(1, 0, 0), basis2(1, 0, 0));
    EXPECT_DOUBLE_EQ(b.mean(), 2.0);

    const ChaosElement c = productFormula(basis1(2, 0), basis1(2, 1));
    EXPECT_EQ(c.mean(), 0.0);
    ASSERT_NE(c.term(2), nullptr);
    const SymTensor expected = basis2(2, 0, 1);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_DOUBLE_EQ(c.term(2)->coeffs()[i], expected.coeffs()[i]);
    }
}

TEST(ProductFormula, PointwiseIdentityOnRandomKernels)
{
    StreamRng rng(9, "product-formula", 0);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + trial % 3;
        const int m = 1 + (trial / 3) % 3;
        const int d = 1 + trial % 6;
        const SymTensor f = randomSym(n, d, rng);
        const SymTensor g = randomSym(m, d, rng);
        const ChaosElement prod = productFormula(f, g);
        for (int k = 0; k < 20; ++k) {
            const GaussianSample xi = drawGaussianSample(d, rng);
            const double lhs = evalIntegral(f, xi) * evalIntegral(g, xi);
            const double rhs = evalChaosElement(prod, xi);
            EXPECT_LE(std::abs(lhs - rhs), 1e-9 * (1.0 + std::abs(lhs) + std::abs(rhs)));
        }
    }
}

TEST(ProductFormula, RejectsDimensionMismatch)
{
    EXPECT_THROW(productFormula(basis1(2, 0), basis1(3, 0)), std::invalid_argument);
}

TEST(ChaosElementEval, Examples)
{
    ChaosElement c(1);
    c.add(SymTensor::scalar(5.0));
    EXPECT_DOUBLE_EQ(evalChaosElement(c, GaussianSample{{0.3}}), 5.0);

    ChaosElement e(1);
    e.add(SymTensor::scalar(1.0));
    e.add(basis2(1, 0, 0));
    EXPECT_DOUBLE_EQ(evalChaosElement(e, GaussianSample{{0.0}}), 0.0);

    EXPECT_DOUBLE_EQ(evalChaosElement(productFormula(basis1(1, 0), basis1(1, 0)), GaussianSample{{2.0}}), 4.0);
    EXPECT_THROW(evalChaosElement(e, GaussianSample{{0.0, 1.0}}), std::invalid_argument);
}

TEST(Moments, SecondMomentExamples)
{
    EXPECT_DOUBLE_EQ(secondMomentExact(basis2(1, 0, 0)), 2.0);
    EXPECT_DOUBLE_EQ(secondMomentExact(basis2(2, 0, 1)), 1.0);
    StreamRng rng(1, "second-scale", 0);
    const SymTensor f = randomSym(3, 3, rng);
    EXPECT_NEAR(secondMomentExact(f.scaled(1.7)), 1.7 * 1.7 * secondMomentExact(f), 1e-12 * secondMomentExact(f) * 3);
    EXPECT_THROW(secondMomentExact(SymTensor::scalar(1.0)), std::invalid_argument);
}

TEST(Moments, FourthMomentExamples)
{
    EXPECT_DOUBLE_EQ(fourthMomentExact(basis1(1, 0)), 3.0);
    EXPECT_DOUBLE_EQ(fourthMomentExact(basis2(1, 0, 0)), 60.0);
    EXPECT_DOUBLE_EQ(fourthMomentExact(basis2(2, 0, 1)), 9.0);
}

TEST(Moments, FourthMomentMatchesSymbolicOracle)
{
    StreamRng rng(13, "fourth-oracle", 0);
    for (int n = 1; n <= 2; ++n) {
        for (int d = 1; d <= 3; ++d) {
            for (int k = 0; k < 3; ++k) {
                const SymTensor f = randomSym(n, d, rng);
                const double ora = oracle::symbolicMoment(f, 4);
                EXPECT_NEAR(fourthMomentExact(f), ora, 1e-9 * ora);
                const double ora2 = oracle::symbolicMoment(f, 2);
                EXPECT_NEAR(secondMomentExact(f), ora2, 1e-9 * ora2);
            }
        }
    }
}

TEST(Moments, FourthMomentDominatesGaussianValue)
{
    StreamRng rng(13, "fourth-lower", 0);
    for (int n = 1; n <= 3; ++n) {
        const SymTensor f = randomSym(n, 3, rng);
        const double v = secondMomentExact(f);
        const double m4 = fourthMomentExact(f);
        if (n == 1) {
            EXPECT_NEAR(m4, 3.0 * v * v, 1e-12 * m4);
        } else {
            EXPECT_GT(m4, 3.0 * v * v);
        }
    }
}

namespace {

std::vector<double> drawIntegrals(const SymTensor& f, std::size_t n, const char* tag)
{
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        StreamRng rng(2024, tag, i);
        out[i] = evalIntegral(f, drawGaussianSample(f.dim(), rng));
    }
    return out;
}

}  // namespace

TEST(MonteCarlo, IsometryAndFourthMoment)
{
    StreamRng rng(17, "mc-kernel", 0);
    const SymTensor f = randomSym(2, 3, rng).scaled(0.5);
    const auto draws = drawIntegrals(f, 200000, "mc-iso");
    std::vector<double> sq(draws.size());
    std::vector<double> q4(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i) {
        sq[i] = draws[i] * draws[i];
        q4[i] = sq[i] * sq[i];
    }
    const Estimate m2 = meanWithError(sq);
    EXPECT_LE(std::abs(m2.value - secondMomentExact(f)), 4.0 * m2.se);
    const Estimate m4 = meanWithError(q4);
    EXPECT_LE(std::abs(m4.value - fourthMomentExact(f)), 4.0 * m4.se);
    const Estimate mean = meanWithError(draws);
    EXPECT_LE(std::abs(mean.value), 4.0 * mean.se);
}

TEST(MonteCarlo, DifferentOrdersAreUncorrelated)
{
    StreamRng rng(17, "mc-orth", 0);
    const SymTensor f = randomSym(1, 3, rng);
    const SymTensor g = randomSym(2, 3, rng);
    const SymTensor h = randomSym(3, 3, rng);
    const std::size_t n = 50000;
    std::vector<double> fg(n);
    std::vector<double> gh(n);
    for (std::size_t i = 0; i < n; ++i) {
        StreamRng r(99, "mc-orth-draw", i);
        const GaussianSample xi = drawGaussianSample(3, r);
        const double a = evalIntegral(f, xi);
        const double b = evalIntegral(g, xi);
        const double c = evalIntegral(h, xi);
        fg[i] = a * b;
        gh[i] = b * c;
    }
    const Estimate e1 = meanWithError(fg);
    const Estimate e2 = meanWithError(gh);
    EXPECT_LE(std::abs(e1.value), 4.0 * e1.se);
    EXPECT_LE(std::abs(e2.value), 4.0 * e2.se);
}
