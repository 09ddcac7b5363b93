// SPDX-License-Identifier: Apache-2.0
#include "wchaos/diagnostics.hpp"

#include "wchaos/chaos.hpp"
#include "wchaos/combinatorics.hpp"
#include "wchaos/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wchaos {

KSResult ksAgainstStdNormal(std::span<const double> samples)
{
    const std::size_t n = samples.size();
    if (n < 100) {
        throw std::invalid_argument("ksAgainstStdNormal: needs at least 100 samples");
    }
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    double d = 0.0;
    const auto nd = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double phi = 0.5 * std::erfc(-x[i] / std::numbers::sqrt2);
        d = std::max({d, static_cast<double>(i + 1) / nd - phi, phi - static_cast<double>(i) / nd});
    }
    KSResult r;
    r.statistic = d;
    r.n = n;
    r.threshold = 1.358 / std::sqrt(nd);
    r.pass = d <= r.threshold;
    return r;
}

namespace {

struct Moments {
    double mean, variance, skewness, kurtosis;
};

/// Moments from power sums s1..s4 of data shifted by `shift`.
Moments momentsFromSums(double s1, double s2, double s3, double s4, double count, double shift)
{
    const double m1 = s1 / count;
    const double m2 = s2 / count;
    const double m3 = s3 / count;
    const double m4 = s4 / count;
    const double c2 = m2 - m1 * m1;
    const double c3 = m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1;
    const double c4 = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
    Moments m{};
    m.mean = shift + m1;
    m.variance = c2 * count / (count - 1.0);
    m.skewness = c2 > 0.0 ? c3 / std::pow(c2, 1.5) : 0.0;
    m.kurtosis = c2 > 0.0 ? c4 / (c2 * c2) : 0.0;
    return m;
}

}  // namespace

SampleSummary summarize(std::span<const double> samples)
{
    const std::size_t n = samples.size();
    if (n < 3) {
        throw std::invalid_argument("summarize: needs at least 3 samples");
    }
    double shift = 0.0;
    for (double v : samples) {
        shift += v;
    }
    shift /= static_cast<double>(n);
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (double v : samples) {
        const double y = v - shift;
        s1 += y;
        s2 += y * y;
        s3 += y * y * y;
        s4 += y * y * y * y;
    }
    const auto nd = static_cast<double>(n);
    const Moments full = momentsFromSums(s1, s2, s3, s4, nd, shift);

    // delete-one jackknife from the leave-one-out power sums
    std::vector<Moments> loo(n);
    Moments avg{0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const double y = samples[i] - shift;
        const double y2 = y * y;
        loo[i] = momentsFromSums(s1 - y, s2 - y2, s3 - y2 * y, s4 - y2 * y2, nd - 1.0, shift);
        avg.mean += loo[i].mean;
        avg.variance += loo[i].variance;
        avg.skewness += loo[i].skewness;
        avg.kurtosis += loo[i].kurtosis;
    }
    avg.mean /= nd;
    avg.variance /= nd;
    avg.skewness /= nd;
    avg.kurtosis /= nd;
    double vm = 0.0, vv = 0.0, vs = 0.0, vk = 0.0;
    for (const Moments& m : loo) {
        vm += (m.mean - avg.mean) * (m.mean - avg.mean);
        vv += (m.variance - avg.variance) * (m.variance - avg.variance);
        vs += (m.skewness - avg.skewness) * (m.skewness - avg.skewness);
        vk += (m.kurtosis - avg.kurtosis) * (m.kurtosis - avg.kurtosis);
    }
    const double f = (nd - 1.0) / nd;

    SampleSummary s;
    s.n = n;
    s.mean = full.mean;
    s.variance = full.variance;
    s.skewness = full.skewness;
    s.kurtosis = full.kurtosis;
    s.meanSE = std::sqrt(f * vm);
    s.varianceSE = std::sqrt(f * vv);
    s.skewnessSE = std::sqrt(f * vs);
    s.kurtosisSE = std::sqrt(f * vk);
    return s;
}

Estimate meanWithError(std::span<const double> samples)
{
    const std::size_t n = samples.size();
    if (n < 2) {
        throw std::invalid_argument("meanWithError: needs at least 2 samples");
    }
    double mean = 0.0;
    for (double v : samples) {
        mean += v;
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : samples) {
        ss += (v - mean) * (v - mean);
    }
    const double var = ss / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

HSOperator hsFromMatrix(const Eigen::MatrixXd& m)
{
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("hsFromMatrix: matrix must be square and non-empty");
    }
    const double asym = (m - m.transpose()).norm();
    if (!std::isfinite(asym) || asym > 1e-10 * m.norm()) {
        throw std::invalid_argument("hsFromMatrix: matrix is not symmetric");
    }
    HSOperator op;
    op.matrix = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.matrix, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("hsFromMatrix: eigen-solve failed");
    }
    op.spectrum = es.eigenvalues();
    return op;
}

HSOperator hsFromKernel(const SymTensor& f)
{
    if (f.order() != 2) {
        throw std::invalid_argument("hsFromKernel: kernel order must be 2");
    }
    const int d = f.dim();
    Eigen::MatrixXd m(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            m(i, j) = f.tensor()[static_cast<std::size_t>(i) * static_cast<std::size_t>(d) +
                                 static_cast<std::size_t>(j)];
        }
    }
    return hsFromMatrix(m);
}

HSOperator hsFromKronecker(const std::vector<Eigen::MatrixXd>& factors)
{
    if (factors.empty()) {
        throw std::invalid_argument("hsFromKronecker: no factors");
    }
    Eigen::VectorXd spec = Eigen::VectorXd::Ones(1);
    for (const auto& f : factors) {
        const Eigen::VectorXd s = hsFromMatrix(f).spectrum;
        Eigen::VectorXd next(spec.size() * s.size());
        for (Eigen::Index i = 0; i < spec.size(); ++i) {
            for (Eigen::Index j = 0; j < s.size(); ++j) {
                next(i * s.size() + j) = spec(i) * s(j);
            }
        }
        spec = std::move(next);
    }
    std::sort(spec.data(), spec.data() + spec.size());
    HSOperator op;
    op.spectrum = std::move(spec);
    return op;
}

double cumulant(const HSOperator& op, int j)
{
    if (j < 1) {
        throw std::invalid_argument("cumulant: order must be >= 1");
    }
    if (j == 1) {
        return 0.0;
    }
    return std::pow(2.0, j - 1) * factorial(j - 1) * op.spectrum.array().pow(j).sum();
}

std::complex<double> charFunction(const HSOperator& op, double theta)
{
    using namespace std::complex_literals;
    std::complex<double> logPhi = 0.0;
    for (Eigen::Index i = 0; i < op.spectrum.size(); ++i) {
        const double l = op.spectrum(i);
        logPhi += -1i * theta * l - 0.5 * std::log(1.0 - 2i * theta * l);
    }
    return std::exp(logPhi);
}

double sampleSecondChaos(const HSOperator& op, StreamRng& rng)
{
    double v = 0.0;
    for (Eigen::Index i = 0; i < op.spectrum.size(); ++i) {
        const double x = rng.gaussian();
        v += op.spectrum(i) * (x * x - 1.0);
    }
    return v;
}

std::string verdictName(Verdict v)
{
    switch (v) {
    case Verdict::GaussianConsistent: return "gaussian-limit-consistent";
    case Verdict::Inconsistent: return "inconsistent";
    case Verdict::NoVerdict: return "no-verdict";
    }
    return "unknown";
}

DiagnosticReport theoremOneReport(const KernelSequence& seq, std::size_t mcSamples,
                                  std::uint64_t seed)
{
    if (seq.schedule.empty()) {
        throw std::invalid_argument("theoremOneReport: empty schedule");
    }
    std::vector<double> sched = seq.schedule;
    std::sort(sched.begin(), sched.end());
    if (seq.towardLimitDecreasing) {
        std::reverse(sched.begin(), sched.end());
    }

    DiagnosticReport rep;
    rep.name = seq.name;
    double vmin = INFINITY;
    double vmax = 0.0;
    for (std::size_t j = 0; j < sched.size(); ++j) {
        const SymTensor raw = seq.generator(sched[j]);
        if (raw.order() < 2) {
            throw std::invalid_argument("theoremOneReport: kernels must have order >= 2");
        }
        if (j == 0) {
            rep.order = raw.order();
        } else if (raw.order() != rep.order) {
            throw std::invalid_argument("theoremOneReport: kernel order changes along the schedule");
        }
        DiagnosticRow row;
        row.parameter = sched[j];
        row.dim = raw.dim();
        row.rawVariance = secondMomentExact(raw);
        if (!(row.rawVariance > 0.0) || !std::isfinite(row.rawVariance)) {
            rep.rows.push_back(row);
            rep.verdict = Verdict::NoVerdict;
            rep.reason = "variance is zero or not finite";
            return rep;
        }
        vmin = std::min(vmin, row.rawVariance);
        vmax = std::max(vmax, row.rawVariance);
        const SymTensor f = raw.scaled(1.0 / std::sqrt(row.rawVariance));
        row.fourthMoment = fourthMomentExact(f);
        row.excess = row.fourthMoment - 3.0;
        for (int p = 1; p < rep.order; ++p) {
            row.contractionNorms.push_back(contractionNormSquared(f, p));
        }

        if (mcSamples > 0) {
            std::vector<double> draws(mcSamples);
            const std::string tag = seq.name + "/" + std::to_string(j);
            if (rep.order == 2) {
                const HSOperator op = hsFromKernel(f);
                parallelFor(mcSamples, [&](std::size_t b, std::size_t e) {
                    for (std::size_t i = b; i < e; ++i) {
                        StreamRng rng(seed, tag, i);
                        draws[i] = sampleSecondChaos(op, rng);
                    }
                });
            } else {
                parallelFor(mcSamples, [&](std::size_t b, std::size_t e) {
                    for (std::size_t i = b; i < e; ++i) {
                        StreamRng rng(seed, tag, i);
                        draws[i] = evalIntegral(f, drawGaussianSample(f.dim(), rng));
                    }
                });
            }
            row.mc = summarize(draws);
            row.ks = ksAgainstStdNormal(draws);
        }
        rep.rows.push_back(std::move(row));
    }

    if (vmax / vmin > 1e8) {
        rep.verdict = Verdict::NoVerdict;
        rep.reason = "variances not normalizable (ratio exceeds 1e8)";
        return rep;
    }
    const DiagnosticRow& first = rep.rows.front();
    const DiagnosticRow& last = rep.rows.back();
    bool ok = last.excess < 0.5 * first.excess;
    for (std::size_t p = 0; p < first.contractionNorms.size(); ++p) {
        ok = ok && last.contractionNorms[p] < 0.5 * first.contractionNorms[p];
    }
    const bool ksOk = mcSamples == 0 || last.ks.pass;
    if (ok && ksOk) {
        rep.verdict = Verdict::GaussianConsistent;
        rep.reason = "excess and contraction norms shrink; final KS passes";
    } else {
        rep.verdict = Verdict::Inconsistent;
        rep.reason = !ok ? "excess or contraction norms do not shrink" : "final KS test fails";
    }
    return rep;
}

KernelSequence builtinSequence(const std::string& family, std::vector<double> schedule)
{
    KernelSequence s;
    s.name = family;
    s.schedule = std::move(schedule);
    if (family == "clt") {
        s.generator = [](double kk) {
            const int k = static_cast<int>(std::lround(kk));
            if (k < 1) {
                throw std::invalid_argument("clt family needs k >= 1");
            }
            const int d = 2 * k;
            std::vector<double> m(static_cast<std::size_t>(d) * static_cast<std::size_t>(d), 0.0);
            const double c = 0.5 / std::sqrt(static_cast<double>(k));
            for (int i = 0; i < k; ++i) {
                const auto a = static_cast<std::size_t>(2 * i);
                m[a * static_cast<std::size_t>(d) + a + 1] = c;
                m[(a + 1) * static_cast<std::size_t>(d) + a] = c;
            }
            return SymTensor::fromMatrix(d, m);
        };
    } else if (family == "constant-cross") {
        s.generator = [](double) {
            const int idx[] = {0, 1};
            return SymTensor::basisProduct(2, idx);
        };
    } else if (family == "square") {
        s.generator = [](double) {
            const int idx[] = {0, 0};
            return SymTensor::basisProduct(1, idx);
        };
    } else {
        throw std::invalid_argument("unknown kernel family '" + family + "'");
    }
    return s;
}

}  // namespace wchaos
