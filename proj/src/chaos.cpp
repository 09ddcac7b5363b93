// SPDX-License-Identifier: Apache-2.0
#include "wchaos/chaos.hpp"

#include "wchaos/combinatorics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace wchaos {

double hermite(int k, double x)
{
    if (k < 0) {
        throw std::invalid_argument("hermite: negative degree");
    }
    if (k == 0) {
        return 1.0;
    }
    double prev = 1.0;
    double cur = x;
    for (int j = 1; j < k; ++j) {
        const double next = x * cur - j * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double evalIntegral(const SymTensor& f, const GaussianSample& xi)
{
    const int n = f.order();
    if (n == 0) {
        return f.tensor().value();
    }
    const int d = f.dim();
    if (xi.dim() != d) {
        throw std::invalid_argument("evalIntegral: sample length " + std::to_string(xi.dim()) +
                                    " differs from tensor dim " + std::to_string(d));
    }
    // he[k * d + j] = He_k(xi_j)
    std::vector<double> he(static_cast<std::size_t>((n + 1) * d));
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k <= n; ++k) {
            he[static_cast<std::size_t>(k * d + j)] = hermite(k, xi.xi[static_cast<std::size_t>(j)]);
        }
    }
    std::vector<double> invFact(static_cast<std::size_t>(n + 1));
    for (int k = 0; k <= n; ++k) {
        invFact[static_cast<std::size_t>(k)] = 1.0 / factorial(k);
    }
    const double nFact = factorial(n);
    const auto c = f.coeffs();

    double total = 0.0;
    forEachSortedTuple(n, d, [&](std::span<const int> t) {
        std::size_t flat = 0;
        for (int v : t) {
            flat = flat * static_cast<std::size_t>(d) + static_cast<std::size_t>(v);
        }
        const double coeff = c[flat];
        if (coeff == 0.0) {
            return;
        }
        double term = coeff * nFact;
        for (std::size_t i = 0; i < t.size();) {
            std::size_t j = i;
            while (j < t.size() && t[j] == t[i]) {
                ++j;
            }
            const auto m = static_cast<int>(j - i);
            term *= invFact[static_cast<std::size_t>(m)] *
                    he[static_cast<std::size_t>(m * d + t[i])];
            i = j;
        }
        total += term;
    });
    return total;
}

void ChaosElement::add(const SymTensor& f)
{
    if (f.order() > 0 && f.dim() != dim_) {
        throw std::invalid_argument("ChaosElement::add: kernel dim differs from element dim");
    }
    auto it = terms_.find(f.order());
    if (it == terms_.end()) {
        terms_.emplace(f.order(), f);
    } else {
        it->second = it->second.plus(f);
    }
}

const SymTensor* ChaosElement::term(int order) const
{
    auto it = terms_.find(order);
    return it == terms_.end() ? nullptr : &it->second;
}

double ChaosElement::mean() const
{
    const SymTensor* t = term(0);
    return t == nullptr ? 0.0 : t->tensor().value();
}

ChaosElement productFormula(const SymTensor& f, const SymTensor& g)
{
    if (f.order() > 0 && g.order() > 0 && f.dim() != g.dim()) {
        throw std::invalid_argument("productFormula: dimension mismatch");
    }
    const int n = f.order();
    const int m = g.order();
    const int d = n > 0 ? f.dim() : g.dim();
    ChaosElement out(d);
    if (n == 0 || m == 0) {
        // scalar times kernel
        const double s = n == 0 ? f.tensor().value() : g.tensor().value();
        out.add((n == 0 ? g : f).scaled(s));
        return out;
    }
    for (int r = 0; r <= std::min(n, m); ++r) {
        const double w = factorial(r) * binomial(n, r) * binomial(m, r);
        out.add(symmetrize(contract(f, g, r)).scaled(w));
    }
    return out;
}

double evalChaosElement(const ChaosElement& c, const GaussianSample& xi)
{
    if (xi.dim() != c.dim()) {
        throw std::invalid_argument("evalChaosElement: sample length differs from element dim");
    }
    double total = 0.0;
    for (const auto& [order, f] : c.terms()) {
        total += evalIntegral(f, xi);
    }
    return total;
}

double secondMomentExact(const SymTensor& f)
{
    if (f.order() < 1) {
        throw std::invalid_argument("secondMomentExact requires order >= 1");
    }
    return factorial(f.order()) * innerProduct(f, f);
}

double fourthMomentExact(const SymTensor& f)
{
    const int n = f.order();
    if (n < 1) {
        throw std::invalid_argument("fourthMomentExact requires order >= 1");
    }
    double total = 0.0;
    for (int p = 0; p <= n; ++p) {
        const double c = factorial(p) * binomial(n, p) * binomial(n, p);
        double normSq = 0.0;
        if (p == 0) {
            normSq = symmetrizedSquareNormSquared(f);
        } else if (p == n) {
            const double f2 = innerProduct(f, f);
            normSq = f2 * f2;
        } else {
            const SymTensor s = symmetrize(contract(f, f, p));
            normSq = innerProduct(s, s);
        }
        total += c * c * factorial(2 * n - 2 * p) * normSq;
    }
    return total;
}

}  // namespace wchaos
