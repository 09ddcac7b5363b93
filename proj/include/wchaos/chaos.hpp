// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wchaos/tensor.hpp"

#include <map>
#include <span>
#include <vector>

namespace wchaos {

/// Independent standard normal coordinates xi_j = X(e_j) of the isonormal
/// process on the orthonormal basis. X(h) = <h, xi>.
struct GaussianSample {
    std::vector<double> xi;

    [[nodiscard]] int dim() const { return static_cast<int>(xi.size()); }
};

/// Probabilists' Hermite polynomial He_k(x).
double hermite(int k, double x);

/// Multiple Wiener-Ito integral I_n(f) evaluated at xi:
///   sum over sorted tuples t of f[t] * n!/prod m_j(t)! * prod He_{m_j(t)}(xi_j),
/// with m(t) the multiplicity vector of t. Order 0 returns the scalar.
double evalIntegral(const SymTensor& f, const GaussianSample& xi);

/// Random variable with a finite chaos expansion, one symmetric kernel per
/// order. Order 0 is the mean.
class ChaosElement {
public:
    explicit ChaosElement(int dim) : dim_(dim) {}

    [[nodiscard]] int dim() const { return dim_; }

    /// Adds f into the term of order f.order().
    void add(const SymTensor& f);

    [[nodiscard]] const std::map<int, SymTensor>& terms() const { return terms_; }
    [[nodiscard]] const SymTensor* term(int order) const;
    [[nodiscard]] double mean() const;

private:
    int dim_;
    std::map<int, SymTensor> terms_;
};

/// I_n(f) I_m(g) = sum_{r=0}^{min(n,m)} r! C(n,r) C(m,r) I_{n+m-2r}((f (x)_r g)_s).
ChaosElement productFormula(const SymTensor& f, const SymTensor& g);

double evalChaosElement(const ChaosElement& c, const GaussianSample& xi);

/// E[I_n(f)^2] = n! ||f||^2.
double secondMomentExact(const SymTensor& f);

/// E[I_n(f)^4] = sum_{p=0}^{n} (p! C(n,p)^2)^2 (2n-2p)! ||(f (x)_p f)_s||^2.
double fourthMomentExact(const SymTensor& f);

}  // namespace wchaos
