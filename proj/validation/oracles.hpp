// SPDX-License-Identifier: Apache-2.0
#pragma once

// Slow reference implementations used only to check the library. They share
// no code with it beyond the Tensor container.

#include "wchaos/tensor.hpp"

#include <map>
#include <vector>

namespace wchaos::oracle {

/// Contraction by explicit loops over every index tuple.
Tensor bruteContract(const Tensor& f, const Tensor& g, int p);

/// Average over all n! index permutations, entry by entry.
Tensor bruteSymmetrize(const Tensor& t);

/// Polynomial in xi_0..xi_{d-1}: exponent vector -> coefficient.
using Polynomial = std::map<std::vector<int>, double>;

Polynomial multiply(const Polynomial& a, const Polynomial& b);

/// I_n(f) expanded as a polynomial: sum over all (unsorted) index tuples of
/// f[i] times the Wick product prod_j He_{m_j}(xi_j), with Hermite
/// coefficients from the three-term recurrence on coefficient vectors.
Polynomial chaosPolynomial(const Tensor& f);

/// E[p(xi)] for independent standard normals: E[xi^k] = (k-1)!! for even k.
double gaussianExpectation(const Polynomial& p);

/// E[I_n(f)^k] through the symbolic expansion.
double symbolicMoment(const Tensor& f, int k);

}  // namespace wchaos::oracle
