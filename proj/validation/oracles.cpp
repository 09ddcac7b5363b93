// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wchaos::oracle {

namespace {

/// Advances an odometer over {0..dim-1}^len; false once it wraps around.
bool next(std::vector<int>& idx, int dim)
{
    for (int k = static_cast<int>(idx.size()) - 1; k >= 0; --k) {
        if (++idx[static_cast<std::size_t>(k)] < dim) {
            return true;
        }
        idx[static_cast<std::size_t>(k)] = 0;
    }
    return false;
}

std::size_t flat(const std::vector<int>& idx, int dim)
{
    std::size_t f = 0;
    for (int v : idx) {
        f = f * static_cast<std::size_t>(dim) + static_cast<std::size_t>(v);
    }
    return f;
}

/// Coefficients of He_k, lowest degree first.
std::vector<double> hermiteCoefficients(int k)
{
    std::vector<double> prev{1.0};
    if (k == 0) {
        return prev;
    }
    std::vector<double> cur{0.0, 1.0};
    for (int j = 1; j < k; ++j) {
        std::vector<double> nxt(cur.size() + 1, 0.0);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            nxt[i + 1] += cur[i];
        }
        for (std::size_t i = 0; i < prev.size(); ++i) {
            nxt[i] -= j * prev[i];
        }
        prev = cur;
        cur = nxt;
    }
    return cur;
}

}  // namespace

Tensor bruteContract(const Tensor& f, const Tensor& g, int p)
{
    const int n = f.order();
    const int m = g.order();
    const int d = f.dim();
    if (g.dim() != d || p < 0 || p > std::min(n, m)) {
        throw std::invalid_argument("bruteContract: bad shapes");
    }
    std::vector<double> out(static_cast<std::size_t>(std::pow(d, n + m - 2 * p)), 0.0);
    std::vector<int> fi(static_cast<std::size_t>(n), 0);
    std::vector<int> gi(static_cast<std::size_t>(m), 0);
    std::vector<int> oi(static_cast<std::size_t>(n + m - 2 * p), 0);
    do {
        do {
            bool match = true;
            for (int k = 0; k < p; ++k) {
                match = match && fi[static_cast<std::size_t>(k)] == gi[static_cast<std::size_t>(k)];
            }
            if (!match) {
                continue;
            }
            std::size_t o = 0;
            for (int k = p; k < n; ++k) {
                oi[o++] = fi[static_cast<std::size_t>(k)];
            }
            for (int k = p; k < m; ++k) {
                oi[o++] = gi[static_cast<std::size_t>(k)];
            }
            out[flat(oi, d)] += f[flat(fi, d)] * g[flat(gi, d)];
        } while (next(gi, d));
    } while (next(fi, d));
    return Tensor(n + m - 2 * p, d, std::move(out));
}

Tensor bruteSymmetrize(const Tensor& t)
{
    const int n = t.order();
    const int d = t.dim();
    std::vector<double> out(t.size(), 0.0);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    std::vector<int> permuted(static_cast<std::size_t>(n));
    double count = 0.0;
    do {
        count += 1.0;
        std::fill(idx.begin(), idx.end(), 0);
        do {
            for (int k = 0; k < n; ++k) {
                permuted[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])];
            }
            out[flat(idx, d)] += t[flat(permuted, d)];
        } while (next(idx, d));
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (double& v : out) {
        v /= count;
    }
    return Tensor(n, d, std::move(out));
}

Polynomial multiply(const Polynomial& a, const Polynomial& b)
{
    Polynomial out;
    for (const auto& [ea, ca] : a) {
        for (const auto& [eb, cb] : b) {
            std::vector<int> e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) {
                e[i] = ea[i] + eb[i];
            }
            out[e] += ca * cb;
        }
    }
    return out;
}

Polynomial chaosPolynomial(const Tensor& f)
{
    const int n = f.order();
    const int d = f.dim();
    Polynomial out;
    if (n == 0) {
        out[std::vector<int>(static_cast<std::size_t>(d), 0)] = f.value();
        return out;
    }
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    do {
        const double c = f[flat(idx, d)];
        if (c == 0.0) {
            continue;
        }
        std::vector<int> mult(static_cast<std::size_t>(d), 0);
        for (int v : idx) {
            ++mult[static_cast<std::size_t>(v)];
        }
        Polynomial term;
        term[std::vector<int>(static_cast<std::size_t>(d), 0)] = c;
        for (int j = 0; j < d; ++j) {
            const auto h = hermiteCoefficients(mult[static_cast<std::size_t>(j)]);
            Polynomial hp;
            for (std::size_t k = 0; k < h.size(); ++k) {
                if (h[k] != 0.0) {
                    std::vector<int> e(static_cast<std::size_t>(d), 0);
                    e[static_cast<std::size_t>(j)] = static_cast<int>(k);
                    hp[e] = h[k];
                }
            }
            term = multiply(term, hp);
        }
        for (const auto& [e, v] : term) {
            out[e] += v;
        }
    } while (next(idx, d));
    return out;
}

double gaussianExpectation(const Polynomial& p)
{
    double total = 0.0;
    for (const auto& [e, c] : p) {
        double m = c;
        for (int k : e) {
            if (k % 2 != 0) {
                m = 0.0;
                break;
            }
            for (int j = k - 1; j > 1; j -= 2) {
                m *= j;
            }
        }
        total += m;
    }
    return total;
}

double symbolicMoment(const Tensor& f, int k)
{
    const Polynomial base = chaosPolynomial(f);
    Polynomial acc;
    acc[std::vector<int>(static_cast<std::size_t>(f.dim()), 0)] = 1.0;
    for (int i = 0; i < k; ++i) {
        acc = multiply(acc, base);
    }
    return gaussianExpectation(acc);
}

}  // namespace wchaos::oracle
