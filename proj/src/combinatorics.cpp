// SPDX-License-Identifier: Apache-2.0
#include "wchaos/combinatorics.hpp"

#include <stdexcept>

namespace wchaos {

double factorial(int n)
{
    if (n < 0) {
        throw std::invalid_argument("factorial of a negative integer");
    }
    double r = 1.0;
    for (int i = 2; i <= n; ++i) {
        r *= i;
    }
    return r;
}

double binomial(int n, int k)
{
    if (k < 0 || k > n) {
        return 0.0;
    }
    double r = 1.0;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

void forEachSortedTuple(int order, int dim,
                        const std::function<void(std::span<const int>)>& visit)
{
    std::vector<int> t(static_cast<std::size_t>(order), 0);
    if (order == 0) {
        visit(t);
        return;
    }
    while (true) {
        visit(t);
        // rightmost position that can still grow
        int pos = order - 1;
        while (pos >= 0 && t[pos] == dim - 1) {
            --pos;
        }
        if (pos < 0) {
            return;
        }
        const int v = t[pos] + 1;
        for (int i = pos; i < order; ++i) {
            t[i] = v;
        }
    }
}

std::vector<int> runLengths(std::span<const int> sortedTuple)
{
    std::vector<int> runs;
    for (std::size_t i = 0; i < sortedTuple.size();) {
        std::size_t j = i;
        while (j < sortedTuple.size() && sortedTuple[j] == sortedTuple[i]) {
            ++j;
        }
        runs.push_back(static_cast<int>(j - i));
        i = j;
    }
    return runs;
}

}  // namespace wchaos
