// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <vector>

namespace wchaos {

double factorial(int n);
double binomial(int n, int k);

/// Calls visit(tuple) for every non-decreasing tuple in {0..dim-1}^order, in
/// lexicographic order. The span is only valid during the call.
void forEachSortedTuple(int order, int dim,
                        const std::function<void(std::span<const int>)>& visit);

/// Multiplicity of each distinct value in a sorted tuple, in order of
/// appearance (e.g. (0,0,3) -> {2,1}).
std::vector<int> runLengths(std::span<const int> sortedTuple);

}  // namespace wchaos
