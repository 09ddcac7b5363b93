// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace wchaos {

/// Worker count used by parallelFor. Values < 1 mean "hardware concurrency".
void setThreadCount(int threads);
int threadCount();

/// Runs body(begin, end) over contiguous chunks of [0, count). Each index is
/// visited exactly once; results must be written to per-index slots so that
/// output does not depend on the thread count. The first exception thrown by
/// a worker is rethrown on the caller.
void parallelFor(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace wchaos
