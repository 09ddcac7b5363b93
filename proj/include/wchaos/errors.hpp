// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

namespace wchaos {

/// A computation that is well posed in exact arithmetic failed numerically
/// (e.g. a Gram matrix that stays indefinite after maximal jitter).
/// Invalid inputs raise std::invalid_argument instead.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace wchaos
