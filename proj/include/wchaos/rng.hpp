// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "wchaos/chaos.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace wchaos {

/// Seed of stream `index` within experiment `tag`: SplitMix64 finalizer
/// applied to (seed, FNV-1a(tag), index). Streams depend only on these three
/// values, never on scheduling.
std::uint64_t streamSeed(std::uint64_t seed, std::string_view tag, std::uint64_t index);

/// Per-stream generator: mt19937_64 seeded by streamSeed, standard normals
/// from std::normal_distribution.
class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::string_view tag, std::uint64_t index)
        : engine_(streamSeed(seed, tag, index))
    {
    }

    double gaussian() { return normal_(engine_); }
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

GaussianSample drawGaussianSample(int dim, StreamRng& rng);

}  // namespace wchaos
