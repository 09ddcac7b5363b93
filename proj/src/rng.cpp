// SPDX-License-Identifier: Apache-2.0
#include "wchaos/rng.hpp"

namespace wchaos {

namespace {

std::uint64_t splitmix(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace

std::uint64_t streamSeed(std::uint64_t seed, std::string_view tag, std::uint64_t index)
{
    std::uint64_t h = splitmix(seed);
    h = splitmix(h ^ fnv1a(tag));
    return splitmix(h ^ index);
}

GaussianSample drawGaussianSample(int dim, StreamRng& rng)
{
    GaussianSample s;
    s.xi.resize(static_cast<std::size_t>(dim));
    for (double& v : s.xi) {
        v = rng.gaussian();
    }
    return s;
}

}  // namespace wchaos
