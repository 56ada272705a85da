/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/core/random.hpp
 *
 * Copyright 2026 The faceaug Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#ifndef FACEAUG_CORE_RANDOM_HPP
#define FACEAUG_CORE_RANDOM_HPP

#include <cstdint>
#include <limits>
#include <random>
#include <utility>

namespace faceaug {

/**
 * One step of the SplitMix64 generator. Used to derive well-mixed, independent sub-seeds from
 * a run seed and a stream index, so every record and view gets its own reproducible stream
 * regardless of processing order.
 */
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

/**
 * Uniform integer in [0, n) from a 64-bit engine. Implemented here rather than with
 * std::uniform_int_distribution, whose output is not specified across standard libraries.
 * Rejection sampling keeps it exactly uniform.
 */
inline std::uint64_t uniform_index(std::mt19937_64& engine, std::uint64_t n)
{
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = engine();
    } while (x >= limit);
    return x % n;
}

/// Uniform double in [0, 1) using the top 53 bits.
inline double uniform_unit(std::mt19937_64& engine) { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

/// Deterministic Fisher-Yates shuffle on top of uniform_index.
template <typename RandomIt>
void deterministic_shuffle(RandomIt first, RandomIt last, std::mt19937_64& engine)
{
    const auto n = last - first;
    for (auto i = n - 1; i > 0; --i) {
        const auto j = static_cast<decltype(i)>(uniform_index(engine, static_cast<std::uint64_t>(i) + 1));
        std::swap(first[i], first[j]);
    }
}

} // namespace faceaug

#endif // FACEAUG_CORE_RANDOM_HPP
