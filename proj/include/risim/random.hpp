// SPDX-License-Identifier: Apache-2.0
//
// risim - link-level simulator for reconfigurable intelligent surfaces
// Copyright (C) 2026 The risim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "risim/units.hpp"

#include <cmath>
#include <complex>
#include <cstdint>

namespace risim
{
    inline std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // Seed of sub-stream `index` derived from a base seed. Every pilot slot and every
    // Monte-Carlo trial draws from its own sub-stream.
    inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index)
    {
        return splitmix64(splitmix64(seed) ^ splitmix64(index + 0xD1B54A32D192ED03ULL));
    }

    // SplitMix64 as a UniformRandomBitGenerator. Seeding is a single word, which keeps one
    // stream per pilot slot cheap even for sweeps with 10^4+ slots.
    class SplitMix64
    {
    public:
        using result_type = std::uint64_t;

        explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

        static constexpr result_type min() { return 0; }
        static constexpr result_type max() { return ~result_type(0); }

        result_type operator()()
        {
            const result_type out = splitmix64(state_);
            state_ += 0x9E3779B97F4A7C15ULL;
            return out;
        }

    private:
        std::uint64_t state_;
    };

    // Circularly-symmetric complex Gaussian samples from a SplitMix64 stream. The transform is
    // spelled out (instead of std::normal_distribution) so sequences are identical across
    // standard library implementations.
    template <typename T>
    class ComplexGaussian
    {
    public:
        explicit ComplexGaussian(std::uint64_t seed) : engine_(seed) {}

        std::complex<T> operator()(T variance)
        {
            const T u1 = uniform_open_closed();
            const T u2 = uniform_open_closed();
            return std::polar(std::sqrt(-variance * std::log(u1)), two_pi<T> * u2);
        }

    private:
        // Uniform on (0, 1] with 53 bits of resolution
        T uniform_open_closed()
        {
            return T(double((engine_() >> 11) + 1) * 0x1.0p-53);
        }

        SplitMix64 engine_;
    };
}
