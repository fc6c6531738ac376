/*
   Copyright 2026 The hbtsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace hbt {

/// Philox4x32-10 block function (Salmon et al., SC'11): a keyed bijection on
/// 128-bit counters.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter block(Counter ctr, Key key)
    {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeylA;
                key[1] += kWeylB;
            }
            const std::uint64_t p0 = std::uint64_t{kMulA} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMulB} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMulA = 0xD2511F53;
    static constexpr std::uint32_t kMulB = 0xCD9E8D57;
    static constexpr std::uint32_t kWeylA = 0x9E3779B9;
    static constexpr std::uint32_t kWeylB = 0xBB67AE85;
};

/// Random stream addressed by (seed, index, stream). Every draw is a pure
/// function of that triple and the draw position, so work can be split across
/// threads in any order without changing results.
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint64_t index, std::uint32_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          index_lo_(static_cast<std::uint32_t>(index)),
          index_hi_(static_cast<std::uint32_t>(index >> 32)),
          stream_(stream)
    {
    }

    std::uint32_t next_u32()
    {
        if (pos_ == 4) {
            buffer_ = Philox4x32::block({block_, stream_, index_lo_, index_hi_}, key_);
            ++block_;
            pos_ = 0;
        }
        return buffer_[pos_++];
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform()
    {
        const std::uint64_t hi = next_u32() >> 5;
        const std::uint64_t lo = next_u32() >> 6;
        return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
    }

    /// Uniform on (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }

    double phase() { return 2.0 * std::numbers::pi * uniform(); }

    /// Circularly symmetric complex Gaussian with E|z|^2 = mean_intensity.
    /// |z|^2 is exponential, arg z uniform; two uniforms per draw.
    std::complex<double> circular_gaussian(double mean_intensity)
    {
        const double r = std::sqrt(-mean_intensity * std::log(uniform_pos()));
        return std::polar(r, phase());
    }

private:
    Philox4x32::Key key_;
    std::uint32_t index_lo_;
    std::uint32_t index_hi_;
    std::uint32_t stream_;
    std::uint32_t block_ = 0;
    Philox4x32::Counter buffer_{};
    int pos_ = 4;
};

} // namespace hbt
