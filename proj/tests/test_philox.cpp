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

#include <cmath>
#include <set>

#include "doctest.h"
#include "hbt/compensated_sum.hpp"
#include "hbt/parallel.hpp"
#include "hbt/philox.hpp"

using hbt::CounterStream;
using hbt::Philox4x32;

TEST_SUITE("philox")
{
    TEST_CASE("known-answer vectors")
    {
        using C = Philox4x32::Counter;
        CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) ==
              C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
        CHECK(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                                {0xffffffff, 0xffffffff}) ==
              C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
        CHECK(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                                {0xa4093822, 0x299f31d0}) ==
              C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
        static_assert(Philox4x32::block({0, 0, 0, 0}, {0, 0})[0] == 0x6627e8d5);
    }

    TEST_CASE("streams are pure functions of (seed, index, stream)")
    {
        CounterStream a(42, 7, 1), b(42, 7, 1);
        for (int i = 0; i < 100; ++i) {
            CHECK(a.next_u32() == b.next_u32());
        }
        std::set<std::uint32_t> firsts;
        for (std::uint64_t seed : {1ULL, 2ULL, 1ULL << 33}) {
            for (std::uint64_t idx : {0ULL, 1ULL, 1ULL << 32}) {
                for (std::uint32_t s : {0U, 1U}) {
                    firsts.insert(CounterStream(seed, idx, s).next_u32());
                }
            }
        }
        CHECK(firsts.size() == 18);
    }

    TEST_CASE("uniform range and moments")
    {
        CounterStream s(3, 0, 0);
        double sum = 0.0, sum2 = 0.0;
        constexpr int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double u = s.uniform();
            REQUIRE(u >= 0.0);
            REQUIRE(u < 1.0);
            sum += u;
            sum2 += u * u;
        }
        CHECK(sum / n == doctest::Approx(0.5).epsilon(0.005));
        CHECK(sum2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.005));
        CounterStream p(3, 1, 0);
        for (int i = 0; i < 1000; ++i) {
            const double u = p.uniform_pos();
            CHECK((u > 0.0 && u <= 1.0));
        }
    }

    TEST_CASE("circular Gaussian intensity is exponential with the requested mean")
    {
        CounterStream s(11, 0, 0);
        constexpr int n = 400000;
        double m1 = 0, m2 = 0, re = 0, im = 0;
        for (int i = 0; i < n; ++i) {
            const auto z = s.circular_gaussian(2.5);
            const double I = std::norm(z);
            m1 += I;
            m2 += I * I;
            re += z.real();
            im += z.imag();
        }
        CHECK(m1 / n == doctest::Approx(2.5).epsilon(0.01));
        CHECK(m2 / n == doctest::Approx(2.0 * 2.5 * 2.5).epsilon(0.02));
        CHECK(std::abs(re / n) < 0.01);
        CHECK(std::abs(im / n) < 0.01);
    }
}

TEST_SUITE("parallel")
{
    struct Acc {
        hbt::CompensatedSum s;
        void merge(const Acc& o) { s.merge(o.s); }
    };

    TEST_CASE("block_reduce is bit-identical for any worker count")
    {
        auto run = [](int workers) {
            return hbt::block_reduce(
                       100003, 997, hbt::Execution{workers}, [] { return Acc{}; },
                       [](Acc& a, std::uint64_t b, std::uint64_t e) {
                           for (std::uint64_t i = b; i < e; ++i) {
                               a.s.add(std::sin(static_cast<double>(i)) * 1e8 + 1e-8 * i);
                           }
                       })
                .s.value();
        };
        const double one = run(1);
        CHECK(run(2) == one);
        CHECK(run(8) == one);
    }

    TEST_CASE("compensated sum recovers cancelled terms")
    {
        hbt::CompensatedSum s;
        s.add(1.0);
        s.add(1e100);
        s.add(1.0);
        s.add(-1e100);
        CHECK(s.value() == 2.0);

        hbt::CompensatedSum a, b;
        long double exact = 0;
        for (int i = 1; i <= 100000; ++i) {
            const double v = 1.0 / i;
            (i % 2 ? a : b).add(v);
            exact += v;
        }
        a.merge(b);
        CHECK(std::abs(a.value() - static_cast<double>(exact)) < 1e-14);
    }
}
