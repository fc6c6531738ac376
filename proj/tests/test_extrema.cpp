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
#include <numbers>

#include "doctest.h"
#include "hbt/extrema.hpp"

using namespace hbt;
using namespace hbt::analytic;
constexpr double pi = std::numbers::pi;

TEST_SUITE("extrema")
{
    TEST_CASE("g3 grid extrema agree with brute force and sit at the known points")
    {
        const auto fast = g3_grid_extrema(SingleSourceMoments::coherent(), 720);
        const auto slow = reference::g3_grid_extrema(SingleSourceMoments::coherent(), 720);
        CHECK(fast.max_value == doctest::Approx(slow.max_value).epsilon(1e-14));
        CHECK(fast.min_value == doctest::Approx(slow.min_value).epsilon(1e-14));
        CHECK(fast.max_value == doctest::Approx(2.5));
        CHECK(fast.min_value == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(fast.argmax[0] == 0.0);
        CHECK(fast.argmax[1] == 0.0);
        // Minima at (2pi/3, 2pi/3) and its mirror (4pi/3, 4pi/3).
        CHECK(fast.argmin[0] == fast.argmin[1]);
        const bool at_known = std::abs(fast.argmin[0] - 2 * pi / 3) < 1e-12 ||
                              std::abs(fast.argmin[0] - 4 * pi / 3) < 1e-12;
        CHECK(at_known);
        CHECK(fast.evaluations == 720LL * 720);
    }

    TEST_CASE("g4 table kernel agrees with brute force")
    {
        for (const auto& m : {SingleSourceMoments::coherent(), SingleSourceMoments::thermal(),
                              SingleSourceMoments{1.5, 3.0, 8.0}}) {
            const auto fast = g4_grid_extrema(m, 48);
            const auto slow = reference::g4_grid_extrema(m, 48);
            CHECK(fast.max_value == doctest::Approx(slow.max_value).epsilon(1e-13));
            CHECK(fast.min_value == doctest::Approx(slow.min_value).epsilon(1e-13));
            CHECK(g4_point(m, fast.argmin[0], fast.argmin[1], fast.argmin[2]) ==
                  doctest::Approx(fast.min_value).epsilon(1e-13));
        }
    }

    TEST_CASE("g4 coherent global extrema on the full 720 grid")
    {
        const auto e = g4_grid_extrema(SingleSourceMoments::coherent(), 720);
        CHECK(e.max_value == doctest::Approx(4.375).epsilon(1e-14));
        CHECK(e.min_value == doctest::Approx(0.125).epsilon(1e-13));
        CHECK(e.min_value > 0.125 - 1e-12);
        CHECK(e.argmax == std::array<double, 3>{0.0, 0.0, 0.0});
    }

    TEST_CASE("results do not depend on the worker count")
    {
        const auto a = g4_grid_extrema(SingleSourceMoments::thermal(), 90, Execution{1});
        const auto b = g4_grid_extrema(SingleSourceMoments::thermal(), 90, Execution{8});
        CHECK(a.min_value == b.min_value);
        CHECK(a.max_value == b.max_value);
        CHECK(a.argmin == b.argmin);
        CHECK(a.argmax == b.argmax);
    }

    TEST_CASE("invalid grids")
    {
        CHECK_THROWS(g3_grid_extrema(SingleSourceMoments::coherent(), 0));
        CHECK_THROWS(g4_grid_extrema(SingleSourceMoments{2.0, 6.0, std::nullopt}, 10));
    }
}
