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

#include "hbt/analytic.hpp"
#include "hbt/parallel.hpp"

namespace hbt::analytic {

/// Global extrema of a correlation pattern over a uniform phase grid with n
/// points per axis on [0, 2pi). Unused trailing phase slots are zero.
struct GridExtrema {
    double min_value = 0.0;
    double max_value = 0.0;
    std::array<double, 3> argmin{};
    std::array<double, 3> argmax{};
    long long evaluations = 0;
};

/// g3 over the full (phi12, phi23) grid.
GridExtrema g3_grid_extrema(const SingleSourceMoments& m, int n, Execution exec = {});

/// g4 over the full (phi12, phi13, phi14) grid: n^3 evaluations using a cosine
/// table indexed modulo n.
GridExtrema g4_grid_extrema(const SingleSourceMoments& m, int n, Execution exec = {});

namespace reference {
/// Serial brute force calling g3_point / g4_point at every grid node.
GridExtrema g3_grid_extrema(const SingleSourceMoments& m, int n);
GridExtrema g4_grid_extrema(const SingleSourceMoments& m, int n);
} // namespace reference

} // namespace hbt::analytic
