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

// Shared between the OpenMP kernels and the serial reference estimators.

#include <cstdint>
#include <vector>

#include "hbt/montecarlo.hpp"
#include "hbt/philox.hpp"

namespace hbt::mc::detail {

/// Per-detector configuration at one scan point. Point runs use `phi`;
/// extended runs (and thermal_extended3 scans) use the positions `x`. `theta`
/// is empty when no analyzers are present.
struct DetectorSetup {
    std::vector<double> phi;
    std::vector<double> x;
    std::vector<double> theta;
    bool use_positions = false;

    std::size_t detectors() const { return use_positions ? x.size() : phi.size(); }
};

DetectorSetup setup_for_order(const McConfig& cfg, int order);
std::vector<DetectorSetup> setups_for_scan(const McConfig& cfg, analytic::ScanMode mode,
                                           std::span<const double> grid);

/// True if the source is drawn as an emitter grid in this run.
bool uses_emitter_grid(const McConfig& cfg, const SourceSpec& s);

/// Draws one source. For emitter-grid sources `emitters` receives
/// emitters_per_source amplitudes and amp/phase are zero; otherwise `emitters`
/// is left untouched.
void draw_source(const McConfig& cfg, const SourceSpec& s, std::uint64_t shot_index,
                 std::uint32_t stream, Complex& amp, double& phase, std::vector<Complex>& emitters);

inline constexpr std::uint32_t kStreamA = 0;
inline constexpr std::uint32_t kStreamB = 1;
inline constexpr std::uint64_t kShotsPerBlock = 2048;

/// std / sqrt(n) of a sample given its sum and sum of squares.
double standard_error(double sum, double sum_sq, std::uint64_t n);

} // namespace hbt::mc::detail
