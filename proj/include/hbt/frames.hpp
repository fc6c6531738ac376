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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hbt/core_model.hpp"
#include "hbt/parallel.hpp"

namespace hbt::frames {

/// Row-major 2D intensity array.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    Image() = default;
    Image(int w, int h, double fill = 0.0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill)
    {
    }

    double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

struct StackMeta {
    /// "coherent", "thermal", or "unknown" for external data.
    std::string statistics = "unknown";
    double fringe_period_px = 0.0;
    std::uint64_t seed = 0;
    /// Quantization depth the values were produced at (0 = continuous).
    int bit_depth = 0;
    /// Counts per intensity unit when written to an integer format.
    double intensity_scale = 1.0;
    double speckle_rho_px = 0.0;
};

struct FrameStack {
    std::vector<Image> frames;
    double pixel_pitch_mm = 1.0;
    /// Column of the symmetric reference point x = 0.
    int center_x = 0;
    StackMeta meta;

    int width() const { return frames.empty() ? 0 : frames.front().width; }
    int height() const { return frames.empty() ? 0 : frames.front().height; }
    /// Throws if frames disagree in size, contain negative values, or the
    /// centre column lies outside the frame.
    void validate() const;
};

struct ProfileStack {
    std::vector<std::vector<double>> profiles;
    double pixel_pitch_mm = 1.0;
    int center_x = 0;

    std::size_t width() const { return profiles.empty() ? 0 : profiles.front().size(); }
};

struct SynthOptions {
    Statistics statistics = Statistics::coherent;
    double intensity_A = 1.0;
    double intensity_B = 1.0;
    int width = 640;
    int height = 64;
    int n_frames = 500;
    std::uint64_t seed = 1;
    /// Fringe period in pixels; sets the pixel pitch as lambda*l/(b*period).
    double fringe_period_px = 24.0;
    /// Explicit pixel pitch in mm; overrides fringe_period_px when > 0.
    double pixel_pitch_mm = 0.0;
    /// Column of x = 0; negative selects width / 2.
    int center_x = -1;
    /// 1/e length of the speckle field coherence exp(-|dx|/rho), pixels.
    double speckle_rho_px = 5000.0;
    /// Quantize to 2^bit_depth - 1 levels; 0 keeps continuous values.
    int bit_depth = 0;
    /// Intensity mapped to the top quantization level; 0 picks a default
    /// (peak fringe intensity for coherent light, 12x the mean for thermal).
    double full_scale = 0.0;
};

/// Per-pulse interference frames. Each frame gets a uniform random offset of
/// the inter-source phase; thermal frames multiply each source field by an
/// independent 1D circular-Gaussian speckle process along x.
FrameStack synth_frames(const Geometry& geometry, const SynthOptions& options,
                        Execution exec = {});

/// Mean over `band_height` rows centred vertically, per column.
ProfileStack reduce_y(const FrameStack& stack, int band_height = 50);

struct StackResult {
    std::vector<int> offset_px;   ///< x relative to the centre column
    std::vector<double> x_mm;
    std::vector<double> mean_intensity;
    std::vector<double> g3;
    std::vector<double> g3_err;
    std::vector<bool> g3_valid;
    std::vector<double> g4;
    std::vector<double> g4_err;
    std::vector<bool> g4_valid;
    std::size_t n_frames = 0;

    double intensity_visibility = 0.0;
    double g3_visibility = 0.0;
    double g4_visibility = 0.0;

    /// Index of offset 0.
    std::size_t center_index() const;
    std::vector<double> valid_g3() const;
    std::vector<double> valid_g4() const;
};

/// Frame-averaged intensity and the normalized correlators
///   g3(x) = <I(x) I(0) I(-x)> / (I(x) I(0) I(-x))
///   g4(x) = <I(x) I(0) I(-x) I(-2x)> / (I(x) I(0) I(-x) I(-2x))
/// for every offset x of the profile. A point is invalid when any constituent
/// column falls outside the profile or has zero mean intensity.
StackResult stack_correlate(const ProfileStack& profiles, Execution exec = {});

/// Robust visibility fraction used on correlator curves.
inline constexpr double kRobustFraction = 0.02;

namespace reference {
/// Serial, unblocked version of stack_correlate.
StackResult stack_correlate(const ProfileStack& profiles);
} // namespace reference

} // namespace hbt::frames
