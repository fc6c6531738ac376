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

#include "hbt/frames.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hbt/analytic.hpp"
#include "hbt/compensated_sum.hpp"
#include "hbt/errors.hpp"
#include "hbt/philox.hpp"

namespace hbt::frames {

namespace {

constexpr std::uint32_t kStreamOffset = 0;
constexpr std::uint32_t kStreamSpeckleA = 1;
constexpr std::uint32_t kStreamSpeckleB = 2;
constexpr double kMinFringePeriodPx = 6.0;
constexpr std::uint64_t kFramesPerBlock = 8;

/// Stationary circular-Gaussian AR(1) process with unit mean intensity and
/// field correlation exp(-|dx| / rho).
void speckle_line(CounterStream& rng, double rho_px, std::vector<Complex>& out)
{
    const double r = std::exp(-1.0 / rho_px);
    const double innovation = 1.0 - r * r;
    out[0] = rng.circular_gaussian(1.0);
    for (std::size_t x = 1; x < out.size(); ++x) {
        out[x] = r * out[x - 1] + rng.circular_gaussian(innovation);
    }
}

double default_full_scale(const SynthOptions& o)
{
    if (o.statistics == Statistics::coherent) {
        const double peak = std::sqrt(o.intensity_A) + std::sqrt(o.intensity_B);
        return peak * peak;
    }
    return 12.0 * (o.intensity_A + o.intensity_B);
}

} // namespace

void FrameStack::validate() const
{
    if (frames.empty()) {
        throw DomainError("frame stack is empty");
    }
    const int w = width();
    const int h = height();
    if (w < 1 || h < 1) {
        throw DomainError("frames must have positive dimensions");
    }
    for (const Image& f : frames) {
        if (f.width != w || f.height != h ||
            f.pixels.size() != static_cast<std::size_t>(w) * static_cast<std::size_t>(h)) {
            throw DomainError("all frames in a stack must share width and height");
        }
        for (double v : f.pixels) {
            if (!(v >= 0.0) || !std::isfinite(v)) {
                throw DomainError("frame pixel values must be finite and non-negative");
            }
        }
    }
    if (center_x < 0 || center_x >= w) {
        throw DomainError("centre column lies outside the frame");
    }
    if (!(pixel_pitch_mm > 0.0)) {
        throw DomainError("pixel pitch must be positive");
    }
}

FrameStack synth_frames(const Geometry& geometry, const SynthOptions& o, Execution exec)
{
    geometry.validate();
    if (o.width < 1 || o.height < 1 || o.n_frames < 1) {
        throw DomainError("frame width, height and count must be positive");
    }
    if (o.intensity_A < 0.0 || o.intensity_B < 0.0) {
        throw DomainError("source intensities must be non-negative");
    }
    if (o.bit_depth < 0 || o.bit_depth > 16) {
        throw DomainError("bit depth must be between 0 and 16");
    }
    if (o.statistics == Statistics::thermal && !(o.speckle_rho_px > 0.0)) {
        throw DomainError("speckle correlation length must be positive");
    }

    const double fringe_mm = geometry.fringe_period();
    const double pitch = o.pixel_pitch_mm > 0.0 ? o.pixel_pitch_mm : fringe_mm / o.fringe_period_px;
    if (!(pitch > 0.0) || !std::isfinite(pitch)) {
        throw InvalidGeometry("pixel pitch must be positive");
    }
    const double period_px = fringe_mm / pitch;
    if (period_px < kMinFringePeriodPx) {
        throw InvalidGeometry("fringe period of " + std::to_string(period_px) +
                              " px is below the 6 px sampling limit");
    }
    const int center = o.center_x < 0 ? o.width / 2 : o.center_x;
    if (center >= o.width) {
        throw InvalidGeometry("centre column outside the frame");
    }

    FrameStack stack;
    stack.pixel_pitch_mm = pitch;
    stack.center_x = center;
    stack.meta.statistics = to_string(o.statistics);
    stack.meta.fringe_period_px = period_px;
    stack.meta.seed = o.seed;
    stack.meta.bit_depth = o.bit_depth;
    stack.meta.speckle_rho_px = o.statistics == Statistics::thermal ? o.speckle_rho_px : 0.0;
    const double full_scale = o.full_scale > 0.0 ? o.full_scale : default_full_scale(o);
    const int levels_bits = o.bit_depth > 0 ? o.bit_depth : 16;
    const double maxval = std::ldexp(1.0, levels_bits) - 1.0;
    stack.meta.intensity_scale = full_scale > 0.0 ? maxval / full_scale : 1.0;
    stack.frames.resize(static_cast<std::size_t>(o.n_frames));

    // Half the fringe phase goes to each source: E = E_A e^{i(phi/2 + theta)} + E_B e^{-i phi/2}.
    const double phase_per_px = 2.0 * std::numbers::pi / period_px;
    const double amp_a = std::sqrt(o.intensity_A);
    const double amp_b = std::sqrt(o.intensity_B);
    const bool thermal = o.statistics == Statistics::thermal;
    const double scale = stack.meta.intensity_scale;

#pragma omp parallel for schedule(dynamic, 4) num_threads(exec.resolved())
    for (int j = 0; j < o.n_frames; ++j) {
        const auto index = static_cast<std::uint64_t>(j);
        CounterStream offset_rng(o.seed, index, kStreamOffset);
        const double theta = offset_rng.phase();

        std::vector<Complex> sa(static_cast<std::size_t>(o.width), Complex{1.0, 0.0});
        std::vector<Complex> sb(static_cast<std::size_t>(o.width), Complex{1.0, 0.0});
        if (thermal) {
            CounterStream rng_a(o.seed, index, kStreamSpeckleA);
            CounterStream rng_b(o.seed, index, kStreamSpeckleB);
            speckle_line(rng_a, o.speckle_rho_px, sa);
            speckle_line(rng_b, o.speckle_rho_px, sb);
        }

        std::vector<double> row(static_cast<std::size_t>(o.width));
        for (int x = 0; x < o.width; ++x) {
            const double half_phase = 0.5 * phase_per_px * (x - center);
            const Complex field = amp_a * sa[static_cast<std::size_t>(x)] * std::polar(1.0, half_phase + theta) +
                                  amp_b * sb[static_cast<std::size_t>(x)] * std::polar(1.0, -half_phase);
            double v = std::norm(field);
            if (o.bit_depth > 0) {
                v = std::min(maxval, std::round(v * scale)) / scale;
            }
            row[static_cast<std::size_t>(x)] = v;
        }

        Image frame(o.width, o.height);
        for (int y = 0; y < o.height; ++y) {
            std::copy(row.begin(), row.end(), frame.pixels.begin() + static_cast<std::ptrdiff_t>(y) * o.width);
        }
        stack.frames[static_cast<std::size_t>(j)] = std::move(frame);
    }
    return stack;
}

ProfileStack reduce_y(const FrameStack& stack, int band_height)
{
    stack.validate();
    const int h = stack.height();
    if (band_height < 1 || band_height > h) {
        throw DomainError("y band of " + std::to_string(band_height) + " rows does not fit in " +
                          std::to_string(h) + " rows");
    }
    const int first = (h - band_height) / 2;
    const int w = stack.width();

    ProfileStack out;
    out.pixel_pitch_mm = stack.pixel_pitch_mm;
    out.center_x = stack.center_x;
    out.profiles.reserve(stack.frames.size());
    for (const Image& f : stack.frames) {
        std::vector<double> p(static_cast<std::size_t>(w));
        for (int x = 0; x < w; ++x) {
            double s = 0.0;
            for (int y = first; y < first + band_height; ++y) {
                s += f.at(x, y);
            }
            p[static_cast<std::size_t>(x)] = s / band_height;
        }
        out.profiles.push_back(std::move(p));
    }
    return out;
}

std::size_t StackResult::center_index() const
{
    const auto it = std::find(offset_px.begin(), offset_px.end(), 0);
    return static_cast<std::size_t>(it - offset_px.begin());
}

std::vector<double> StackResult::valid_g3() const
{
    std::vector<double> v;
    for (std::size_t i = 0; i < g3.size(); ++i) {
        if (g3_valid[i]) {
            v.push_back(g3[i]);
        }
    }
    return v;
}

std::vector<double> StackResult::valid_g4() const
{
    std::vector<double> v;
    for (std::size_t i = 0; i < g4.size(); ++i) {
        if (g4_valid[i]) {
            v.push_back(g4[i]);
        }
    }
    return v;
}

namespace {

void check_profiles(const ProfileStack& p)
{
    if (p.profiles.size() < 2) {
        throw DomainError("stack correlation needs at least two profiles");
    }
    const std::size_t w = p.width();
    for (const auto& row : p.profiles) {
        if (row.size() != w) {
            throw DomainError("profiles differ in length");
        }
    }
    if (p.center_x < 0 || static_cast<std::size_t>(p.center_x) >= w) {
        throw DomainError("centre column outside the profile");
    }
}

struct Columns {
    int w = 0;
    int c = 0;
    bool in(int col) const { return col >= 0 && col < w; }
};

/// Accumulators per offset index: sum I (per column), P3, P3^2, P4, P4^2.
struct CorrelationPartial {
    std::vector<CompensatedSum> intensity;
    std::vector<CompensatedSum> p3, p3_sq, p4, p4_sq;

    explicit CorrelationPartial(std::size_t w)
        : intensity(w), p3(w), p3_sq(w), p4(w), p4_sq(w)
    {
    }

    void merge(const CorrelationPartial& o)
    {
        for (std::size_t i = 0; i < intensity.size(); ++i) {
            intensity[i].merge(o.intensity[i]);
            p3[i].merge(o.p3[i]);
            p3_sq[i].merge(o.p3_sq[i]);
            p4[i].merge(o.p4[i]);
            p4_sq[i].merge(o.p4_sq[i]);
        }
    }
};

double std_error(double sum, double sum_sq, std::size_t n)
{
    if (n < 2) {
        return 0.0;
    }
    const double nn = static_cast<double>(n);
    const double mean = sum / nn;
    return std::sqrt(std::max(0.0, (sum_sq / nn - mean * mean) * nn / (nn - 1.0)) / nn);
}

/// Fills g3/g4 from frame-summed column intensities and products. Index i of
/// the sums refers to offset x = i - c.
template <class Get>
StackResult assemble(const ProfileStack& p, Get sums)
{
    const Columns cols{static_cast<int>(p.width()), p.center_x};
    const std::size_t n = p.profiles.size();
    const double nn = static_cast<double>(n);

    StackResult r;
    r.n_frames = n;
    std::vector<double> mean(static_cast<std::size_t>(cols.w));
    for (int col = 0; col < cols.w; ++col) {
        mean[static_cast<std::size_t>(col)] = sums.intensity(col) / nn;
    }
    for (int col = 0; col < cols.w; ++col) {
        const int x = col - cols.c;
        const auto i = static_cast<std::size_t>(col);
        r.offset_px.push_back(x);
        r.x_mm.push_back(x * p.pixel_pitch_mm);
        r.mean_intensity.push_back(mean[i]);

        const bool in3 = cols.in(cols.c + x) && cols.in(cols.c - x);
        const bool in4 = in3 && cols.in(cols.c - 2 * x);
        double norm3 = 0.0;
        double norm4 = 0.0;
        if (in3) {
            norm3 = mean[static_cast<std::size_t>(cols.c + x)] * mean[static_cast<std::size_t>(cols.c)] *
                    mean[static_cast<std::size_t>(cols.c - x)];
        }
        if (in4) {
            norm4 = norm3 * mean[static_cast<std::size_t>(cols.c - 2 * x)];
        }
        const bool ok3 = in3 && norm3 > 0.0;
        const bool ok4 = in4 && norm4 > 0.0;
        r.g3_valid.push_back(ok3);
        r.g4_valid.push_back(ok4);
        r.g3.push_back(ok3 ? sums.p3(i) / nn / norm3 : 0.0);
        r.g3_err.push_back(ok3 ? std_error(sums.p3(i), sums.p3_sq(i), n) / norm3 : 0.0);
        r.g4.push_back(ok4 ? sums.p4(i) / nn / norm4 : 0.0);
        r.g4_err.push_back(ok4 ? std_error(sums.p4(i), sums.p4_sq(i), n) / norm4 : 0.0);
    }

    std::vector<double> positive;
    for (double v : r.mean_intensity) {
        if (v > 0.0) {
            positive.push_back(v);
        }
    }
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    r.intensity_visibility = positive.empty() ? nan : analytic::robust_visibility(positive, kRobustFraction);
    const auto v3 = r.valid_g3();
    const auto v4 = r.valid_g4();
    r.g3_visibility = v3.empty() ? nan : analytic::robust_visibility(v3, kRobustFraction);
    r.g4_visibility = v4.empty() ? nan : analytic::robust_visibility(v4, kRobustFraction);
    return r;
}

} // namespace

StackResult stack_correlate(const ProfileStack& p, Execution exec)
{
    check_profiles(p);
    const Columns cols{static_cast<int>(p.width()), p.center_x};
    const auto w = static_cast<std::size_t>(cols.w);

    auto make = [&] { return CorrelationPartial(w); };
    auto fill = [&](CorrelationPartial& part, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t j = begin; j < end; ++j) {
            const std::vector<double>& I = p.profiles[static_cast<std::size_t>(j)];
            const double i0 = I[static_cast<std::size_t>(cols.c)];
            for (int col = 0; col < cols.w; ++col) {
                const auto i = static_cast<std::size_t>(col);
                part.intensity[i].add(I[i]);
                const int x = col - cols.c;
                if (!cols.in(cols.c - x)) {
                    continue;
                }
                const double prod3 = I[i] * i0 * I[static_cast<std::size_t>(cols.c - x)];
                part.p3[i].add(prod3);
                part.p3_sq[i].add(prod3 * prod3);
                if (!cols.in(cols.c - 2 * x)) {
                    continue;
                }
                const double prod4 = prod3 * I[static_cast<std::size_t>(cols.c - 2 * x)];
                part.p4[i].add(prod4);
                part.p4_sq[i].add(prod4 * prod4);
            }
        }
    };
    const CorrelationPartial total = block_reduce(p.profiles.size(), kFramesPerBlock, exec, make, fill);

    struct {
        const CorrelationPartial& t;
        double intensity(int col) const { return t.intensity[static_cast<std::size_t>(col)].value(); }
        double p3(std::size_t i) const { return t.p3[i].value(); }
        double p3_sq(std::size_t i) const { return t.p3_sq[i].value(); }
        double p4(std::size_t i) const { return t.p4[i].value(); }
        double p4_sq(std::size_t i) const { return t.p4_sq[i].value(); }
    } sums{total};
    return assemble(p, sums);
}

namespace reference {

StackResult stack_correlate(const ProfileStack& p)
{
    check_profiles(p);
    const int w = static_cast<int>(p.width());
    const int c = p.center_x;
    std::vector<long double> si(static_cast<std::size_t>(w)), s3(si), s3q(si), s4(si), s4q(si);
    for (const auto& I : p.profiles) {
        for (int col = 0; col < w; ++col) {
            const auto i = static_cast<std::size_t>(col);
            si[i] += I[i];
            const int x = col - c;
            const int minus = c - x;
            const int minus2 = c - 2 * x;
            if (minus >= 0 && minus < w) {
                const long double prod3 = static_cast<long double>(I[i]) * I[static_cast<std::size_t>(c)] *
                                          I[static_cast<std::size_t>(minus)];
                s3[i] += prod3;
                s3q[i] += prod3 * prod3;
                if (minus2 >= 0 && minus2 < w) {
                    const long double prod4 = prod3 * I[static_cast<std::size_t>(minus2)];
                    s4[i] += prod4;
                    s4q[i] += prod4 * prod4;
                }
            }
        }
    }
    struct {
        const std::vector<long double>&si, &s3, &s3q, &s4, &s4q;
        double intensity(int col) const { return static_cast<double>(si[static_cast<std::size_t>(col)]); }
        double p3(std::size_t i) const { return static_cast<double>(s3[i]); }
        double p3_sq(std::size_t i) const { return static_cast<double>(s3q[i]); }
        double p4(std::size_t i) const { return static_cast<double>(s4[i]); }
        double p4_sq(std::size_t i) const { return static_cast<double>(s4q[i]); }
    } sums{si, s3, s3q, s4, s4q};
    return assemble(p, sums);
}

} // namespace reference

} // namespace hbt::frames
