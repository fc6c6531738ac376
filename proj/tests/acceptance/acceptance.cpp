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

// Acceptance gate: one PASS/FAIL line per criterion. Every stochastic run uses
// seed 1, fixed before any result was inspected.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "hbt/analytic.hpp"
#include "hbt/extrema.hpp"
#include "hbt/frames.hpp"
#include "hbt/montecarlo.hpp"

using namespace hbt;
using analytic::ScanMode;
using analytic::SingleSourceMoments;

namespace {

constexpr double pi = std::numbers::pi;
constexpr std::uint64_t kSeed = 1;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        pass = pass && ok;
        detail += (detail.empty() ? "" : "; ") + what + (ok ? "" : " [violated]");
    }
};

std::string num(double v, int digits = 6)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

mc::McConfig point(Statistics s, std::uint64_t shots)
{
    mc::McConfig c;
    c.source_A.statistics = s;
    c.source_B.statistics = s;
    c.n_shots = shots;
    c.seed = kSeed;
    return c;
}

mc::McConfig extended()
{
    mc::McConfig c = point(Statistics::thermal, 200000);
    c.source_A.extent_a = 0.2;
    c.source_B.extent_a = 0.2;
    c.geometry = Geometry{};
    c.emitters_per_source = 64;
    return c;
}

double mc_visibility(const mc::McConfig& c, ScanMode mode, const std::vector<double>& grid,
                     double* err = nullptr)
{
    const auto v = mc::scan_visibility(mc::estimate_scan(c, mode, grid));
    if (err != nullptr) {
        *err = v.std_error;
    }
    return v.value;
}

Outcome ac1()
{
    Outcome o;
    const double e1 = std::abs(analytic::visibility3(SingleSourceMoments::coherent()) - 9.0 / 11.0);
    const double e2 = std::abs(analytic::visibility3(SingleSourceMoments::thermal()) - 3.0 / 5.0);
    const double e3 = std::abs(analytic::visibility4(SingleSourceMoments::coherent()) - 17.0 / 18.0);
    const double e4 = std::abs(analytic::visibility4(SingleSourceMoments::thermal()) - 7.0 / 9.0);
    o.require(e1 <= 1e-12, "V3 coherent err " + num(e1));
    o.require(e2 <= 1e-12, "V3 thermal err " + num(e2));
    o.require(e3 <= 1e-12, "V4 coherent err " + num(e3));
    o.require(e4 <= 1e-12, "V4 thermal err " + num(e4));
    return o;
}

Outcome ac2()
{
    Outcome o;
    const auto c = SingleSourceMoments::coherent();
    o.require(std::abs(analytic::g3_point(c, 0, 0) - 2.5) <= 1e-12, "g3(0,0) = 2.5");
    o.require(std::abs(analytic::g3_point(c, 2 * pi / 3, 2 * pi / 3) - 0.25) <= 1e-12,
              "g3(2pi/3,2pi/3) = 0.25");
    o.require(std::abs(analytic::g4_point(c, 0, 0, 0) - 4.375) <= 1e-12, "g4(0,0,0) = 4.375");
    o.require(std::abs(analytic::g4_point(c, pi / 2, pi, -pi / 2) - 0.125) <= 1e-12,
              "g4(pi/2,pi,-pi/2) = 0.125");
    const auto e3 = analytic::g3_grid_extrema(c, 720);
    o.require(e3.min_value >= 0.25 - 1e-12 && e3.max_value <= 2.5 + 1e-12,
              "720^2 g3 range [" + num(e3.min_value, 15) + ", " + num(e3.max_value, 15) + "]");
    const auto e4 = analytic::g4_grid_extrema(c, 720);
    o.require(e4.min_value >= 0.125 - 1e-12 && e4.max_value <= 4.375 + 1e-12,
              "720^3 g4 range [" + num(e4.min_value, 15) + ", " + num(e4.max_value, 15) + "]");
    return o;
}

Outcome ac3()
{
    Outcome o;
    const auto grid = analytic::uniform_grid(0, 2 * pi, 48);
    const double v3 = mc_visibility(point(Statistics::coherent, 100000), ScanMode::sync3, grid);
    const double v4 = mc_visibility(point(Statistics::coherent, 100000), ScanMode::sync4, grid);
    o.require(std::abs(v3 - 0.8182) <= 0.02, "sync3 V " + num(v3) + " vs 0.8182 +- 0.02");
    o.require(std::abs(v4 - 0.9444) <= 0.03, "sync4 V " + num(v4) + " vs 0.9444 +- 0.03");
    return o;
}

Outcome ac4()
{
    Outcome o;
    const auto grid = analytic::uniform_grid(0, 2 * pi, 48);
    const double v = mc_visibility(point(Statistics::thermal, 100000), ScanMode::sync3, grid);
    o.require(std::abs(v - 0.6) <= 0.03, "sync3 V " + num(v) + " vs 0.600 +- 0.03");
    mc::McConfig c = point(Statistics::thermal, 1000000);
    c.phases = PhaseConfig{{0.0, 0.0, 0.0, 0.0}};
    const auto g3 = mc::estimate_g(c, 3);
    const auto g4 = mc::estimate_g(c, 4);
    o.require(std::abs(g3.value - 6.0) <= 3 * g3.std_error,
              "g3(0) " + num(g3.value) + " +- " + num(g3.std_error) + " vs 6");
    o.require(std::abs(g4.value - 24.0) <= 3 * g4.std_error,
              "g4(0) " + num(g4.value) + " +- " + num(g4.std_error) + " vs 24");
    return o;
}

Outcome ac5()
{
    Outcome o;
    const auto grid = analytic::default_grid();
    const double va = analytic::extract_visibility(
        analytic::scan_curve(ScanMode::single3, SingleSourceMoments::coherent(), grid));
    o.require(std::abs(va - 1.0 / std::numbers::sqrt2) <= 1e-12, "analytic V " + num(va, 15));
    const double vm = mc_visibility(point(Statistics::coherent, 100000), ScanMode::single3,
                                    analytic::uniform_grid(0, 2 * pi, 48));
    o.require(std::abs(vm - 1.0 / std::numbers::sqrt2) <= 0.02,
              "MC V " + num(vm) + " vs 0.7071 +- 0.02");
    return o;
}

Outcome ac6()
{
    Outcome o;
    const double hi = analytic::g3_polarization(0.0, 0.0);
    const double lo_p = analytic::g3_polarization(pi / 3, -pi / 3);
    const double lo_m = analytic::g3_polarization(-pi / 3, pi / 3);
    o.require(std::abs(hi - 2.5) <= 1e-12 && std::abs(lo_p - 0.25) <= 1e-12 &&
                  std::abs(lo_m - 0.25) <= 1e-12,
              "analytic max " + num(hi, 15) + ", min " + num(lo_p, 15));
    const auto dense = analytic::uniform_grid(-pi / 2, pi / 2, 720);
    const auto curve = analytic::scan_curve(ScanMode::pol3, SingleSourceMoments::coherent(), dense);
    const auto values = curve.values();
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    o.require(*mn >= 0.25 - 1e-12 && *mx <= 2.5 + 1e-12, "no values outside [0.25, 2.5]");

    mc::McConfig c = point(Statistics::coherent, 100000);
    c.source_A.polarization = jones::right_circular();
    c.source_B.polarization = jones::left_circular();
    const double v = mc_visibility(c, ScanMode::pol3, analytic::uniform_grid(-pi / 2, pi / 2, 48));
    o.require(std::abs(v - 9.0 / 11.0) <= 0.02, "MC V " + num(v) + " vs 9/11 +- 0.02");
    return o;
}

mc::CoherenceCalibration g_calibration;

Outcome ac7()
{
    Outcome o;
    const mc::McConfig c = extended();
    const auto seps = mc::calibration_separations(c, 10);
    g_calibration = mc::calibrate_coherence(c, seps);
    o.require(g_calibration.fit.rms_residual < 0.02,
              "rho " + num(g_calibration.fit.rho) + " mm, rms " + num(g_calibration.fit.rms_residual));
    int ok = 0;
    double worst = 0.0;
    for (const auto& e : g_calibration.estimates) {
        const double z = std::abs(e.g2 - analytic::siegert2(e.gamma_field)) / e.g2_err;
        worst = std::max(worst, z);
        ok += z <= 3.0;
    }
    o.require(ok == 10, "Siegert " + std::to_string(ok) + "/10 within 3 sigma (worst " + num(worst, 3) + " sigma)");
    return o;
}

Outcome ac8()
{
    Outcome o;
    const mc::McConfig c = extended();
    const Geometry& g = *c.geometry;
    const double zero = g.wavelength_nm * 1e-6 * g.distance_l / c.source_A.extent_a;
    const auto grid = analytic::uniform_grid(0.0, 0.45 * zero, 25);
    const auto scan = mc::estimate_scan(c, ScanMode::thermal_extended3, grid);
    const analytic::CoherenceParams rho{g_calibration.fit.rho};
    int ok = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double theory = analytic::g3_thermal_extended(grid[i], 0.0, -grid[i], rho, g);
        const double z = std::abs(scan.estimates[i].value - theory) / scan.estimates[i].std_error;
        worst = std::max(worst, z);
        ok += z <= 3.0;
    }
    o.require(ok == 25, std::to_string(ok) + "/25 points within 3 sigma (worst " + num(worst, 3) +
                            " sigma), rho " + num(rho.rho));
    return o;
}

frames::StackResult frame_run(Statistics s)
{
    frames::SynthOptions opt;
    opt.statistics = s;
    opt.seed = kSeed;
    const frames::FrameStack stack = frames::synth_frames(Geometry{}, opt);
    return frames::stack_correlate(frames::reduce_y(stack, 50));
}

Outcome ac9()
{
    Outcome o;
    const auto r = frame_run(Statistics::coherent);
    o.require(r.intensity_visibility < 0.10, "intensity V " + num(r.intensity_visibility) + " < 0.10");
    o.require(std::abs(r.g3_visibility - 0.818) <= 0.03, "g3 V " + num(r.g3_visibility) + " vs 0.818 +- 0.03");
    o.require(std::abs(r.g4_visibility - 0.944) <= 0.04, "g4 V " + num(r.g4_visibility) + " vs 0.944 +- 0.04");
    return o;
}

Outcome ac10()
{
    Outcome o;
    const auto r = frame_run(Statistics::thermal);
    const std::size_t c = r.center_index();
    o.require(std::abs(r.g3[c] / 6.0 - 1.0) <= 0.15,
              "g3(0) " + num(r.g3[c]) + " +- " + num(r.g3_err[c]) + " vs 6 +- 15%");
    o.require(std::abs(r.g4[c] / 24.0 - 1.0) <= 0.25,
              "g4(0) " + num(r.g4[c]) + " +- " + num(r.g4_err[c]) + " vs 24 +- 25%");
    return o;
}

Outcome ac11()
{
    Outcome o;
    // Classical inequality chain on single-source estimates (source B dark).
    bool chain = true;
    for (auto s : {Statistics::coherent, Statistics::thermal}) {
        mc::McConfig c = point(s, 200000);
        c.source_B.mean_intensity = 0.0;
        c.allow_asymmetric = true;
        c.phases = PhaseConfig{{0.0, 0.0, 0.0, 0.0}};
        const auto g2 = mc::estimate_g(c, 2), g3 = mc::estimate_g(c, 3), g4 = mc::estimate_g(c, 4);
        const double b3 = g2.value * g2.value;
        const double b3_err = 2 * g2.value * g2.std_error;
        const double b4 = g3.value * g3.value / g2.value;
        const double b4_err = b4 * std::hypot(2 * g3.std_error / g3.value, g2.std_error / g2.value);
        chain = chain && g2.value >= 1.0 - 3 * g2.std_error;
        chain = chain && g3.value >= b3 - 3 * std::hypot(g3.std_error, b3_err);
        chain = chain && g4.value >= b4 - 3 * std::hypot(g4.std_error, b4_err);
    }
    o.require(chain, "g2 >= 1, g3 >= g2^2, g4 >= g3^2/g2 within 3 sigma");

    int triples = 0, abc_ok = 0;
    for (double g2 : {1.0, 1.2, 1.5, 2.0, 3.0}) {
        for (double f3 : {1.0, 1.5, 3.0}) {
            for (double f4 : {1.0, 2.0, 5.0}) {
                const double g3 = g2 * g2 * f3;
                const SingleSourceMoments m{g2, g3, g3 * g3 / g2 * f4};
                if (!m.is_classical()) {
                    continue;
                }
                const auto abc = analytic::abc_amplitudes(m);
                ++triples;
                abc_ok += abc.a_bound_holds && abc.b_bound_holds && abc.c_bound_holds;
            }
        }
    }
    o.require(abc_ok == triples && triples == 45,
              "A/B/C bounds " + std::to_string(abc_ok) + "/" + std::to_string(triples));

    const auto grid = analytic::uniform_grid(0, 2 * pi, 16);
    const mc::McConfig c = point(Statistics::thermal, 50000);
    const auto ref = mc::estimate_scan(c, ScanMode::sync4, grid, Execution{1});
    bool same = true;
    for (int w : {2, 8}) {
        const auto other = mc::estimate_scan(c, ScanMode::sync4, grid, Execution{w});
        for (std::size_t i = 0; i < grid.size(); ++i) {
            same = same && other.estimates[i].value == ref.estimates[i].value &&
                   other.estimates[i].std_error == ref.estimates[i].std_error;
        }
    }
    o.require(same, "bit-identical across 1, 2, 8 workers");
    return o;
}

struct Criterion {
    int id;
    const char* title;
    double limit_s; ///< 0 = no runtime bound
    std::function<Outcome()> run;
};

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "exact analytic visibilities", 1.0, ac1},
        {2, "analytic extrema and dense grid search", 10.0, ac2},
        {3, "MC convergence, coherent", 120.0, ac3},
        {4, "MC convergence, thermal point sources", 300.0, ac4},
        {5, "single-detector scan", 0.0, ac5},
        {6, "polarization", 0.0, ac6},
        {7, "extended thermal coherence and Siegert check", 0.0, ac7},
        {8, "extended thermal g3 curve", 0.0, ac8},
        {9, "frame pipeline, coherent", 0.0, ac9},
        {10, "frame pipeline, thermal", 0.0, ac10},
        {11, "property suite", 0.0, ac11},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o = c.run();
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_s > 0.0) {
            o.require(dt < c.limit_s, "runtime " + num(dt, 3) + " s < " + num(c.limit_s) + " s");
        } else {
            o.detail += "; runtime " + num(dt, 3) + " s";
        }
        failed += !o.pass;
        std::printf("AC%-2d %s  %s: %s\n", c.id, o.pass ? "PASS" : "FAIL", c.title, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
