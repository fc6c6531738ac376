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

#include "hbt/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "hbt/analytic.hpp"
#include "hbt/errors.hpp"
#include "hbt/frame_io.hpp"
#include "hbt/frames.hpp"
#include "hbt/montecarlo.hpp"
#include "report.hpp"

#ifndef HBT_VERSION
#define HBT_VERSION "0.0.0"
#endif

namespace hbt::cli {

namespace {

namespace fs = std::filesystem;
using analytic::ScanMode;
using analytic::SingleSourceMoments;

constexpr double kPi = std::numbers::pi;

struct RunContext {
    Command command;
    json cfg;
    std::string hash;
    OutputSet& out;
    Execution exec;
    bool svg = true;
    json metrics = json::object();
    json checks = json::array();

    std::string tag() const
    {
        return "hbtsim " HBT_VERSION " " + std::string(command_name(command)) +
               " config_hash=" + hash;
    }

    std::vector<std::string> csv_header() const { return {tag()}; }

    void check(const std::string& name, bool passed, const std::string& detail)
    {
        checks.push_back({{"name", name}, {"passed", passed}, {"detail", detail}});
    }

    bool all_passed() const
    {
        for (const auto& c : checks) {
            if (!c["passed"].get<bool>()) {
                return false;
            }
        }
        return true;
    }
};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

Geometry geometry_from(const json& cfg)
{
    Geometry g;
    g.separation_b = cfg["separation_b_mm"].get<double>();
    g.distance_l = cfg["distance_l_mm"].get<double>();
    g.wavelength_nm = cfg["wavelength_nm"].get<double>();
    g.validate();
    return g;
}

/// lambda * l / a in mm: the first zero of the source-A coherence.
double coherence_zero(const Geometry& g, double a) { return g.wavelength_nm * 1e-6 * g.distance_l / a; }

std::string axis_label(ScanMode mode)
{
    switch (mode) {
    case ScanMode::sync3: return "phi12 = phi23 (rad)";
    case ScanMode::single3: return "phi23 (rad), phi12 = pi/2";
    case ScanMode::sync4: return "phi12 = phi13/2 = phi14/3 (rad)";
    case ScanMode::pol3: return "theta2 = -theta3 (rad)";
    case ScanMode::thermal_extended3: return "detector offset x (mm)";
    }
    return "t";
}

std::string param_column(ScanMode mode)
{
    switch (mode) {
    case ScanMode::pol3: return "theta_rad";
    case ScanMode::thermal_extended3: return "x_mm";
    default: return "phase_rad";
    }
}

std::vector<double> scan_grid(const json& cfg, ScanMode mode, const Geometry& g, double a)
{
    double lo = 0.0;
    double hi = 2.0 * kPi;
    if (mode == ScanMode::pol3) {
        lo = -kPi / 2.0;
        hi = kPi / 2.0;
    } else if (mode == ScanMode::thermal_extended3) {
        hi = 0.45 * coherence_zero(g, a);
    }
    if (!cfg["scan_min"].is_null()) {
        lo = cfg["scan_min"].get<double>();
    }
    if (!cfg["scan_max"].is_null()) {
        hi = cfg["scan_max"].get<double>();
    }
    const auto points = cfg["points"].get<long long>();
    if (points < 2) {
        throw ConfigError("points must be at least 2");
    }
    if (!(hi > lo)) {
        throw ConfigError("scan_max must exceed scan_min");
    }
    return analytic::uniform_grid(lo, hi, static_cast<std::size_t>(points));
}

/// Closed-form visibility of a point-source scan path, if one exists.
std::optional<double> formula_visibility(ScanMode mode, const SingleSourceMoments& m,
                                         analytic::Classicality c)
{
    switch (mode) {
    case ScanMode::sync3:
    case ScanMode::pol3:
        return analytic::visibility3(m, c);
    case ScanMode::sync4:
        return analytic::visibility4(m, c);
    case ScanMode::single3:
        // Amplitude sqrt(2) g2 / 2 over mean g3/4 + 3 g2/4.
        return 2.0 * std::numbers::sqrt2 * m.g2 / (m.g3 + 3.0 * m.g2);
    case ScanMode::thermal_extended3:
        break;
    }
    return std::nullopt;
}

void curve_metrics(json& metrics, std::span<const double> t, std::span<const double> v)
{
    std::size_t imax = 0, imin = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        imax = v[i] > v[imax] ? i : imax;
        imin = v[i] < v[imin] ? i : imin;
    }
    metrics["max"] = v[imax];
    metrics["argmax"] = t[imax];
    metrics["min"] = v[imin];
    metrics["argmin"] = t[imin];
}

// ---------------------------------------------------------------- analytic

SingleSourceMoments moments_from(const json& cfg)
{
    const auto preset = cfg["preset"].get<std::string>();
    if (preset == "coherent") {
        return SingleSourceMoments::coherent();
    }
    if (preset == "thermal") {
        return SingleSourceMoments::thermal();
    }
    if (cfg["g2"].is_null() || cfg["g3"].is_null()) {
        throw ConfigError("preset custom needs g2 and g3");
    }
    SingleSourceMoments m;
    m.g2 = cfg["g2"].get<double>();
    m.g3 = cfg["g3"].get<double>();
    if (!cfg["g4"].is_null()) {
        m.g4 = cfg["g4"].get<double>();
    }
    return m;
}

void cmd_analytic(RunContext& rc)
{
    const json& cfg = rc.cfg;
    const ScanMode mode = analytic::scan_mode_from_string(cfg["mode"].get<std::string>());
    const SingleSourceMoments m = moments_from(cfg);
    const Geometry g = geometry_from(cfg);
    const double a = cfg["extent_a_mm"].get<double>();
    if (!(a > 0.0)) {
        throw ConfigError("extent_a_mm must be positive");
    }
    analytic::ScanContext ctx;
    ctx.classicality = cfg["allow_nonclassical"].get<bool>() ? analytic::Classicality::allow_nonclassical
                                                             : analytic::Classicality::strict;
    if (mode == ScanMode::thermal_extended3) {
        if (cfg["preset"] != "thermal") {
            throw ConfigError("thermal-extended3 describes thermal sources; use --preset thermal");
        }
        const double rho = cfg["rho_mm"].is_null() ? 2.0 * coherence_zero(g, a) : cfg["rho_mm"].get<double>();
        ctx.coherence = analytic::CoherenceParams{rho};
        ctx.geometry = g;
        rc.metrics["rho_mm"] = rho;
    }
    const std::vector<double> grid = scan_grid(cfg, mode, g, a);
    const analytic::ScanCurve curve = analytic::scan_curve(mode, m, grid, ctx);
    const std::vector<double> values = curve.values();

    const std::string base = "analytic_" + std::string(analytic::to_string(mode));
    const std::string gname = "g" + std::to_string(curve.order);
    CsvTable table{{param_column(mode), gname}, {}};
    for (const auto& p : curve.points) {
        table.rows.push_back({p.t, p.value});
    }
    write_csv(rc.out, base + ".csv", table, rc.csv_header());

    const double v = analytic::extract_visibility(values);
    rc.metrics["visibility"] = v;
    rc.metrics["points"] = grid.size();
    curve_metrics(rc.metrics, grid, values);
    if (const auto f = formula_visibility(mode, m, ctx.classicality)) {
        rc.metrics["visibility_formula"] = *f;
        rc.check("visibility_matches_formula", std::abs(v - *f) <= 1e-3,
                 "curve " + fmt(v) + " vs formula " + fmt(*f) + ", tolerance 1e-3");
    } else if (grid.front() == 0.0) {
        rc.metrics["center_value"] = values.front();
        rc.check("center_value_is_g3", std::abs(values.front() - m.g3) <= 1e-9,
                 "g3(0) " + fmt(values.front()) + " vs " + fmt(m.g3));
    }

    if (rc.svg) {
        Plot plot{"analytic " + std::string(analytic::to_string(mode)) + " (" +
                      cfg["preset"].get<std::string>() + ")",
                  axis_label(mode), gname, {}};
        plot.series.push_back({gname, grid, values, {}, false, false});
        write_svg(rc.out, base + ".svg", plot, rc.tag());
    }
}

// ---------------------------------------------------------------- mc

struct McRequest {
    std::string base;
    std::string title;
    mc::McConfig config;
    ScanMode mode = ScanMode::sync3;
    std::vector<double> grid;
    std::size_t calibration_points = 10;
    std::optional<double> target_visibility;
    double visibility_tolerance = 0.02;
    std::vector<PlotSeries> extra_overlays; ///< drawn and appended as CSV columns
};

mc::McConfig mc_config(Statistics stats, ScanMode mode, std::uint64_t shots, std::uint64_t seed,
                       int emitters, double a, const Geometry& g)
{
    mc::McConfig c;
    c.source_A.statistics = stats;
    c.source_B.statistics = stats;
    c.n_shots = shots;
    c.seed = seed;
    c.emitters_per_source = emitters;
    c.geometry = g;
    if (mode == ScanMode::thermal_extended3) {
        if (stats != Statistics::thermal) {
            throw ConfigError("thermal-extended3 describes thermal sources; use --preset thermal");
        }
        c.source_A.extent_a = a;
        c.source_B.extent_a = a;
    }
    if (mode == ScanMode::pol3) {
        c.source_A.polarization = jones::right_circular();
        c.source_B.polarization = jones::left_circular();
    }
    return c;
}

void run_mc(RunContext& rc, const McRequest& req)
{
    const mc::McConfig& cfg = req.config;
    const SingleSourceMoments m = SingleSourceMoments::for_statistics(cfg.source_A.statistics);
    analytic::ScanContext ctx;

    std::optional<mc::CoherenceCalibration> cal;
    if (req.mode == ScanMode::thermal_extended3) {
        const auto seps = mc::calibration_separations(cfg, req.calibration_points);
        cal = mc::calibrate_coherence(cfg, seps, rc.exec);
        ctx.coherence = analytic::CoherenceParams{cal->fit.rho};
        ctx.geometry = *cfg.geometry;

        CsvTable ct{{"dx_mm", "g2", "g2_err", "gamma", "gamma_field", "g1_fit"}, {}};
        std::size_t siegert_ok = 0;
        for (const auto& e : cal->estimates) {
            ct.rows.push_back({e.separation, e.g2, e.g2_err, e.gamma, e.gamma_field,
                               analytic::g1_sinc(e.separation, *ctx.coherence)});
            siegert_ok += std::abs(e.g2 - analytic::siegert2(e.gamma_field)) <= 3.0 * e.g2_err;
        }
        write_csv(rc.out, req.base + "_coherence.csv", ct, rc.csv_header());
        rc.metrics["rho_fit_mm"] = cal->fit.rho;
        rc.metrics["rho_fit_rms"] = cal->fit.rms_residual;
        rc.check("coherence_fit_rms", cal->fit.rms_residual < 0.02,
                 "rms " + fmt(cal->fit.rms_residual) + " < 0.02");
        rc.check("siegert_g2", siegert_ok == cal->estimates.size(),
                 std::to_string(siegert_ok) + "/" + std::to_string(cal->estimates.size()) +
                     " separations with |g2 - (1 + gamma^2)| <= 3 sigma");
    }

    const mc::McScan scan = mc::estimate_scan(cfg, req.mode, req.grid, rc.exec);
    const analytic::ScanCurve theory = analytic::scan_curve(req.mode, m, req.grid, ctx);
    const std::vector<double> values = scan.curve.values();
    const std::vector<double> expected = theory.values();

    const std::string gname = "g" + std::to_string(scan.curve.order);
    CsvTable table{{param_column(req.mode), gname, gname + "_err", "analytic"}, {}};
    for (const auto& o : req.extra_overlays) {
        table.columns.push_back(o.label);
    }
    std::vector<double> errs;
    std::size_t within = 0;
    for (std::size_t i = 0; i < req.grid.size(); ++i) {
        const auto& e = scan.estimates[i];
        errs.push_back(e.std_error);
        std::vector<double> row{req.grid[i], e.value, e.std_error, expected[i]};
        for (const auto& o : req.extra_overlays) {
            row.push_back(o.y[i]);
        }
        table.rows.push_back(std::move(row));
        within += std::abs(e.value - expected[i]) <= 3.0 * e.std_error;
    }
    write_csv(rc.out, req.base + ".csv", table, rc.csv_header());

    const double frac = static_cast<double>(within) / static_cast<double>(req.grid.size());
    rc.metrics["shots"] = cfg.n_shots;
    rc.metrics["seed"] = cfg.seed;
    rc.metrics["points"] = req.grid.size();
    rc.metrics["fraction_within_3sigma"] = frac;
    rc.check("pointwise_3sigma", frac >= 0.9,
             std::to_string(within) + "/" + std::to_string(req.grid.size()) +
                 " points within 3 sigma of theory (need 90%)");

    if (req.mode == ScanMode::thermal_extended3) {
        rc.metrics["center_value"] = values.front();
        rc.metrics["center_value_err"] = scan.estimates.front().std_error;
    } else {
        const mc::ScanVisibility vis = mc::scan_visibility(scan);
        rc.metrics["visibility"] = vis.value;
        rc.metrics["visibility_err"] = vis.std_error;
        rc.metrics["visibility_analytic"] = analytic::extract_visibility(expected);
        if (req.target_visibility) {
            const double tol = std::max(req.visibility_tolerance, 3.0 * vis.std_error);
            rc.metrics["visibility_target"] = *req.target_visibility;
            rc.check("visibility", std::abs(vis.value - *req.target_visibility) <= tol,
                     fmt(vis.value) + " +- " + fmt(vis.std_error) + " vs " +
                         fmt(*req.target_visibility) + ", tolerance " + fmt(tol));
        }
    }

    if (rc.svg) {
        Plot plot{req.title, axis_label(req.mode), gname, {}};
        plot.series.push_back({"Monte Carlo", req.grid, values, errs, true, false});
        plot.series.push_back({"theory", req.grid, expected, {}, false, false});
        for (const auto& o : req.extra_overlays) {
            plot.series.push_back(o);
        }
        write_svg(rc.out, req.base + ".svg", plot, rc.tag());
    }
}

void cmd_mc(RunContext& rc)
{
    const json& cfg = rc.cfg;
    McRequest req;
    req.mode = analytic::scan_mode_from_string(cfg["mode"].get<std::string>());
    const Statistics stats = statistics_from_string(cfg["preset"].get<std::string>());
    const Geometry g = geometry_from(cfg);
    const double a = cfg["extent_a_mm"].get<double>();
    if (!(a > 0.0)) {
        throw ConfigError("extent_a_mm must be positive");
    }
    const auto shots = cfg["shots"].get<long long>();
    const auto seed = cfg["seed"].get<long long>();
    const auto emitters = cfg["emitters"].get<long long>();
    const auto calib = cfg["calibration_points"].get<long long>();
    if (shots < 2 || seed < 0 || emitters < 1 || calib < 2) {
        throw ConfigError("need shots >= 2, seed >= 0, emitters >= 1, calibration_points >= 2");
    }
    req.config = mc_config(stats, req.mode, static_cast<std::uint64_t>(shots),
                           static_cast<std::uint64_t>(seed), static_cast<int>(emitters), a, g);
    req.grid = scan_grid(cfg, req.mode, g, a);
    req.calibration_points = static_cast<std::size_t>(calib);
    req.base = "mc_" + std::string(analytic::to_string(req.mode));
    req.title = "Monte Carlo " + std::string(analytic::to_string(req.mode)) + " (" +
                std::string(to_string(stats)) + ")";
    req.target_visibility =
        formula_visibility(req.mode, SingleSourceMoments::for_statistics(stats),
                           analytic::Classicality::strict);
    req.visibility_tolerance = 0.03;
    run_mc(rc, req);
}

// ---------------------------------------------------------------- frames

frames::SynthOptions synth_options(const json& cfg)
{
    frames::SynthOptions o;
    o.statistics = statistics_from_string(cfg["preset"].get<std::string>());
    o.n_frames = static_cast<int>(cfg["frames"].get<long long>());
    o.seed = static_cast<std::uint64_t>(cfg["seed"].get<long long>());
    o.width = static_cast<int>(cfg["width"].get<long long>());
    o.height = static_cast<int>(cfg["height"].get<long long>());
    o.fringe_period_px = cfg["fringe_period_px"].get<double>();
    o.speckle_rho_px = cfg["speckle_rho_px"].get<double>();
    o.intensity_B = cfg["intensity_b"].get<double>();
    o.bit_depth = static_cast<int>(cfg["bit_depth"].get<long long>());
    if (!cfg["full_scale"].is_null()) {
        o.full_scale = cfg["full_scale"].get<double>();
    }
    if (cfg["seed"].get<long long>() < 0) {
        throw ConfigError("seed must be non-negative");
    }
    return o;
}

void cmd_frames_synth(RunContext& rc)
{
    const json& cfg = rc.cfg;
    const Geometry g = geometry_from(cfg);
    const frames::SynthOptions o = synth_options(cfg);
    const frames::FrameStack stack = frames::synth_frames(g, o, rc.exec);
    const auto format = frames::frame_format_from_string(cfg["format"].get<std::string>());
    for (const auto& p : frames::save_stack(stack, rc.out.dir(), format, rc.hash)) {
        rc.out.track(p);
    }
    rc.metrics["frames"] = stack.frames.size();
    rc.metrics["width"] = stack.width();
    rc.metrics["height"] = stack.height();
    rc.metrics["pixel_pitch_mm"] = stack.pixel_pitch_mm;
    rc.metrics["center_x"] = stack.center_x;
    rc.metrics["fringe_period_px"] = stack.meta.fringe_period_px;
    rc.metrics["intensity_scale"] = stack.meta.intensity_scale;
}

enum class FrameChecks { none, all, g3, g4 };

using Overlay = std::function<double(double x_mm)>;

frames::StackResult run_frames_analysis(RunContext& rc, const std::string& base,
                                        const std::string& title, const frames::FrameStack& stack,
                                        int band, const std::string& statistics, FrameChecks which,
                                        int plot_order, const Overlay& overlay)
{
    const frames::ProfileStack profiles = frames::reduce_y(stack, band);
    const frames::StackResult r = frames::stack_correlate(profiles, rc.exec);

    CsvTable table{{"x_mm", "I", "g3", "g3_err", "g4", "g4_err"}, {}};
    const double nan = std::nan("");
    for (std::size_t i = 0; i < r.x_mm.size(); ++i) {
        table.rows.push_back({r.x_mm[i], r.mean_intensity[i], r.g3_valid[i] ? r.g3[i] : nan,
                              r.g3_valid[i] ? r.g3_err[i] : nan, r.g4_valid[i] ? r.g4[i] : nan,
                              r.g4_valid[i] ? r.g4_err[i] : nan});
    }
    write_csv(rc.out, base + ".csv", table, rc.csv_header());

    const std::size_t c = r.center_index();
    rc.metrics["frames"] = r.n_frames;
    rc.metrics["intensity_visibility"] = r.intensity_visibility;
    rc.metrics["g3_visibility"] = r.g3_visibility;
    rc.metrics["g4_visibility"] = r.g4_visibility;
    rc.metrics["g3_center"] = r.g3[c];
    rc.metrics["g3_center_err"] = r.g3_err[c];
    rc.metrics["g4_center"] = r.g4[c];
    rc.metrics["g4_center_err"] = r.g4_err[c];
    rc.metrics["statistics"] = statistics;

    const bool g3 = which == FrameChecks::all || which == FrameChecks::g3;
    const bool g4 = which == FrameChecks::all || which == FrameChecks::g4;
    if (statistics == "coherent" && which != FrameChecks::none) {
        if (g3) {
            rc.check("intensity_washout", r.intensity_visibility < 0.10,
                     "averaged intensity visibility " + fmt(r.intensity_visibility) + " < 0.10");
            rc.check("g3_visibility", std::abs(r.g3_visibility - 9.0 / 11.0) <= 0.03,
                     fmt(r.g3_visibility) + " vs 9/11, tolerance 0.03");
        }
        if (g4) {
            rc.check("g4_visibility", std::abs(r.g4_visibility - 17.0 / 18.0) <= 0.04,
                     fmt(r.g4_visibility) + " vs 17/18, tolerance 0.04");
        }
    } else if (statistics == "thermal" && which != FrameChecks::none) {
        if (g3) {
            rc.check("g3_center", std::abs(r.g3[c] / 6.0 - 1.0) <= 0.15,
                     "g3(0) " + fmt(r.g3[c]) + " vs 6, tolerance 15%");
        }
        if (g4) {
            rc.check("g4_center", std::abs(r.g4[c] / 24.0 - 1.0) <= 0.25,
                     "g4(0) " + fmt(r.g4[c]) + " vs 24, tolerance 25%");
        }
    }

    if (rc.svg) {
        Plot plot{title, "x (mm)", plot_order == 0 ? "value" : "g" + std::to_string(plot_order), {}};
        auto add = [&](const std::string& label, const std::vector<double>& y,
                       const std::vector<double>& e, const std::vector<bool>& valid) {
            PlotSeries s{label, r.x_mm, y, e, true, false};
            for (std::size_t i = 0; i < valid.size(); ++i) {
                if (!valid[i]) {
                    s.y[i] = nan;
                }
            }
            plot.series.push_back(std::move(s));
        };
        if (plot_order == 0) {
            plot.series.push_back({"I", r.x_mm, r.mean_intensity, {}, false, false});
        }
        if (plot_order != 4) {
            add("g3", r.g3, r.g3_err, r.g3_valid);
        }
        if (plot_order != 3) {
            add("g4", r.g4, r.g4_err, r.g4_valid);
        }
        if (overlay) {
            std::vector<double> y;
            const auto& valid = plot_order == 4 ? r.g4_valid : r.g3_valid;
            for (std::size_t i = 0; i < r.x_mm.size(); ++i) {
                y.push_back(valid[i] ? overlay(r.x_mm[i]) : nan);
            }
            plot.series.push_back({"theory", r.x_mm, y, {}, false, false});
        }
        write_svg(rc.out, base + ".svg", plot, rc.tag());
    }
    return r;
}

void cmd_frames_analyze(RunContext& rc)
{
    const json& cfg = rc.cfg;
    const auto in_dir = cfg["in_dir"].get<std::string>();
    if (in_dir.empty()) {
        throw ConfigError("frames analyze needs --in DIR");
    }
    const frames::FrameStack stack = frames::load_stack(in_dir);
    std::string stats = cfg["statistics"].get<std::string>();
    if (stats == "auto") {
        stats = stack.meta.statistics;
    }
    const auto band = cfg["band"].get<long long>();
    if (band < 1) {
        throw ConfigError("band must be at least 1");
    }
    rc.metrics["in_dir"] = in_dir;
    run_frames_analysis(rc, "frames_result", "stack correlations", stack,
                        static_cast<int>(std::min<long long>(band, stack.height())), stats,
                        stats == "none" ? FrameChecks::none : FrameChecks::all, 0, {});
    if (band > stack.height()) {
        rc.metrics["band_clamped_to"] = stack.height();
    }
}

// ---------------------------------------------------------------- repro

/// Frozen figure defaults. These are deliberately separate from the user
/// defaults above so that repro output does not drift with them.
struct FigureDefaults {
    const char* name;
    const char* kind; ///< "mc" or "frames"
    ScanMode mode;
    Statistics statistics;
    std::uint64_t shots;
    std::size_t points;
    double t_begin;
    double t_end;   ///< radians; for thermal-extended3 a multiple of lambda l / a
    int plot_order; ///< frames: 3 or 4
};

constexpr std::uint64_t kReproSeed = 1;
constexpr double kReproExtentA = 0.2; // mm
constexpr int kReproEmitters = 64;
constexpr std::size_t kReproCalibration = 10;
constexpr int kReproBand = 50;

const FigureDefaults kFigures[] = {
    {"fig4a", "mc", ScanMode::sync3, Statistics::coherent, 100000, 144, 0.0, 6.0 * kPi, 3},
    {"fig4b", "mc", ScanMode::thermal_extended3, Statistics::thermal, 200000, 25, 0.0, 0.45, 3},
    {"fig5", "mc", ScanMode::single3, Statistics::coherent, 100000, 144, 0.0, 6.0 * kPi, 3},
    {"fig7", "mc", ScanMode::pol3, Statistics::coherent, 100000, 72, -kPi / 2.0, kPi / 2.0, 3},
    {"fig9a", "frames", ScanMode::sync3, Statistics::coherent, 0, 0, 0.0, 0.0, 3},
    {"fig9b", "frames", ScanMode::sync4, Statistics::coherent, 0, 0, 0.0, 0.0, 4},
    {"fig9c", "frames", ScanMode::sync3, Statistics::thermal, 0, 0, 0.0, 0.0, 3},
    {"fig9d", "frames", ScanMode::sync4, Statistics::thermal, 0, 0, 0.0, 0.0, 4},
};

void cmd_repro(RunContext& rc)
{
    const auto name = rc.cfg["figure"].get<std::string>();
    const FigureDefaults* fig = nullptr;
    for (const auto& f : kFigures) {
        fig = name == f.name ? &f : fig;
    }
    if (fig == nullptr) {
        throw ConfigError("unknown figure " + name);
    }
    const Geometry g; // b = 1.3 mm, l = 1 m, 532 nm
    rc.metrics["figure"] = name;

    if (std::string(fig->kind) == "mc") {
        McRequest req;
        req.mode = fig->mode;
        req.config = mc_config(fig->statistics, fig->mode, fig->shots, kReproSeed, kReproEmitters,
                               kReproExtentA, g);
        const double scale = fig->mode == ScanMode::thermal_extended3 ? coherence_zero(g, kReproExtentA) : 1.0;
        req.grid = analytic::uniform_grid(fig->t_begin * scale, fig->t_end * scale, fig->points);
        req.calibration_points = kReproCalibration;
        req.base = name;
        req.title = name + " Monte Carlo " + std::string(analytic::to_string(fig->mode));
        req.target_visibility = formula_visibility(
            fig->mode, SingleSourceMoments::for_statistics(fig->statistics), analytic::Classicality::strict);
        if (fig->mode == ScanMode::pol3) {
            const PhaseConfig mismatch{{kPi / 6.0, 0.0, kPi / 6.0}};
            PlotSeries dashed{"phase mismatch", req.grid, {}, {}, false, true};
            for (double t : req.grid) {
                dashed.y.push_back(analytic::g3_polarization(t, -t, mismatch));
            }
            req.extra_overlays.push_back(std::move(dashed));
        }
        run_mc(rc, req);
        return;
    }

    frames::SynthOptions o;
    o.statistics = fig->statistics;
    o.seed = kReproSeed;
    const frames::FrameStack stack = frames::synth_frames(g, o, rc.exec);
    const double period = g.fringe_period();
    Overlay overlay;
    if (fig->statistics == Statistics::coherent && fig->plot_order == 3) {
        overlay = [period](double x) {
            const double t = 2.0 * kPi * x / period;
            return analytic::g3_point(SingleSourceMoments::coherent(), t, t);
        };
    } else if (fig->statistics == Statistics::coherent) {
        overlay = [period](double x) {
            const double t = 2.0 * kPi * x / period;
            return analytic::g4_point(SingleSourceMoments::coherent(), t, 2.0 * t, 3.0 * t);
        };
    } else if (fig->plot_order == 3) {
        const double rho_mm = o.speckle_rho_px * stack.pixel_pitch_mm;
        overlay = [period, rho_mm](double x) {
            const double t = 2.0 * kPi * x / period;
            const double g1 = std::exp(-std::abs(x) / rho_mm);
            const double g2 = std::exp(-2.0 * std::abs(x) / rho_mm);
            return analytic::g3_thermal(g1, g2, g1, t, t);
        };
    }
    run_frames_analysis(rc, name, name + " synthetic frames", stack, kReproBand,
                        to_string(fig->statistics),
                        fig->plot_order == 3 ? FrameChecks::g3 : FrameChecks::g4, fig->plot_order,
                        overlay);
}

// ---------------------------------------------------------------- driver

struct Subcommand {
    Command command;
    CLI::App* app = nullptr;
    std::string config_path;
    std::map<std::string, std::string> text;
    std::map<std::string, bool> flags;
    std::map<std::string, CLI::Option*> options;
};

std::string flag_name(const std::string& key)
{
    std::string s = key;
    for (char& ch : s) {
        ch = ch == '_' ? '-' : ch;
    }
    return s;
}

void register_keys(Subcommand& sub)
{
    sub.app->add_option("--config", sub.config_path, "JSON RunConfig (flags override its values)");
    for (const KeySpec& k : schema_for(sub.command)) {
        const std::string f = flag_name(k.key);
        if (k.type == KeyType::boolean) {
            sub.flags[k.key] = false;
            const std::string help =
                k.help + " (default " + (k.default_value.get<bool>() ? "on" : "off") + ")";
            sub.options[k.key] = sub.app->add_flag("--" + f + ",!--no-" + f, sub.flags[k.key], help);
            continue;
        }
        std::string names = "--" + f;
        if (k.key == "out_dir") {
            names += ",--out,-o";
        } else if (k.key == "in_dir") {
            names += ",--in";
        } else if (k.key == "figure") {
            names = "figure";
        }
        sub.options[k.key] = sub.app->add_option(names, sub.text[k.key], k.help);
        sub.options[k.key]->type_name(k.type == KeyType::integer  ? "INT"
                                      : k.type == KeyType::number ? "FLOAT"
                                                                  : "TEXT");
        if (!k.default_value.is_null() && k.key != "out_dir") {
            sub.options[k.key]->default_str(k.default_value.is_string()
                                                ? k.default_value.get<std::string>()
                                                : k.default_value.dump());
        }
        if (!k.choices.empty()) {
            sub.options[k.key]->check(CLI::IsMember(k.choices));
        }
    }
}

json effective_config(const Subcommand& sub)
{
    json cfg = default_config(sub.command);
    if (!sub.config_path.empty()) {
        const json file = load_config_file(sub.config_path, sub.command);
        for (const auto& [k, v] : file.items()) {
            cfg[k] = v;
        }
    }
    for (const KeySpec& k : schema_for(sub.command)) {
        const CLI::Option* opt = sub.options.at(k.key);
        if (opt->count() == 0) {
            continue;
        }
        cfg[k.key] = k.type == KeyType::boolean ? json(sub.flags.at(k.key))
                                                : parse_value(k, sub.text.at(k.key));
    }
    validate_config(cfg, sub.command);
    return cfg;
}

int execute(const Subcommand& sub, std::ostream& out)
{
    const auto t0 = std::chrono::steady_clock::now();
    json cfg = effective_config(sub);
    json hashed = cfg;
    hashed["command"] = std::string(command_name(sub.command));
    const std::string hash = config_hash(hashed);

    OutputSet files(resolve_out_dir(cfg));
    RunContext rc{sub.command, cfg, hash, files, Execution{static_cast<int>(cfg["workers"].get<long long>())}};
    rc.svg = !cfg.contains("svg") || cfg["svg"].get<bool>();
    const bool checking = cfg["check"].get<bool>();

    switch (sub.command) {
    case Command::analytic: cmd_analytic(rc); break;
    case Command::mc: cmd_mc(rc); break;
    case Command::frames_synth: cmd_frames_synth(rc); break;
    case Command::frames_analyze: cmd_frames_analyze(rc); break;
    case Command::repro: cmd_repro(rc); break;
    }

    std::string stem = std::string(command_name(sub.command));
    if (sub.command == Command::repro) {
        stem = cfg["figure"].get<std::string>();
    } else if (sub.command == Command::analytic || sub.command == Command::mc) {
        stem += "_" + cfg["mode"].get<std::string>();
    } else if (sub.command == Command::frames_synth) {
        stem = "synth";
    } else {
        stem = "frames_result";
    }
    const bool passed = !checking || rc.all_passed();
    json summary;
    summary["tool"] = "hbtsim";
    summary["version"] = HBT_VERSION;
    summary["schema_version"] = kSchemaVersion;
    summary["command"] = std::string(command_name(sub.command));
    summary["config_hash"] = hash;
    summary["config"] = cfg;
    summary["seed"] = cfg.contains("seed") ? cfg["seed"] : json(1);
    summary["metrics"] = rc.metrics;
    summary["checks"] = rc.checks;
    summary["checks_enabled"] = checking;
    summary["passed"] = passed;
    json written = json::array();
    for (const auto& p : files.written()) {
        written.push_back(p.filename().string());
    }
    summary["outputs"] = written;
    summary["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_json(files, stem + "_summary.json", summary);
    files.commit();

    out << summary["metrics"].dump(2) << "\n";
    for (const auto& c : rc.checks) {
        const char* tag = !checking ? "INFO " : c["passed"].get<bool>() ? "PASS " : "FAIL ";
        out << tag << c["name"].get<std::string>()
            << ": " << c["detail"].get<std::string>() << "\n";
    }
    out << "outputs in " << files.dir().string() << "\n";
    return passed ? kExitOk : kExitCheckFailed;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Simulator and analysis toolkit for third- and fourth-order intensity "
                 "interference of classical light",
                 "hbtsim"};
    app.require_subcommand(0, 1);
    bool version = false;
    bool schema = false;
    app.add_flag("--version", version, "print version information as JSON");
    app.add_flag("--schema", schema, "print the RunConfig schema as JSON");

    std::vector<std::unique_ptr<Subcommand>> subs;
    auto make = [&](CLI::App* parent, const std::string& name, Command c, const std::string& help) {
        auto s = std::make_unique<Subcommand>();
        s->command = c;
        s->app = parent->add_subcommand(name, help);
        register_keys(*s);
        subs.push_back(std::move(s));
    };
    make(&app, "analytic", Command::analytic, "closed-form correlation scans");
    make(&app, "mc", Command::mc, "Monte Carlo correlation scans");
    CLI::App* frames_app = app.add_subcommand("frames", "synthetic camera frame stacks");
    frames_app->require_subcommand(1);
    make(frames_app, "synth", Command::frames_synth, "write a synthetic frame stack");
    make(frames_app, "analyze", Command::frames_analyze, "correlate a frame stack");
    make(&app, "repro", Command::repro, "regenerate a figure with frozen defaults");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (version) {
        out << json{{"name", "hbtsim"}, {"version", HBT_VERSION}, {"schema_version", kSchemaVersion}}.dump()
            << "\n";
        return kExitOk;
    }
    if (schema) {
        out << schema_document().dump(2) << "\n";
        return kExitOk;
    }

    for (const auto& s : subs) {
        if (!s->app->parsed()) {
            continue;
        }
        try {
            return execute(*s, out);
        } catch (const ConfigError& e) {
            err << "hbtsim: config error: " << e.what() << "\n";
            return kExitUsage;
        } catch (const std::exception& e) {
            err << "hbtsim: " << e.what() << "\n";
            return kExitRuntime;
        }
    }
    err << app.help();
    return kExitUsage;
}

} // namespace hbt::cli
