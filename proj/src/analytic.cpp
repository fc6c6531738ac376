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

#include "hbt/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "hbt/errors.hpp"

namespace hbt::analytic {

using std::numbers::pi;

bool SingleSourceMoments::is_classical(double tolerance) const
{
    if (!(g2 >= 1.0 - tolerance) || !(g3 >= g2 * g2 - tolerance)) {
        return false;
    }
    return !g4 || *g4 >= g3 * g3 / g2 - tolerance;
}

void CoherenceParams::validate() const
{
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw DomainError("coherence length rho must be positive");
    }
}

void require_classical(const SingleSourceMoments& m, Classicality c)
{
    if (!std::isfinite(m.g2) || !std::isfinite(m.g3) || (m.g4 && !std::isfinite(*m.g4))) {
        throw DomainError("moments must be finite");
    }
    if (c == Classicality::strict && !m.is_classical()) {
        throw DomainError("moments violate the classical bounds g2 >= 1, g3 >= g2^2, g4 >= g3^2/g2");
    }
}

namespace {

double require_g4(const SingleSourceMoments& m)
{
    if (!m.g4) {
        throw DomainError("fourth-order quantity requested but g4 is not set");
    }
    return *m.g4;
}

} // namespace

std::string_view to_string(ScanMode mode)
{
    switch (mode) {
    case ScanMode::sync3: return "sync3";
    case ScanMode::single3: return "single3";
    case ScanMode::sync4: return "sync4";
    case ScanMode::pol3: return "pol3";
    case ScanMode::thermal_extended3: return "thermal-extended3";
    }
    return "?";
}

ScanMode scan_mode_from_string(std::string_view name)
{
    for (ScanMode m : {ScanMode::sync3, ScanMode::single3, ScanMode::sync4, ScanMode::pol3,
                       ScanMode::thermal_extended3}) {
        if (name == to_string(m)) {
            return m;
        }
    }
    throw ConfigError("unknown scan mode '" + std::string(name) +
                      "' (expected sync3, single3, sync4, pol3 or thermal-extended3)");
}

int scan_order(ScanMode mode) { return mode == ScanMode::sync4 ? 4 : 3; }

std::vector<double> ScanCurve::parameters() const
{
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        out.push_back(p.t);
    }
    return out;
}

std::vector<double> ScanCurve::values() const
{
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        out.push_back(p.value);
    }
    return out;
}

double g3_point(const SingleSourceMoments& m, double phi12, double phi23, Classicality c)
{
    require_classical(m, c);
    const double phi13 = phi12 + phi23;
    return m.g3 / 4.0 +
           m.g2 / 2.0 * (1.5 + std::cos(phi12) + std::cos(phi23) + std::cos(phi13));
}

double visibility3(const SingleSourceMoments& m, Classicality c)
{
    require_classical(m, c);
    return 1.0 / (1.0 + 2.0 * m.g3 / (9.0 * m.g2));
}

AbcAmplitudes abc_amplitudes(const SingleSourceMoments& m)
{
    const double g4 = require_g4(m);
    const double g2sq = m.g2 * m.g2;
    AbcAmplitudes out;
    out.A = g4 / 8.0 + m.g3 / 2.0 + 3.0 * g2sq / 8.0;
    out.B = (m.g3 + g2sq) / 4.0;
    out.C = g2sq / 8.0;
    constexpr double slack = 1e-12;
    out.a_bound_holds = out.A >= 0.5 + m.g3 / 2.0 - slack;
    out.b_bound_holds = out.B <= m.g3 / 2.0 + slack;
    out.c_bound_holds = out.C <= m.g3 / 8.0 + slack;
    return out;
}

double g4_point(const SingleSourceMoments& m, double phi12, double phi13, double phi14,
                Classicality c)
{
    require_g4(m);
    require_classical(m, c);
    const AbcAmplitudes abc = abc_amplitudes(m);
    const double pairs = std::cos(phi12) + std::cos(phi13) + std::cos(phi14) +
                         std::cos(phi12 - phi13) + std::cos(phi12 - phi14) +
                         std::cos(phi13 - phi14);
    const double triples = std::cos(phi12 + phi13 - phi14) + std::cos(phi12 + phi14 - phi13) +
                           std::cos(phi13 + phi14 - phi12);
    return abc.A + abc.B * pairs + abc.C * triples;
}

double visibility4(const SingleSourceMoments& m, Classicality c)
{
    const double g4 = require_g4(m);
    require_classical(m, c);
    return 1.0 / (1.0 + g4 / (8.0 * m.g3 + 9.0 * m.g2 * m.g2));
}

double g1_sinc(double x_mm, const CoherenceParams& c)
{
    c.validate();
    const double u = 2.0 * pi * x_mm / c.rho;
    if (u == 0.0) {
        return 1.0;
    }
    return std::abs(std::sin(u) / u);
}

namespace {

void require_unit_interval(double gamma)
{
    if (!(std::abs(gamma) <= 1.0)) {
        throw DomainError("first-order coherence must satisfy |gamma| <= 1");
    }
}

} // namespace

double siegert2(double gamma)
{
    require_unit_interval(gamma);
    return 1.0 + gamma * gamma;
}

double siegert3(double g12, double g13, double g23)
{
    require_unit_interval(g12);
    require_unit_interval(g13);
    require_unit_interval(g23);
    return 1.0 + g12 * g12 + g13 * g13 + g23 * g23 + 2.0 * g12 * g13 * g23;
}

double g3_thermal(double gamma12, double gamma13, double gamma23, double phi12, double phi23)
{
    const double phi13 = phi12 + phi23;
    const double constant =
        siegert3(gamma12, gamma13, gamma23) / 4.0 +
        (siegert2(gamma12) + siegert2(gamma13) + siegert2(gamma23)) / 4.0;
    const double oscillating = std::cos(phi12) * (gamma12 + gamma23 * gamma13) * gamma12 +
                               std::cos(phi23) * (gamma23 + gamma13 * gamma12) * gamma23 +
                               std::cos(phi13) * (gamma13 + gamma12 * gamma23) * gamma13;
    return constant + oscillating / 2.0;
}

double g3_thermal_extended(double x1, double x2, double x3, const CoherenceParams& c,
                           const Geometry& geometry)
{
    geometry.validate();
    const double k = geometry.phase_per_mm2() * geometry.separation_b;
    return g3_thermal(g1_sinc(x1 - x2, c), g1_sinc(x1 - x3, c), g1_sinc(x2 - x3, c),
                      k * (x1 - x2), k * (x2 - x3));
}

namespace {

double base_difference(const PhaseConfig& phases, std::size_t n, std::size_t m)
{
    if (phases.size() == 0) {
        return 0.0;
    }
    if (phases.size() < 3) {
        throw DomainError("polarization pattern needs three detector phases");
    }
    return phases.difference(n, m);
}

double g3_with_analyzers(const SingleSourceMoments& m, double theta2, double theta3,
                         const PhaseConfig& phases, Classicality c)
{
    const double phi12 = base_difference(phases, 0, 1) + 2.0 * (0.0 - theta2);
    const double phi23 = base_difference(phases, 1, 2) + 2.0 * (theta2 - theta3);
    return g3_point(m, phi12, phi23, c);
}

} // namespace

double g3_polarization(double theta2, double theta3, const PhaseConfig& phases)
{
    return g3_with_analyzers(SingleSourceMoments::coherent(), theta2, theta3, phases,
                             Classicality::strict);
}

ScanCurve scan_curve(ScanMode mode, const SingleSourceMoments& m, std::span<const double> grid,
                     const ScanContext& context)
{
    if (grid.empty()) {
        throw DomainError("scan grid must not be empty");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw DomainError("scan grid must be strictly increasing");
        }
    }
    if (mode == ScanMode::sync4) {
        require_g4(m);
    }
    if (mode == ScanMode::thermal_extended3) {
        if (!context.coherence || !context.geometry) {
            throw DomainError("thermal-extended3 scans need coherence parameters and a geometry");
        }
        context.coherence->validate();
        context.geometry->validate();
    } else {
        require_classical(m, context.classicality);
    }

    ScanCurve curve;
    curve.mode = mode;
    curve.order = scan_order(mode);
    curve.points.reserve(grid.size());
    for (double t : grid) {
        double value = 0.0;
        switch (mode) {
        case ScanMode::sync3:
            value = g3_point(m, t, t, context.classicality);
            break;
        case ScanMode::single3:
            value = g3_point(m, pi / 2.0, t, context.classicality);
            break;
        case ScanMode::sync4:
            value = g4_point(m, t, 2.0 * t, 3.0 * t, context.classicality);
            break;
        case ScanMode::pol3:
            value = g3_with_analyzers(m, t, -t, context.base_phases, context.classicality);
            break;
        case ScanMode::thermal_extended3:
            value = g3_thermal_extended(t, 0.0, -t, *context.coherence, *context.geometry);
            break;
        }
        curve.points.push_back({t, value});
    }
    return curve;
}

std::vector<double> uniform_grid(double begin, double end, std::size_t n)
{
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = begin + (end - begin) * static_cast<double>(i) / static_cast<double>(n);
    }
    return grid;
}

std::vector<double> default_grid() { return uniform_grid(0.0, 2.0 * pi, 720); }

double extract_visibility(std::span<const double> values)
{
    if (values.empty()) {
        throw UndefinedVisibility("visibility of an empty curve is undefined");
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double sum = *hi + *lo;
    if (sum == 0.0) {
        throw UndefinedVisibility("visibility undefined: max + min == 0");
    }
    return (*hi - *lo) / sum;
}

double extract_visibility(const ScanCurve& curve)
{
    const std::vector<double> v = curve.values();
    return extract_visibility(v);
}

double robust_visibility(std::span<const double> values, double fraction)
{
    if (values.empty()) {
        throw UndefinedVisibility("visibility of an empty curve is undefined");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const auto k = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(fraction * static_cast<double>(sorted.size()))));
    const double lo = std::accumulate(sorted.begin(), sorted.begin() + k, 0.0) / double(k);
    const double hi = std::accumulate(sorted.end() - k, sorted.end(), 0.0) / double(k);
    if (hi + lo == 0.0) {
        throw UndefinedVisibility("visibility undefined: max + min == 0");
    }
    return (hi - lo) / (hi + lo);
}

} // namespace hbt::analytic
