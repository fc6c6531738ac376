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

#include "hbt/core_model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hbt/errors.hpp"

namespace hbt {

namespace jones {

JonesVector horizontal() { return {Complex{1.0, 0.0}, Complex{0.0, 0.0}}; }
JonesVector vertical() { return {Complex{0.0, 0.0}, Complex{1.0, 0.0}}; }

JonesVector right_circular()
{
    const double r = std::numbers::sqrt2 / 2.0;
    return {Complex{r, 0.0}, Complex{0.0, r}};
}

JonesVector left_circular()
{
    const double r = std::numbers::sqrt2 / 2.0;
    return {Complex{r, 0.0}, Complex{0.0, -r}};
}

JonesVector linear(double theta)
{
    return {Complex{std::cos(theta), 0.0}, Complex{std::sin(theta), 0.0}};
}

double squared_norm(const JonesVector& v) { return std::norm(v[0]) + std::norm(v[1]); }

} // namespace jones

const char* to_string(Statistics s)
{
    return s == Statistics::coherent ? "coherent" : "thermal";
}

Statistics statistics_from_string(std::string_view name)
{
    if (name == "coherent") {
        return Statistics::coherent;
    }
    if (name == "thermal") {
        return Statistics::thermal;
    }
    throw ConfigError("unknown source statistics '" + std::string(name) +
                      "' (expected coherent or thermal)");
}

void SourceSpec::validate() const
{
    if (!(mean_intensity >= 0.0) || !std::isfinite(mean_intensity)) {
        throw DomainError("source mean intensity must be finite and >= 0");
    }
    if (!(extent_a >= 0.0) || !std::isfinite(extent_a)) {
        throw DomainError("source extent must be finite and >= 0");
    }
    if (polarization && std::abs(jones::squared_norm(*polarization) - 1.0) > 1e-12) {
        throw DomainError("polarization vector must have unit norm");
    }
}

void Geometry::validate() const
{
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(separation_b) || !positive(distance_l) || !positive(wavelength_nm)) {
        throw InvalidGeometry("source separation, screen distance and wavelength must be positive");
    }
    if (detector_positions.size() > 4) {
        throw InvalidGeometry("at most 4 detectors are supported");
    }
    for (double x : detector_positions) {
        if (!std::isfinite(x)) {
            throw InvalidGeometry("detector positions must be finite");
        }
    }
}

double Geometry::fringe_period() const
{
    return wavelength_nm * 1e-6 * distance_l / separation_b;
}

double Geometry::phase_per_mm2() const
{
    return 2.0 * std::numbers::pi / (wavelength_nm * 1e-6 * distance_l);
}

PhaseConfig detector_phases(const Geometry& geometry)
{
    geometry.validate();
    const double k = geometry.phase_per_mm2() * geometry.separation_b;
    std::vector<double> phi;
    phi.reserve(geometry.detector_positions.size());
    for (double x : geometry.detector_positions) {
        phi.push_back(k * x);
    }
    return PhaseConfig(std::move(phi));
}

double instantaneous_intensity(const FieldShot& shot, double phi_n)
{
    // |E_A e^{i(phi_n + phi_A)} + E_B e^{i phi_B}|^2 expands to the two-source
    // form; evaluating the modulus keeps the result non-negative.
    const Complex a = shot.amp_A * std::polar(1.0, phi_n + shot.phase_A);
    const Complex b = shot.amp_B * std::polar(1.0, shot.phase_B);
    return std::norm(a + b);
}

Complex emitter_field(std::span<const Emitter> emitters, double centre_mm, double phase_per_mm2,
                      double x_mm)
{
    Complex sum{0.0, 0.0};
    for (const Emitter& e : emitters) {
        sum += e.amplitude * std::polar(1.0, phase_per_mm2 * (centre_mm + e.position) * x_mm);
    }
    return sum;
}

double instantaneous_intensity(const FieldShot& shot, const Geometry& geometry, double x_mm)
{
    const double k = geometry.phase_per_mm2();
    if (!shot.extended()) {
        return instantaneous_intensity(shot, k * geometry.separation_b * x_mm);
    }
    const double half = geometry.separation_b / 2.0;
    const Complex a = emitter_field(shot.emitters_A, +half, k, x_mm) * std::polar(1.0, shot.phase_A);
    const Complex b = emitter_field(shot.emitters_B, -half, k, x_mm) * std::polar(1.0, shot.phase_B);
    return std::norm(a + b);
}

namespace {

Complex project(const JonesVector& source, const JonesVector& analyzer)
{
    return source[0] * std::conj(analyzer[0]) + source[1] * std::conj(analyzer[1]);
}

} // namespace

FieldShot project_polarized(const FieldShot& shot, double theta)
{
    if (!shot.pol_A || !shot.pol_B) {
        throw UnpolarizedInput("polarizer projection needs polarization states for both sources");
    }
    const JonesVector analyzer = jones::linear(theta);
    const Complex ta = project(*shot.pol_A, analyzer);
    const Complex tb = project(*shot.pol_B, analyzer);

    FieldShot out = shot;
    out.amp_A *= ta;
    out.amp_B *= tb;
    for (Emitter& e : out.emitters_A) {
        e.amplitude *= ta;
    }
    for (Emitter& e : out.emitters_B) {
        e.amplitude *= tb;
    }
    // Analyzer output is linearly polarized along theta.
    out.pol_A = analyzer;
    out.pol_B = analyzer;
    return out;
}

} // namespace hbt
