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
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace hbt {

using Complex = std::complex<double>;

/// Polarization state in the H/V basis.
using JonesVector = std::array<Complex, 2>;

namespace jones {
JonesVector horizontal();
JonesVector vertical();
/// (e_H + i e_V) / sqrt(2)
JonesVector right_circular();
/// (e_H - i e_V) / sqrt(2)
JonesVector left_circular();
/// Transmission axis of a linear analyzer at angle theta from H.
JonesVector linear(double theta);
double squared_norm(const JonesVector& v);
} // namespace jones

enum class Statistics { coherent, thermal };

const char* to_string(Statistics s);
Statistics statistics_from_string(std::string_view name);

/// One of the two interfering sources.
struct SourceSpec {
    Statistics statistics = Statistics::coherent;
    double mean_intensity = 1.0;
    /// Transverse size of the emitting spot in mm; 0 means a point source.
    double extent_a = 0.0;
    std::optional<JonesVector> polarization;

    void validate() const;
};

/// Two-source far-field geometry. Lengths in mm, wavelength in nm.
struct Geometry {
    double separation_b = 1.3;
    double distance_l = 1000.0;
    double wavelength_nm = 532.0;
    std::vector<double> detector_positions;

    void validate() const;
    /// Fringe period lambda*l/b in mm.
    double fringe_period() const;
    /// 2*pi / (lambda*l), in rad/mm^2. Multiplied by (source coordinate * detector
    /// coordinate) it gives the far-field propagation phase.
    double phase_per_mm2() const;
    int order() const { return static_cast<int>(detector_positions.size()); }
};

/// Per-detector first-order phases phi_n = phi_An - phi_Bn. Pairwise differences
/// are derived, so phi_13 = phi_12 + phi_23 holds by construction.
struct PhaseConfig {
    std::vector<double> phi;

    PhaseConfig() = default;
    explicit PhaseConfig(std::vector<double> values) : phi(std::move(values)) {}

    std::size_t size() const { return phi.size(); }
    double difference(std::size_t n, std::size_t m) const { return phi.at(n) - phi.at(m); }
};

struct Emitter {
    /// Offset from the source centre, mm.
    double position = 0.0;
    Complex amplitude;
};

/// A single stochastic realization of both source fields.
///
/// The optical carrier exp(-i*omega*t) multiplies both fields equally and drops
/// out of every intensity, so it is not stored. For extended sources the
/// per-emitter amplitudes replace amp_A / amp_B.
struct FieldShot {
    Complex amp_A;
    Complex amp_B;
    double phase_A = 0.0;
    double phase_B = 0.0;
    std::optional<JonesVector> pol_A;
    std::optional<JonesVector> pol_B;
    std::vector<Emitter> emitters_A;
    std::vector<Emitter> emitters_B;

    bool extended() const { return !emitters_A.empty() || !emitters_B.empty(); }
};

/// Linear analyzer angles, one per detector, in the H/V basis. Angles are
/// physically meaningful modulo pi.
struct PolarizerSet {
    std::vector<double> theta;
};

/// phi_n = 2*pi*b*x_n / (lambda*l).
PhaseConfig detector_phases(const Geometry& geometry);

/// I_A + I_B + 2 Re[E0A conj(E0B) exp(i(phi_n + phi_A - phi_B))] for a point-source shot.
double instantaneous_intensity(const FieldShot& shot, double phi_n);

/// Intensity at far-field coordinate x (mm). Extended shots sum their emitters,
/// source A centred at +b/2 and source B at -b/2; point shots reduce to the
/// overload above with phi_n taken from the geometry.
double instantaneous_intensity(const FieldShot& shot, const Geometry& geometry, double x_mm);

/// Complex field of one source's emitters at x (mm), with the source centred at `centre_mm`.
Complex emitter_field(std::span<const Emitter> emitters, double centre_mm, double phase_per_mm2,
                      double x_mm);

/// Projects both source fields onto a linear analyzer at angle theta. The
/// projected amplitudes are E0A (e_A . e_theta) and E0B (e_B . e_theta); the
/// intensity is not renormalized.
FieldShot project_polarized(const FieldShot& shot, double theta);

} // namespace hbt
