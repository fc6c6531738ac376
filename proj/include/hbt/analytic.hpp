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

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hbt/core_model.hpp"

namespace hbt::analytic {

/// Normalized single-source intensity correlation functions g2, g3 and
/// optionally g4.
struct SingleSourceMoments {
    double g2 = 1.0;
    double g3 = 1.0;
    std::optional<double> g4;

    static SingleSourceMoments coherent() { return {1.0, 1.0, 1.0}; }
    static SingleSourceMoments thermal() { return {2.0, 6.0, 24.0}; }
    static SingleSourceMoments for_statistics(Statistics s)
    {
        return s == Statistics::coherent ? coherent() : thermal();
    }

    /// True when g2 >= 1, g3 >= g2^2 and (if present) g4 >= g3^2 / g2.
    bool is_classical(double tolerance = 1e-12) const;
};

/// Strict by default: formulas refuse non-classical moments unless the caller
/// opts into exploratory use.
enum class Classicality { strict, allow_nonclassical };

/// Constant term and the two oscillation amplitudes of the fourth-order pattern.
struct AbcAmplitudes {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    bool a_bound_holds = false; ///< A >= 1/2 + g3/2
    bool b_bound_holds = false; ///< B <= g3/2
    bool c_bound_holds = false; ///< C <= g3/8
};

/// Transverse coherence length rho (mm).
struct CoherenceParams {
    double rho = 1.0;
    void validate() const;
};

enum class ScanMode {
    sync3,             ///< (phi12, phi23) = (t, t)
    single3,           ///< (phi12, phi23) = (pi/2, t)
    sync4,             ///< (phi12, phi13, phi14) = (t, 2t, 3t)
    pol3,              ///< analyzers (0, t, -t), phases fixed
    thermal_extended3, ///< detectors at (t, 0, -t) mm, extended thermal sources
};

std::string_view to_string(ScanMode mode);
ScanMode scan_mode_from_string(std::string_view name);
int scan_order(ScanMode mode);

struct ScanPoint {
    double t = 0.0;
    double value = 0.0;
};

struct ScanCurve {
    ScanMode mode = ScanMode::sync3;
    int order = 3;
    std::vector<ScanPoint> points;

    std::vector<double> parameters() const;
    std::vector<double> values() const;
};

/// Everything besides the moments that a particular scan mode may need.
struct ScanContext {
    std::optional<CoherenceParams> coherence; ///< thermal_extended3
    std::optional<Geometry> geometry;         ///< thermal_extended3
    PhaseConfig base_phases;                  ///< pol3; empty means all zero
    Classicality classicality = Classicality::strict;
};

void require_classical(const SingleSourceMoments& m, Classicality c = Classicality::strict);

double g3_point(const SingleSourceMoments& m, double phi12, double phi23,
                Classicality c = Classicality::strict);

double visibility3(const SingleSourceMoments& m, Classicality c = Classicality::strict);

double g4_point(const SingleSourceMoments& m, double phi12, double phi13, double phi14,
                Classicality c = Classicality::strict);

AbcAmplitudes abc_amplitudes(const SingleSourceMoments& m);

double visibility4(const SingleSourceMoments& m, Classicality c = Classicality::strict);

/// |sin(2 pi x / rho) / (2 pi x / rho)|
double g1_sinc(double x_mm, const CoherenceParams& c);

/// 1 + gamma^2
double siegert2(double gamma);

/// 1 + g12^2 + g13^2 + g23^2 + 2 g12 g13 g23
double siegert3(double g12, double g13, double g23);

/// Third-order correlation of two extended thermal sources for arbitrary
/// pairwise first-order coherences and phase differences.
double g3_thermal(double gamma12, double gamma13, double gamma23, double phi12, double phi23);

/// g3_thermal with gamma_ij = g1_sinc(x_i - x_j) and phi_ij from the geometry.
double g3_thermal_extended(double x1, double x2, double x3, const CoherenceParams& c,
                           const Geometry& geometry);

/// Coherent-source g3 with linear analyzers at (0, theta2, theta3). Each phase
/// difference phi_nm gains 2(theta_n - theta_m).
double g3_polarization(double theta2, double theta3, const PhaseConfig& phases = {});

ScanCurve scan_curve(ScanMode mode, const SingleSourceMoments& m, std::span<const double> grid,
                     const ScanContext& context = {});

/// n points evenly spaced over [begin, end), end excluded.
std::vector<double> uniform_grid(double begin, double end, std::size_t n);

/// Default scan grid: 720 points over one period [0, 2pi).
std::vector<double> default_grid();

/// (max - min) / (max + min) over the samples.
double extract_visibility(std::span<const double> values);
double extract_visibility(const ScanCurve& curve);

/// Visibility from the means of the top and bottom `fraction` of samples
/// (at least one sample each). Suppresses isolated outliers in noisy curves.
double robust_visibility(std::span<const double> values, double fraction = 0.02);

} // namespace hbt::analytic
