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
#include <vector>

#include "hbt/analytic.hpp"
#include "hbt/core_model.hpp"
#include "hbt/parallel.hpp"

namespace hbt::mc {

/// Monte Carlo run description.
///
/// Point-source runs take per-detector phases from `phases` (or from
/// `geometry` when `phases` is empty). Sources that are thermal with a non-zero
/// extent switch the run to extended mode, which needs `geometry`: each such
/// source becomes `emitters_per_source` emitters on a fixed uniform grid across
/// [-a/2, a/2] with independent circular-Gaussian amplitudes per shot.
struct McConfig {
    SourceSpec source_A;
    SourceSpec source_B;
    PhaseConfig phases;
    std::optional<Geometry> geometry;
    std::uint64_t n_shots = 100000;
    std::uint64_t seed = 1;
    int emitters_per_source = 64;
    std::optional<PolarizerSet> polarizers;
    /// Permit sources with different statistics or mean intensity.
    bool allow_asymmetric = false;

    void validate() const;
    bool extended() const;
};

struct CorrelationEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n_shots = 0;
    int order = 0;
    /// Per-detector mean intensity and its standard error.
    std::vector<double> mean_intensity;
    std::vector<double> mean_intensity_err;
};

struct McScan {
    analytic::ScanCurve curve;
    std::vector<CorrelationEstimate> estimates;
};

struct ScanVisibility {
    double value = 0.0;
    double std_error = 0.0;
};

/// Realization `shot_index` of both fields. Pure function of (seed, shot_index).
FieldShot sample_shot(const McConfig& cfg, std::uint64_t shot_index);

/// Normalized order-n correlation <I_1...I_n> / (<I_1>...<I_n>) over the first
/// `order` detectors. The standard error is the shot-level standard deviation
/// of the intensity product over sqrt(n_shots), divided by the normalizer.
CorrelationEstimate estimate_g(const McConfig& cfg, int order, Execution exec = {});

/// One estimate per grid point. Every grid point reuses the same field
/// realizations, mirroring a physical scan over a stationary source.
McScan estimate_scan(const McConfig& cfg, analytic::ScanMode mode, std::span<const double> grid,
                     Execution exec = {});

/// Visibility of the estimated curve from its raw extrema, with the error
/// propagated from the two extremal points.
ScanVisibility scan_visibility(const McScan& scan);

struct SeparationPair {
    double x_i = 0.0;
    double x_j = 0.0;
};

struct CoherenceEstimate {
    double separation = 0.0;
    double g2 = 0.0;
    double g2_err = 0.0;
    /// sqrt(max(g2 - 1, 0)): coherence implied by the Siegert relation.
    double gamma = 0.0;
    /// |<E_i E_j*>| / sqrt(<I_i><I_j>) measured directly from the fields.
    double gamma_field = 0.0;
    /// g2 below 1 by more than three standard errors.
    bool model_violation = false;
};

/// Pairwise g2 of source A alone (extended thermal mode).
std::vector<CoherenceEstimate> estimate_coherence(const McConfig& cfg,
                                                  std::span<const SeparationPair> pairs,
                                                  Execution exec = {});

/// Emitter offsets used in extended mode: n points evenly spanning [-a/2, a/2].
std::vector<double> emitter_positions(double extent_a, int n);

/// Exact first-order coherence |sum_m exp(i k xi_m dx)| / n of the equal-weight
/// emitter grid. This is what estimate_coherence converges to.
double emitter_grid_coherence(double extent_a, int n, const Geometry& geometry, double dx);

struct CoherenceFit {
    double rho = 0.0;
    double rms_residual = 0.0;
};

/// Least-squares fit of analytic::g1_sinc to measured coherence values.
CoherenceFit fit_coherence_length(std::span<const double> separations,
                                  std::span<const double> gamma, double rho_min, double rho_max);

/// Coherence of source A measured at separations (dx, 0) and the sinc fit.
struct CoherenceCalibration {
    std::vector<double> separations;
    std::vector<CoherenceEstimate> estimates;
    CoherenceFit fit;
};

/// `n` separations evenly spanning [0, 0.75 lambda l / a], inside the main lobe.
std::vector<double> calibration_separations(const McConfig& cfg, std::size_t n = 10);

/// Runs estimate_coherence at `separations` and fits rho to gamma = sqrt(g2 - 1)
/// over [rho0 / 8, 8 rho0] with rho0 = 2 lambda l / a.
CoherenceCalibration calibrate_coherence(const McConfig& cfg, std::span<const double> separations,
                                         Execution exec = {});

namespace reference {

/// Straightforward serial estimator: builds every FieldShot through
/// sample_shot / project_polarized / instantaneous_intensity and accumulates in
/// long double. Kept as the oracle for the blocked OpenMP kernels.
McScan estimate_scan(const McConfig& cfg, analytic::ScanMode mode, std::span<const double> grid);

CorrelationEstimate estimate_g(const McConfig& cfg, int order);

std::vector<CoherenceEstimate> estimate_coherence(const McConfig& cfg,
                                                  std::span<const SeparationPair> pairs);

} // namespace reference

} // namespace hbt::mc
