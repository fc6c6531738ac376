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

// Serial reference estimators. Deliberately naive: one FieldShot per shot and
// scan point, long double accumulation, no blocking or weight caching.

#include <cmath>

#include "hbt/errors.hpp"
#include "hbt/montecarlo.hpp"
#include "montecarlo_detail.hpp"

namespace hbt::mc::reference {

namespace {

using detail::DetectorSetup;

double intensity(const McConfig& cfg, const FieldShot& raw, const DetectorSetup& setup,
                 std::size_t n)
{
    const FieldShot shot = setup.theta.empty() ? raw : project_polarized(raw, setup.theta[n]);
    if (setup.use_positions) {
        return instantaneous_intensity(shot, *cfg.geometry, setup.x[n]);
    }
    return instantaneous_intensity(shot, setup.phi[n]);
}

CorrelationEstimate run_setup(const McConfig& cfg, const DetectorSetup& setup, std::size_t order)
{
    long double prod = 0, prod_sq = 0;
    std::vector<long double> sum(order, 0), sum_sq(order, 0);
    for (std::uint64_t i = 0; i < cfg.n_shots; ++i) {
        const FieldShot shot = sample_shot(cfg, i);
        long double p = 1;
        for (std::size_t n = 0; n < order; ++n) {
            const double v = intensity(cfg, shot, setup, n);
            p *= v;
            sum[n] += v;
            sum_sq[n] += static_cast<long double>(v) * v;
        }
        prod += p;
        prod_sq += p * p;
    }

    const auto count = static_cast<double>(cfg.n_shots);
    CorrelationEstimate e;
    e.n_shots = cfg.n_shots;
    e.order = static_cast<int>(order);
    double normalizer = 1.0;
    for (std::size_t n = 0; n < order; ++n) {
        const double mean = static_cast<double>(sum[n]) / count;
        e.mean_intensity.push_back(mean);
        e.mean_intensity_err.push_back(detail::standard_error(
            static_cast<double>(sum[n]), static_cast<double>(sum_sq[n]), cfg.n_shots));
        normalizer *= mean;
    }
    if (!(normalizer > 0.0)) {
        throw NormalizationError("mean intensity at a detector is zero; g cannot be normalized");
    }
    e.value = static_cast<double>(prod) / count / normalizer;
    e.std_error = detail::standard_error(static_cast<double>(prod), static_cast<double>(prod_sq),
                                         cfg.n_shots) /
                  normalizer;
    return e;
}

} // namespace

McScan estimate_scan(const McConfig& cfg, analytic::ScanMode mode, std::span<const double> grid)
{
    cfg.validate();
    const auto order = static_cast<std::size_t>(analytic::scan_order(mode));
    const std::vector<DetectorSetup> setups = detail::setups_for_scan(cfg, mode, grid);
    McScan scan;
    scan.curve.mode = mode;
    scan.curve.order = static_cast<int>(order);
    for (std::size_t g = 0; g < setups.size(); ++g) {
        CorrelationEstimate e = run_setup(cfg, setups[g], order);
        scan.curve.points.push_back({grid[g], e.value});
        scan.estimates.push_back(std::move(e));
    }
    return scan;
}

CorrelationEstimate estimate_g(const McConfig& cfg, int order)
{
    cfg.validate();
    return run_setup(cfg, detail::setup_for_order(cfg, order), static_cast<std::size_t>(order));
}

std::vector<CoherenceEstimate> estimate_coherence(const McConfig& cfg,
                                                  std::span<const SeparationPair> pairs)
{
    cfg.validate();
    if (!detail::uses_emitter_grid(cfg, cfg.source_A)) {
        throw ConfigError("coherence estimation needs an extended thermal source A");
    }
    const double k = cfg.geometry->phase_per_mm2();
    const double half = cfg.geometry->separation_b / 2.0;
    const auto count = static_cast<double>(cfg.n_shots);

    std::vector<CoherenceEstimate> out;
    for (const SeparationPair& pair : pairs) {
        long double pp = 0, pp_sq = 0, si = 0, sj = 0, cre = 0, cim = 0;
        for (std::uint64_t i = 0; i < cfg.n_shots; ++i) {
            const FieldShot shot = sample_shot(cfg, i);
            const Complex ei = emitter_field(shot.emitters_A, half, k, pair.x_i);
            const Complex ej = emitter_field(shot.emitters_A, half, k, pair.x_j);
            const double ii = std::norm(ei);
            const double ij = std::norm(ej);
            const Complex cross = ei * std::conj(ej);
            pp += static_cast<long double>(ii) * ij;
            pp_sq += static_cast<long double>(ii) * ij * ii * ij;
            si += ii;
            sj += ij;
            cre += cross.real();
            cim += cross.imag();
        }
        const double mi = static_cast<double>(si) / count;
        const double mj = static_cast<double>(sj) / count;
        CoherenceEstimate e;
        e.separation = pair.x_i - pair.x_j;
        e.g2 = static_cast<double>(pp) / count / (mi * mj);
        e.g2_err = detail::standard_error(static_cast<double>(pp), static_cast<double>(pp_sq),
                                          cfg.n_shots) /
                   (mi * mj);
        e.gamma = std::sqrt(std::max(0.0, e.g2 - 1.0));
        e.gamma_field =
            std::hypot(static_cast<double>(cre) / count, static_cast<double>(cim) / count) /
            std::sqrt(mi * mj);
        e.model_violation = e.g2 < 1.0 - 3.0 * e.g2_err;
        out.push_back(e);
    }
    return out;
}

} // namespace hbt::mc::reference
