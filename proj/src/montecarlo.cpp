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

#include "hbt/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "hbt/compensated_sum.hpp"
#include "hbt/errors.hpp"
#include "montecarlo_detail.hpp"

namespace hbt::mc {

using analytic::ScanMode;
using std::numbers::pi;

void McConfig::validate() const
{
    source_A.validate();
    source_B.validate();
    if (n_shots < 1) {
        throw ConfigError("n_shots must be at least 1");
    }
    if (emitters_per_source < 1) {
        throw ConfigError("emitters_per_source must be at least 1");
    }
    if (!allow_asymmetric && (source_A.statistics != source_B.statistics ||
                              source_A.mean_intensity != source_B.mean_intensity)) {
        throw ConfigError("sources must share statistics and mean intensity "
                          "(set allow_asymmetric to override)");
    }
    if (geometry) {
        geometry->validate();
    }
    if (extended() && !geometry) {
        throw ConfigError("extended thermal sources need a geometry");
    }
}

bool McConfig::extended() const
{
    auto ext = [](const SourceSpec& s) {
        return s.statistics == Statistics::thermal && s.extent_a > 0.0;
    };
    return ext(source_A) || ext(source_B);
}

namespace detail {

bool uses_emitter_grid(const McConfig& cfg, const SourceSpec& s)
{
    return cfg.extended() && s.statistics == Statistics::thermal && s.extent_a > 0.0;
}

void draw_source(const McConfig& cfg, const SourceSpec& s, std::uint64_t shot_index,
                 std::uint32_t stream, Complex& amp, double& phase, std::vector<Complex>& emitters)
{
    CounterStream rng(cfg.seed, shot_index, stream);
    if (uses_emitter_grid(cfg, s)) {
        const auto n = static_cast<std::size_t>(cfg.emitters_per_source);
        emitters.resize(n);
        const double per_emitter = s.mean_intensity / static_cast<double>(n);
        for (auto& e : emitters) {
            e = rng.circular_gaussian(per_emitter);
        }
        amp = {0.0, 0.0};
        phase = 0.0;
        return;
    }
    if (s.statistics == Statistics::coherent) {
        amp = {std::sqrt(s.mean_intensity), 0.0};
        phase = rng.phase();
    } else {
        amp = rng.circular_gaussian(s.mean_intensity);
        phase = 0.0;
    }
}

double standard_error(double sum, double sum_sq, std::uint64_t n)
{
    if (n < 2) {
        return 0.0;
    }
    const double nn = static_cast<double>(n);
    const double mean = sum / nn;
    const double var = std::max(0.0, (sum_sq / nn - mean * mean) * nn / (nn - 1.0));
    return std::sqrt(var / nn);
}

namespace {

std::vector<double> base_phases(const McConfig& cfg, std::size_t n)
{
    if (cfg.phases.size() == 0) {
        return std::vector<double>(n, 0.0);
    }
    if (cfg.phases.size() < n) {
        throw ConfigError("phase configuration has fewer entries than detectors");
    }
    return {cfg.phases.phi.begin(), cfg.phases.phi.begin() + static_cast<std::ptrdiff_t>(n)};
}

std::vector<double> analyzer_angles(const McConfig& cfg, std::size_t n)
{
    if (!cfg.polarizers) {
        return {};
    }
    if (cfg.polarizers->theta.size() < n) {
        throw ConfigError("polarizer set has fewer angles than detectors");
    }
    return {cfg.polarizers->theta.begin(),
            cfg.polarizers->theta.begin() + static_cast<std::ptrdiff_t>(n)};
}

} // namespace

DetectorSetup setup_for_order(const McConfig& cfg, int order)
{
    if (order < 2 || order > 4) {
        throw ConfigError("correlation order must be 2, 3 or 4");
    }
    const auto n = static_cast<std::size_t>(order);
    DetectorSetup s;
    if (cfg.extended()) {
        if (cfg.geometry->detector_positions.size() < n) {
            throw ConfigError("geometry has fewer detectors than the requested order");
        }
        s.use_positions = true;
        s.x.assign(cfg.geometry->detector_positions.begin(),
                   cfg.geometry->detector_positions.begin() + order);
    } else if (cfg.phases.size() > 0) {
        s.phi = base_phases(cfg, n);
    } else if (cfg.geometry) {
        const PhaseConfig p = detector_phases(*cfg.geometry);
        if (p.size() < n) {
            throw ConfigError("geometry has fewer detectors than the requested order");
        }
        s.phi.assign(p.phi.begin(), p.phi.begin() + order);
    } else {
        throw ConfigError("neither detector phases nor a geometry were given");
    }
    s.theta = analyzer_angles(cfg, n);
    return s;
}

std::vector<DetectorSetup> setups_for_scan(const McConfig& cfg, ScanMode mode,
                                           std::span<const double> grid)
{
    if (grid.empty()) {
        throw ConfigError("scan grid must not be empty");
    }
    const bool positional = mode == ScanMode::thermal_extended3;
    if (positional && !cfg.geometry) {
        throw ConfigError("thermal-extended3 scans need a geometry");
    }
    if (!positional && cfg.extended()) {
        throw ConfigError(std::string("scan mode ") + std::string(analytic::to_string(mode)) +
                          " is defined for point sources; use thermal-extended3");
    }

    const auto order = static_cast<std::size_t>(analytic::scan_order(mode));
    std::vector<DetectorSetup> setups;
    setups.reserve(grid.size());
    for (double t : grid) {
        DetectorSetup s;
        s.theta = analyzer_angles(cfg, order);
        switch (mode) {
        case ScanMode::sync3:
            s.phi = base_phases(cfg, order);
            s.phi[0] += t;
            s.phi[2] -= t;
            break;
        case ScanMode::single3:
            s.phi = base_phases(cfg, order);
            s.phi[0] += pi / 2.0;
            s.phi[2] -= t;
            break;
        case ScanMode::sync4:
            // Points (x, 0, -x, -2x) of a fringe pattern: (phi12, phi13, phi14) = (t, 2t, 3t).
            s.phi = base_phases(cfg, order);
            s.phi[0] += t;
            s.phi[2] -= t;
            s.phi[3] -= 2.0 * t;
            break;
        case ScanMode::pol3:
            s.phi = base_phases(cfg, order);
            s.theta = {0.0, t, -t};
            break;
        case ScanMode::thermal_extended3:
            s.use_positions = true;
            s.x = {t, 0.0, -t};
            break;
        }
        setups.push_back(std::move(s));
    }
    return setups;
}

} // namespace detail

namespace {

using detail::DetectorSetup;

/// Complex weights such that I_n = |sum_m a_m wA[n][m] + sum_m b_m wB[n][m]|^2.
struct DetectorWeights {
    std::size_t detectors = 0;
    std::size_t n_a = 1;
    std::size_t n_b = 1;
    std::vector<Complex> wA; ///< detectors x n_a
    std::vector<Complex> wB; ///< detectors x n_b
};

Complex analyzer_factor(const std::optional<JonesVector>& pol, const std::vector<double>& theta,
                        std::size_t n)
{
    if (theta.empty()) {
        return {1.0, 0.0};
    }
    if (!pol) {
        throw UnpolarizedInput("analyzers present but a source has no polarization state");
    }
    const JonesVector e = jones::linear(theta[n]);
    return (*pol)[0] * std::conj(e[0]) + (*pol)[1] * std::conj(e[1]);
}

std::vector<double> offsets_for(const McConfig& cfg, const SourceSpec& s)
{
    if (detail::uses_emitter_grid(cfg, s)) {
        return emitter_positions(s.extent_a, cfg.emitters_per_source);
    }
    return {0.0};
}

DetectorWeights make_weights(const McConfig& cfg, const DetectorSetup& setup)
{
    DetectorWeights w;
    w.detectors = setup.detectors();
    const std::vector<double> xiA = offsets_for(cfg, cfg.source_A);
    const std::vector<double> xiB = offsets_for(cfg, cfg.source_B);
    w.n_a = xiA.size();
    w.n_b = xiB.size();
    w.wA.resize(w.detectors * w.n_a);
    w.wB.resize(w.detectors * w.n_b);
    for (std::size_t n = 0; n < w.detectors; ++n) {
        const Complex ta = analyzer_factor(cfg.source_A.polarization, setup.theta, n);
        const Complex tb = analyzer_factor(cfg.source_B.polarization, setup.theta, n);
        if (setup.use_positions) {
            const double k = cfg.geometry->phase_per_mm2();
            const double half = cfg.geometry->separation_b / 2.0;
            for (std::size_t m = 0; m < w.n_a; ++m) {
                w.wA[n * w.n_a + m] = ta * std::polar(1.0, k * (half + xiA[m]) * setup.x[n]);
            }
            for (std::size_t m = 0; m < w.n_b; ++m) {
                w.wB[n * w.n_b + m] = tb * std::polar(1.0, k * (-half + xiB[m]) * setup.x[n]);
            }
        } else {
            w.wA[n] = ta * std::polar(1.0, setup.phi[n]);
            w.wB[n] = tb;
        }
    }
    return w;
}

/// Per-setup accumulators: product, product^2, and per-detector I, I^2.
struct MomentPartial {
    std::size_t detectors = 0;
    std::vector<CompensatedSum> sums; ///< setups x (2 + 2*detectors)

    MomentPartial(std::size_t n_setups, std::size_t n_det)
        : detectors(n_det), sums(n_setups * (2 + 2 * n_det))
    {
    }

    std::size_t stride() const { return 2 + 2 * detectors; }

    void merge(const MomentPartial& other)
    {
        for (std::size_t i = 0; i < sums.size(); ++i) {
            sums[i].merge(other.sums[i]);
        }
    }
};

struct ShotBuffers {
    std::vector<Complex> a;
    std::vector<Complex> b;
};

void draw_amplitudes(const McConfig& cfg, std::uint64_t index, ShotBuffers& buf)
{
    Complex amp;
    double phase = 0.0;
    auto fill = [&](const SourceSpec& s, std::uint32_t stream, std::vector<Complex>& out) {
        detail::draw_source(cfg, s, index, stream, amp, phase, out);
        if (!detail::uses_emitter_grid(cfg, s)) {
            out.assign(1, amp * std::polar(1.0, phase));
        }
    };
    fill(cfg.source_A, detail::kStreamA, buf.a);
    fill(cfg.source_B, detail::kStreamB, buf.b);
}

MomentPartial accumulate_moments(const McConfig& cfg, const std::vector<DetectorSetup>& setups,
                                 std::size_t detectors, Execution exec)
{
    std::vector<DetectorWeights> weights;
    weights.reserve(setups.size());
    for (const auto& s : setups) {
        weights.push_back(make_weights(cfg, s));
    }

    auto make = [&] { return MomentPartial(setups.size(), detectors); };
    auto fill = [&](MomentPartial& part, std::uint64_t begin, std::uint64_t end) {
        ShotBuffers buf;
        const std::size_t stride = part.stride();
        for (std::uint64_t shot = begin; shot < end; ++shot) {
            draw_amplitudes(cfg, shot, buf);
            for (std::size_t g = 0; g < weights.size(); ++g) {
                const DetectorWeights& w = weights[g];
                CompensatedSum* acc = &part.sums[g * stride];
                double product = 1.0;
                for (std::size_t n = 0; n < detectors; ++n) {
                    Complex field{0.0, 0.0};
                    const Complex* wa = &w.wA[n * w.n_a];
                    const Complex* wb = &w.wB[n * w.n_b];
                    for (std::size_t m = 0; m < w.n_a; ++m) {
                        field += buf.a[m] * wa[m];
                    }
                    for (std::size_t m = 0; m < w.n_b; ++m) {
                        field += buf.b[m] * wb[m];
                    }
                    const double intensity = std::norm(field);
                    product *= intensity;
                    acc[2 + 2 * n].add(intensity);
                    acc[3 + 2 * n].add(intensity * intensity);
                }
                acc[0].add(product);
                acc[1].add(product * product);
            }
        }
    };
    return block_reduce(cfg.n_shots, detail::kShotsPerBlock, exec, make, fill);
}

CorrelationEstimate finish_estimate(const CompensatedSum* acc, std::size_t detectors,
                                    std::uint64_t n_shots)
{
    const double n = static_cast<double>(n_shots);
    CorrelationEstimate e;
    e.n_shots = n_shots;
    e.order = static_cast<int>(detectors);
    double normalizer = 1.0;
    for (std::size_t d = 0; d < detectors; ++d) {
        const double sum = acc[2 + 2 * d].value();
        const double mean = sum / n;
        e.mean_intensity.push_back(mean);
        e.mean_intensity_err.push_back(
            detail::standard_error(sum, acc[3 + 2 * d].value(), n_shots));
        normalizer *= mean;
    }
    if (!(normalizer > 0.0)) {
        throw NormalizationError("mean intensity at a detector is zero; g cannot be normalized");
    }
    e.value = acc[0].value() / n / normalizer;
    e.std_error = detail::standard_error(acc[0].value(), acc[1].value(), n_shots) / normalizer;
    return e;
}

} // namespace

FieldShot sample_shot(const McConfig& cfg, std::uint64_t shot_index)
{
    FieldShot shot;
    shot.pol_A = cfg.source_A.polarization;
    shot.pol_B = cfg.source_B.polarization;
    const bool extended = cfg.extended();
    auto fill = [&](const SourceSpec& s, std::uint32_t stream, Complex& amp, double& phase,
                    std::vector<Emitter>& emitters) {
        std::vector<Complex> grid;
        detail::draw_source(cfg, s, shot_index, stream, amp, phase, grid);
        if (!extended) {
            return;
        }
        if (detail::uses_emitter_grid(cfg, s)) {
            const std::vector<double> xi = emitter_positions(s.extent_a, cfg.emitters_per_source);
            emitters.reserve(grid.size());
            for (std::size_t m = 0; m < grid.size(); ++m) {
                emitters.push_back({xi[m], grid[m]});
            }
        } else {
            // Point-like partner of an extended source: one emitter at the centre,
            // the random phase stays in phase_A/phase_B.
            emitters.push_back({0.0, amp});
        }
    };
    fill(cfg.source_A, detail::kStreamA, shot.amp_A, shot.phase_A, shot.emitters_A);
    fill(cfg.source_B, detail::kStreamB, shot.amp_B, shot.phase_B, shot.emitters_B);
    return shot;
}

CorrelationEstimate estimate_g(const McConfig& cfg, int order, Execution exec)
{
    cfg.validate();
    const std::vector<DetectorSetup> setups{detail::setup_for_order(cfg, order)};
    const MomentPartial total =
        accumulate_moments(cfg, setups, static_cast<std::size_t>(order), exec);
    return finish_estimate(total.sums.data(), static_cast<std::size_t>(order), cfg.n_shots);
}

McScan estimate_scan(const McConfig& cfg, ScanMode mode, std::span<const double> grid,
                     Execution exec)
{
    cfg.validate();
    const std::vector<DetectorSetup> setups = detail::setups_for_scan(cfg, mode, grid);
    const auto detectors = static_cast<std::size_t>(analytic::scan_order(mode));
    const MomentPartial total = accumulate_moments(cfg, setups, detectors, exec);

    McScan scan;
    scan.curve.mode = mode;
    scan.curve.order = static_cast<int>(detectors);
    for (std::size_t g = 0; g < setups.size(); ++g) {
        CorrelationEstimate e =
            finish_estimate(&total.sums[g * total.stride()], detectors, cfg.n_shots);
        scan.curve.points.push_back({grid[g], e.value});
        scan.estimates.push_back(std::move(e));
    }
    return scan;
}

ScanVisibility scan_visibility(const McScan& scan)
{
    if (scan.estimates.empty()) {
        throw UndefinedVisibility("empty scan");
    }
    auto by_value = [](const CorrelationEstimate& a, const CorrelationEstimate& b) {
        return a.value < b.value;
    };
    const auto [lo, hi] =
        std::minmax_element(scan.estimates.begin(), scan.estimates.end(), by_value);
    const double sum = hi->value + lo->value;
    if (sum == 0.0) {
        throw UndefinedVisibility("visibility undefined: max + min == 0");
    }
    ScanVisibility v;
    v.value = (hi->value - lo->value) / sum;
    // dV/dmax = 2 min / sum^2, dV/dmin = -2 max / sum^2
    v.std_error = 2.0 *
                  std::hypot(lo->value * hi->std_error, hi->value * lo->std_error) / (sum * sum);
    return v;
}

namespace {

/// Per pair: I_i I_j, (I_i I_j)^2, I_i, I_j, Re and Im of E_i E_j*.
struct CoherencePartial {
    std::vector<CompensatedSum> sums;

    explicit CoherencePartial(std::size_t pairs) : sums(pairs * 6) {}

    void merge(const CoherencePartial& other)
    {
        for (std::size_t i = 0; i < sums.size(); ++i) {
            sums[i].merge(other.sums[i]);
        }
    }
};

void require_extended_source_a(const McConfig& cfg)
{
    if (!detail::uses_emitter_grid(cfg, cfg.source_A)) {
        throw ConfigError("coherence estimation needs an extended thermal source A");
    }
}

std::vector<CoherenceEstimate> finish_coherence(std::span<const SeparationPair> pairs,
                                                const CompensatedSum* sums, std::uint64_t n_shots)
{
    const double n = static_cast<double>(n_shots);
    std::vector<CoherenceEstimate> out;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const CompensatedSum* s = sums + 6 * p;
        const double mi = s[2].value() / n;
        const double mj = s[3].value() / n;
        if (!(mi > 0.0) || !(mj > 0.0)) {
            throw NormalizationError("zero mean intensity in coherence estimate");
        }
        CoherenceEstimate e;
        e.separation = pairs[p].x_i - pairs[p].x_j;
        e.g2 = s[0].value() / n / (mi * mj);
        e.g2_err = detail::standard_error(s[0].value(), s[1].value(), n_shots) / (mi * mj);
        e.gamma = std::sqrt(std::max(0.0, e.g2 - 1.0));
        e.gamma_field = std::hypot(s[4].value() / n, s[5].value() / n) / std::sqrt(mi * mj);
        e.model_violation = e.g2 < 1.0 - 3.0 * e.g2_err;
        out.push_back(e);
    }
    return out;
}

} // namespace

std::vector<CoherenceEstimate> estimate_coherence(const McConfig& cfg,
                                                  std::span<const SeparationPair> pairs,
                                                  Execution exec)
{
    cfg.validate();
    require_extended_source_a(cfg);
    const std::vector<double> xi =
        emitter_positions(cfg.source_A.extent_a, cfg.emitters_per_source);
    const std::size_t n_emit = xi.size();
    const double k = cfg.geometry->phase_per_mm2();
    const double half = cfg.geometry->separation_b / 2.0;

    // Weights for the 2 * pairs detector positions.
    std::vector<Complex> w(pairs.size() * 2 * n_emit);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        for (std::size_t m = 0; m < n_emit; ++m) {
            w[(2 * p) * n_emit + m] = std::polar(1.0, k * (half + xi[m]) * pairs[p].x_i);
            w[(2 * p + 1) * n_emit + m] = std::polar(1.0, k * (half + xi[m]) * pairs[p].x_j);
        }
    }

    auto make = [&] { return CoherencePartial(pairs.size()); };
    auto fill = [&](CoherencePartial& part, std::uint64_t begin, std::uint64_t end) {
        std::vector<Complex> amps;
        Complex amp;
        double phase = 0.0;
        for (std::uint64_t shot = begin; shot < end; ++shot) {
            detail::draw_source(cfg, cfg.source_A, shot, detail::kStreamA, amp, phase, amps);
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                Complex ei{0.0, 0.0};
                Complex ej{0.0, 0.0};
                const Complex* wi = &w[(2 * p) * n_emit];
                const Complex* wj = &w[(2 * p + 1) * n_emit];
                for (std::size_t m = 0; m < n_emit; ++m) {
                    ei += amps[m] * wi[m];
                    ej += amps[m] * wj[m];
                }
                const double ii = std::norm(ei);
                const double ij = std::norm(ej);
                const Complex cross = ei * std::conj(ej);
                CompensatedSum* s = &part.sums[6 * p];
                s[0].add(ii * ij);
                s[1].add(ii * ij * ii * ij);
                s[2].add(ii);
                s[3].add(ij);
                s[4].add(cross.real());
                s[5].add(cross.imag());
            }
        }
    };
    const CoherencePartial total =
        block_reduce(cfg.n_shots, detail::kShotsPerBlock, exec, make, fill);
    return finish_coherence(pairs, total.sums.data(), cfg.n_shots);
}

std::vector<double> emitter_positions(double extent_a, int n)
{
    if (n < 1) {
        throw ConfigError("emitter count must be at least 1");
    }
    if (n == 1 || extent_a == 0.0) {
        return std::vector<double>(static_cast<std::size_t>(n), 0.0);
    }
    std::vector<double> xi(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        xi[static_cast<std::size_t>(m)] = -extent_a / 2.0 + extent_a * m / (n - 1);
    }
    return xi;
}

double emitter_grid_coherence(double extent_a, int n, const Geometry& geometry, double dx)
{
    const double k = geometry.phase_per_mm2();
    Complex sum{0.0, 0.0};
    for (double xi : emitter_positions(extent_a, n)) {
        sum += std::polar(1.0, k * xi * dx);
    }
    return std::abs(sum) / n;
}

CoherenceFit fit_coherence_length(std::span<const double> separations,
                                  std::span<const double> gamma, double rho_min, double rho_max)
{
    if (separations.size() != gamma.size() || separations.empty()) {
        throw DomainError("fit needs equally many separations and coherence values");
    }
    if (!(rho_min > 0.0) || !(rho_max > rho_min)) {
        throw DomainError("fit range must satisfy 0 < rho_min < rho_max");
    }
    auto sse = [&](double rho) {
        const analytic::CoherenceParams c{rho};
        double s = 0.0;
        for (std::size_t i = 0; i < gamma.size(); ++i) {
            const double r = gamma[i] - analytic::g1_sinc(separations[i], c);
            s += r * r;
        }
        return s;
    };

    // Coarse log-spaced scan to land in the right basin, then Brent.
    constexpr int kCoarse = 400;
    const double ratio = std::log(rho_max / rho_min);
    int best = 0;
    double best_sse = sse(rho_min);
    for (int i = 1; i <= kCoarse; ++i) {
        const double v = sse(rho_min * std::exp(ratio * i / kCoarse));
        if (v < best_sse) {
            best_sse = v;
            best = i;
        }
    }
    const double lo = rho_min * std::exp(ratio * std::max(best - 1, 0) / kCoarse);
    const double hi = rho_min * std::exp(ratio * std::min(best + 1, kCoarse) / kCoarse);
    const auto [rho, value] = boost::math::tools::brent_find_minima(sse, lo, hi, 50);

    return {rho, std::sqrt(value / static_cast<double>(gamma.size()))};
}

std::vector<double> calibration_separations(const McConfig& cfg, std::size_t n)
{
    cfg.validate();
    if (!detail::uses_emitter_grid(cfg, cfg.source_A)) {
        throw ConfigError("coherence calibration needs an extended thermal source A");
    }
    const Geometry& g = *cfg.geometry;
    const double span = 0.75 * g.wavelength_nm * 1e-6 * g.distance_l / cfg.source_A.extent_a;
    if (n < 2) {
        throw DomainError("calibration needs at least two separations");
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = span * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

CoherenceCalibration calibrate_coherence(const McConfig& cfg, std::span<const double> separations,
                                         Execution exec)
{
    std::vector<SeparationPair> pairs;
    for (double dx : separations) {
        pairs.push_back({dx, 0.0});
    }
    CoherenceCalibration cal;
    cal.separations.assign(separations.begin(), separations.end());
    cal.estimates = estimate_coherence(cfg, pairs, exec);
    std::vector<double> gamma;
    for (const auto& e : cal.estimates) {
        gamma.push_back(e.gamma);
    }
    const Geometry& g = *cfg.geometry;
    const double rho0 = 2.0 * g.wavelength_nm * 1e-6 * g.distance_l / cfg.source_A.extent_a;
    cal.fit = fit_coherence_length(separations, gamma, rho0 / 8.0, rho0 * 8.0);
    return cal;
}

} // namespace hbt::mc
