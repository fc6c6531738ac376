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

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hbt/core_model.hpp"
#include "hbt/errors.hpp"

using namespace hbt;
constexpr double pi = std::numbers::pi;

TEST_SUITE("core_model")
{
    TEST_CASE("Jones vectors")
    {
        CHECK(jones::squared_norm(jones::right_circular()) == doctest::Approx(1.0));
        CHECK(jones::squared_norm(jones::left_circular()) == doctest::Approx(1.0));
        CHECK(jones::squared_norm(jones::linear(0.7)) == doctest::Approx(1.0));
        const auto r = jones::right_circular();
        const auto l = jones::left_circular();
        const Complex overlap = r[0] * std::conj(l[0]) + r[1] * std::conj(l[1]);
        CHECK(std::abs(overlap) < 1e-15);
    }

    TEST_CASE("statistics names round-trip")
    {
        CHECK(statistics_from_string(to_string(Statistics::thermal)) == Statistics::thermal);
        CHECK(statistics_from_string("coherent") == Statistics::coherent);
        CHECK_THROWS_AS(statistics_from_string("laser"), Error);
    }

    TEST_CASE("source and geometry validation")
    {
        SourceSpec s;
        s.mean_intensity = -1.0;
        CHECK_THROWS_AS(s.validate(), DomainError);
        s.mean_intensity = 1.0;
        s.polarization = JonesVector{Complex{1.0, 0.0}, Complex{1.0, 0.0}};
        CHECK_THROWS_AS(s.validate(), DomainError);

        Geometry g;
        CHECK_NOTHROW(g.validate());
        g.separation_b = 0.0;
        CHECK_THROWS_AS(g.validate(), InvalidGeometry);
        g = Geometry{};
        g.detector_positions = {0, 1, 2, 3, 4};
        CHECK_THROWS_AS(g.validate(), InvalidGeometry);
    }

    TEST_CASE("fringe period and detector phases")
    {
        Geometry g;
        CHECK(g.fringe_period() == doctest::Approx(532e-6 * 1000.0 / 1.3));
        g.detector_positions = {0.0, g.fringe_period() / 4.0, -g.fringe_period()};
        const PhaseConfig p = detector_phases(g);
        REQUIRE(p.size() == 3);
        CHECK(p.phi[0] == 0.0);
        CHECK(p.phi[1] == doctest::Approx(pi / 2.0));
        CHECK(p.phi[2] == doctest::Approx(-2.0 * pi));
        CHECK(p.difference(1, 2) == doctest::Approx(2.5 * pi));
    }

    TEST_CASE("point-source intensity follows the two-beam law")
    {
        FieldShot s;
        s.amp_A = std::polar(1.5, 0.3);
        s.amp_B = std::polar(0.7, -1.1);
        s.phase_A = 0.4;
        s.phase_B = 0.9;
        for (double phi : {0.0, 1.0, 2.5, -3.0}) {
            const double ia = std::norm(s.amp_A), ib = std::norm(s.amp_B);
            const double expect =
                ia + ib + 2.0 * std::real(s.amp_A * std::conj(s.amp_B) *
                                          std::polar(1.0, phi + s.phase_A - s.phase_B));
            CHECK(instantaneous_intensity(s, phi) == doctest::Approx(expect).epsilon(1e-13));
        }
    }

    TEST_CASE("a single emitter at the source centre reproduces the point source")
    {
        Geometry g;
        FieldShot point;
        point.amp_A = {0.8, 0.2};
        point.amp_B = {-0.3, 0.6};
        FieldShot ext = point;
        ext.emitters_A = {{0.0, point.amp_A}};
        ext.emitters_B = {{0.0, point.amp_B}};
        REQUIRE(ext.extended());
        for (double x : {0.0, 0.1, -0.37, 2.0}) {
            CHECK(instantaneous_intensity(ext, g, x) ==
                  doctest::Approx(instantaneous_intensity(point, g, x)).epsilon(1e-12));
        }
    }

    TEST_CASE("emitter field sums plane-wave contributions")
    {
        const std::vector<Emitter> e{{-0.1, {1.0, 0.0}}, {0.1, {0.0, 1.0}}};
        const double k = 2.0, x = 0.5, c = 0.65;
        const Complex expect = std::polar(1.0, k * (c - 0.1) * x) +
                               Complex{0.0, 1.0} * std::polar(1.0, k * (c + 0.1) * x);
        CHECK(std::abs(emitter_field(e, c, k, x) - expect) < 1e-14);
    }

    TEST_CASE("circular sources through a linear analyzer")
    {
        FieldShot s;
        s.amp_A = {1.0, 0.0};
        s.amp_B = {1.0, 0.0};
        CHECK_THROWS_AS(project_polarized(s, 0.0), UnpolarizedInput);
        s.pol_A = jones::right_circular();
        s.pol_B = jones::left_circular();
        for (double theta : {0.0, 0.3, pi / 3.0, -1.2}) {
            const FieldShot p = project_polarized(s, theta);
            // e_R . e_theta = e^{-i theta}/sqrt2 and e_L . e_theta = e^{i theta}/sqrt2 (with
            // conjugated analyzer); the interference term picks up 2 theta.
            CHECK(std::norm(p.amp_A) == doctest::Approx(0.5));
            CHECK(std::norm(p.amp_B) == doctest::Approx(0.5));
            const double rel = std::arg(p.amp_A * std::conj(p.amp_B));
            CHECK(std::remainder(std::abs(rel) - std::abs(2.0 * theta), 2.0 * pi) ==
                  doctest::Approx(0.0).epsilon(1e-12));
            CHECK(instantaneous_intensity(p, 0.0) ==
                  doctest::Approx(1.0 + std::cos(2.0 * theta)).epsilon(1e-12));
        }
    }
}
