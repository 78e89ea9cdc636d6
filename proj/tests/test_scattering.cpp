// SPDX-License-Identifier: Apache-2.0
//
// thz-gbsm: space-time-frequency non-stationary channel simulator for
// terahertz ultra-massive MIMO systems
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "thzgbsm/constants.hpp"
#include "thzgbsm/rng.hpp"
#include "thzgbsm/scattering.hpp"

using namespace thzgbsm;
using Catch::Approx;

namespace {
const SurfaceParams kReferenceSurface{0.13 * mm, 2.3 * mm, 23.0 * mm, 23.0 * mm};
double wavenumber_at(double freq) { return two_pi * freq / speed_of_light; }
} // namespace

TEST_CASE("smooth-surface limit keeps only the flat-plate term", "[scattering]")
{
    SurfaceParams smooth = kReferenceSurface;
    smooth.height_std = 0.0;
    ScatterGeometry geom{0.4, 0.7, 0.3};
    const double k = wavenumber_at(300e9);

    const double vx = k * (std::sin(0.4) - std::sin(0.7) * std::cos(0.3));
    const double vy = k * (-std::sin(0.7) * std::sin(0.3));
    auto sinc = [](double u) { return u == 0.0 ? 1.0 : std::sin(u) / u; };
    const double rho0 = sinc(vx * smooth.extent_x) * sinc(vy * smooth.extent_y);

    REQUIRE(scattering_coefficient(smooth, geom, k) ==
            Approx(rho0 * rho0).epsilon(1e-12));
}

TEST_CASE("specular geometry keeps unit flat-plate factor", "[scattering]")
{
    ScatterGeometry geom{0.5, 0.5, 0.0};
    const double k = wavenumber_at(300e9);
    const double g = k * k * kReferenceSurface.height_std * kReferenceSurface.height_std *
                     4.0 * std::cos(0.5) * std::cos(0.5);
    const double value = scattering_coefficient(kReferenceSurface, geom, k);
    // value = exp(-g) * (1 + series at zero transverse wavenumber)
    REQUIRE(value > std::exp(-g));
    // independent series evaluation at v_xy = 0 (plain double arithmetic; g is small here)
    double series = 0.0, factorial = 1.0;
    for (int m = 1; m <= 60; ++m) {
        factorial *= m;
        series += std::pow(g, m) / (factorial * m);
    }
    const double area = kReferenceSurface.extent_x * kReferenceSurface.extent_y;
    const double lc = kReferenceSurface.corr_length;
    const double expected = std::exp(-g) * (1.0 + pi * lc * lc / area * series);
    REQUIRE(value == Approx(expected).epsilon(1e-10));
}

TEST_CASE("coefficient symmetric in the exit-plane angle", "[scattering][property]")
{
    const double k = wavenumber_at(325e9);
    for (double a = 0.1; a < 3.0; a += 0.37) {
        ScatterGeometry plus{0.3, 0.45, a};
        ScatterGeometry minus{0.3, 0.45, -a};
        REQUIRE(scattering_coefficient(kReferenceSurface, plus, k) ==
                Approx(scattering_coefficient(kReferenceSurface, minus, k)).epsilon(1e-12));
    }
}

TEST_CASE("series truncation threshold is converged", "[scattering][property]")
{
    const double k300 = wavenumber_at(300e9);
    for (double exit = 0.05; exit < 1.4; exit += 0.2) {
        ScatterGeometry geom{0.35, exit, 0.1};
        const double loose = scattering_coefficient(kReferenceSurface, geom, k300, 1e-12);
        const double tight = scattering_coefficient(kReferenceSurface, geom, k300, 1e-14);
        REQUIRE(loose == Approx(tight).epsilon(1e-9));
    }
}

TEST_CASE("rough plaster at grazing-free geometry stays finite", "[scattering]")
{
    const SurfaceParams plaster2 = material_by_key("plaster2");
    const double k = wavenumber_at(350e9); // g of order 5e2
    ScatterGeometry geom{0.0, 0.0, 0.0};
    const double v = scattering_coefficient(plaster2, geom, k);
    REQUIRE(std::isfinite(v));
    REQUIRE(v >= 0.0);
}

TEST_CASE("grazing geometry is rejected", "[scattering]")
{
    ScatterGeometry geom{pi / 2, 0.2, 0.0};
    REQUIRE_THROWS_AS(scattering_coefficient(kReferenceSurface, geom, wavenumber_at(300e9)),
                      std::domain_error);
}

TEST_CASE("gaussian fit recovers exact gaussian samples", "[scattering]")
{
    std::vector<std::pair<double, double>> profile;
    const double sigma = 0.25;
    for (double x = -1.2; x <= 1.2; x += 0.01)
        profile.emplace_back(x, std::exp(-0.5 * x * x / (sigma * sigma)));
    REQUIRE(fit_gaussian_mainlobe(profile) == Approx(sigma).epsilon(1e-6));
}

TEST_CASE("gaussian fit needs an interior maximum", "[scattering]")
{
    std::vector<std::pair<double, double>> rising;
    for (double x = 0.0; x <= 1.0; x += 0.1)
        rising.emplace_back(x, x + 0.1);
    REQUIRE_THROWS(fit_gaussian_mainlobe(rising));
}

TEST_CASE("reference main lobe widths and frequency broadening", "[scattering]")
{
    auto fitted = [](double freq) {
        const auto profile = specular_cone_profile(
            kReferenceSurface, reference_specular_angle, wavenumber_at(freq));
        return fit_gaussian_mainlobe(profile);
    };
    const double s300 = fitted(300e9);
    const double s350 = fitted(350e9);
    REQUIRE(s300 == Approx(0.25).margin(0.03));
    REQUIRE(s350 == Approx(0.29).margin(0.03));
    REQUIRE(s350 > s300);
}

TEST_CASE("sigma draw statistics and determinism", "[scattering]")
{
    const double mean = deg2rad(1.4);
    auto rng = make_stream(17, RngPurpose::sigma_draw);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double v = draw_sigma(mean, rng);
        REQUIRE(v > 0.0);
        sum += v;
    }
    REQUIRE(sum / n == Approx(mean).epsilon(0.02));

    auto rng_a = make_stream(3, RngPurpose::sigma_draw, 1);
    auto rng_b = make_stream(3, RngPurpose::sigma_draw, 1);
    REQUIRE(draw_sigma(mean, rng_a) == draw_sigma(mean, rng_b));

    auto rng_c = make_stream(4, RngPurpose::sigma_draw);
    REQUIRE(draw_sigma(1e-9, rng_c) < 1e-7);
}

TEST_CASE("sigma frequency scaling", "[scattering]")
{
    AngleSpreadLaw law{deg2rad(1.0), 300e9, 1.2, deg2rad(1.0)};
    REQUIRE(scale_sigma(law, 300e9) == law.sigma_ref);
    REQUIRE(scale_sigma(law, 350e9) ==
            Approx(deg2rad(1.0) * 1.203195357557136).epsilon(1e-12));

    AngleSpreadLaw flat{deg2rad(2.0), 300e9, 0.0, deg2rad(2.0)};
    REQUIRE(scale_sigma(flat, 920e9) == flat.sigma_ref);
}

TEST_CASE("sigma scaling is multiplicative across anchors", "[scattering][property]")
{
    const double f0 = 300e9, f1 = 317e9, f2 = 349e9, rho = 1.2, s0 = deg2rad(1.7);
    AngleSpreadLaw law0{s0, f0, rho, s0};
    const double via_f1 =
        scale_sigma(AngleSpreadLaw{scale_sigma(law0, f1), f1, rho, 0.0}, f2);
    const double direct = scale_sigma(law0, f2);
    REQUIRE(via_f1 == Approx(direct).epsilon(1e-12));
}

TEST_CASE("material presets include the paper plasters", "[scattering]")
{
    const auto p1 = material_by_key("plaster1");
    const auto p2 = material_by_key("plaster2");
    REQUIRE(p1.height_std == Approx(0.5 * mm));
    REQUIRE(p2.height_std == Approx(1.5 * mm));
    REQUIRE_THROWS_AS(material_by_key("granite"), std::invalid_argument);
}
