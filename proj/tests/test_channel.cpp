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
#include <complex>

#include "thzgbsm/channel.hpp"
#include "thzgbsm/scenario.hpp"

using namespace thzgbsm;
using Catch::Approx;

namespace {

Scenario desk_scenario(int count_sb = 2, int count_mb = 1, double k = 0.0)
{
    ScenarioConfig cfg;
    cfg.tx.elements = 4;
    cfg.rx.elements = 4;
    cfg.clusters.count_sb = count_sb;
    cfg.clusters.count_mb = count_mb;
    cfg.clusters.rician_k = k;
    cfg.rays.per_sb = 16;
    cfg.rays.per_mb = 16;
    cfg.outputs.pairs = {{1, 1}};
    return to_scenario(cfg);
}

} // namespace

TEST_CASE("sub-band plan counts and centers", "[channel]")
{
    const auto plan = SubBandPlan::make(300e9, 350e9, 0.1e9);
    REQUIRE(plan.count == 500);
    REQUIRE(plan.centers.front() == Approx(300.05e9));
    REQUIRE(plan.centers.back() == Approx(349.95e9));
    for (std::size_t i = 1; i < plan.centers.size(); ++i)
        REQUIRE(plan.centers[i] > plan.centers[i - 1]);
    REQUIRE(plan.owner(325.0e9) == 250);
    REQUIRE(plan.owner(300.05e9) == 0);
    REQUIRE_THROWS_AS(plan.owner(299.0e9), std::domain_error);

    const auto ragged = SubBandPlan::make(300e9, 300.25e9, 0.1e9);
    REQUIRE(ragged.count == 3);
}

TEST_CASE("los tap properties", "[channel]")
{
    LosGeometry los{3.0, 0.0, 0.0};
    Motion still{0.0, 0.0, 0.0};

    SECTION("zero K suppresses the tap")
    {
        const CirTap tap = cir_los(los, {}, {}, still, 0.0, 300e9, 0.0);
        REQUIRE(std::abs(tap.amplitude) == 0.0);
    }
    SECTION("integer cycles give a real positive amplitude")
    {
        // distance tuned to an exact 1 ns delay
        LosGeometry tuned{speed_of_light * 1e-9, 0.0, 0.0};
        const CirTap tap = cir_los(tuned, {}, {}, still, 1.0, 5e9, 0.0);
        REQUIRE(tap.amplitude.imag() == Approx(0.0).margin(1e-9));
        REQUIRE(tap.amplitude.real() > 0.0);
    }
    SECTION("magnitude and delay at K = 2")
    {
        const CirTap tap = cir_los(los, {}, {}, still, 2.0, 300e9, 0.0);
        REQUIRE(std::abs(tap.amplitude) == Approx(0.816496580927726).epsilon(1e-12));
        REQUIRE(tap.delay == Approx(10.00692285594456 * ns).epsilon(1e-12));
    }
}

TEST_CASE("cluster taps split the power equally", "[channel]")
{
    const Scenario s = desk_scenario(1, 0);
    Realization real(s);
    const auto& cr = real.clusters().front();
    const RaySet rays = real.rays_at(0, 0);
    const auto taps = cir_cluster_sim(cr, rays, {}, {}, s.motion, 0.0, 300.05e9, 0.0);
    REQUIRE(taps.size() == 16);
    double total = 0.0;
    for (const CirTap& tap : taps)
        total += std::norm(tap.amplitude);
    REQUIRE(total == Approx(cr.info.power).epsilon(1e-12));
}

TEST_CASE("single specular ray lands on the cluster delay", "[channel]")
{
    ScenarioConfig cfg;
    cfg.clusters.count_sb = 1;
    cfg.clusters.count_mb = 0;
    cfg.clusters.rician_k = 0.0;
    cfg.rays.per_sb = 1;
    cfg.motion.speed_mps = 0.0;
    cfg.tx.elements = 1;
    cfg.rx.elements = 1;
    const Scenario s = to_scenario(cfg);
    Realization real(s);
    const auto cir = cir_assemble(real, 1, 1, 0, 0.0);
    REQUIRE(cir.taps.size() == 1);
    REQUIRE(cir.taps[0].delay == Approx(real.clusters()[0].info.delay).epsilon(1e-12));
    REQUIRE(std::abs(cir.taps[0].amplitude) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("negated frequency conjugates the carrier factor", "[channel]")
{
    const Scenario s = desk_scenario(1, 0);
    Realization real(s);
    const auto& cr = real.clusters().front();
    const RaySet rays = real.rays_at(0, 0);
    const auto pos = cir_cluster_sim(cr, rays, {}, {}, s.motion, 0.0, 300.05e9, 0.0);
    const auto neg = cir_cluster_sim(cr, rays, {}, {}, s.motion, 0.0, -300.05e9, 0.0);
    for (std::size_t i = 0; i < pos.size(); ++i) {
        const std::complex<double> phase_static =
            std::polar(1.0, 2.0 * rays.rays[i].phase);
        REQUIRE(std::abs(neg[i].amplitude - std::conj(pos[i].amplitude) * phase_static) <
                1e-12);
    }
}

TEST_CASE("assembled CIR structure and power", "[channel]")
{
    SECTION("no clusters leaves the LoS tap alone")
    {
        const Scenario s = desk_scenario(0, 0, 2.0);
        Realization real(s);
        const auto cir = cir_assemble(real, 1, 1, 0, 0.0);
        REQUIRE(cir.taps.size() == 1);
        REQUIRE(std::abs(cir.taps[0].amplitude) ==
                Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
    }
    SECTION("normalized powers put unit energy in the taps at K = 0")
    {
        const Scenario s = desk_scenario(2, 1, 0.0);
        Realization real(s);
        const auto cir = cir_assemble(real, 2, 3, 5, 1.0);
        double total = 0.0;
        for (const CirTap& tap : cir.taps)
            total += std::norm(tap.amplitude);
        REQUIRE(total == Approx(1.0).margin(1e-12));
    }
    SECTION("identical seeds produce identical tap lists")
    {
        const Scenario s = desk_scenario();
        Realization a(s), b(s);
        const auto cir_a = cir_assemble(a, 1, 1, 3, 0.5);
        const auto cir_b = cir_assemble(b, 1, 1, 3, 0.5);
        REQUIRE(cir_a.taps.size() == cir_b.taps.size());
        for (std::size_t i = 0; i < cir_a.taps.size(); ++i) {
            REQUIRE(cir_a.taps[i].delay == cir_b.taps[i].delay);
            REQUIRE(cir_a.taps[i].amplitude == cir_b.taps[i].amplitude);
        }
    }
    SECTION("tap delays trail the center straight line at the build instant")
    {
        const Scenario s = desk_scenario(3, 2, 1.0);
        Realization real(s);
        const auto cir = cir_assemble(real, 1, 4, 0, 0.0);
        const double los_delay = s.los.distance / speed_of_light;
        // element offsets can undercut the center line by at most their size
        const double slack = (element_offset(s.tx, 1).norm() +
                              element_offset(s.rx, 4).norm()) / speed_of_light;
        for (const CirTap& tap : cir.taps)
            REQUIRE(tap.delay >= los_delay - slack - 1e-12);
        // and the later-time taps stay strictly positive
        const auto moved = cir_assemble(real, 1, 4, 0, 2.0);
        for (const CirTap& tap : moved.taps)
            REQUIRE(tap.delay > 0.0);
    }
}

TEST_CASE("time evolution composes at the tap level", "[channel][property]")
{
    const Scenario s = desk_scenario(1, 0);
    Realization real(s);
    const auto& cr = real.clusters().front();
    const Ray& ray = cr.base_rays.rays[3];
    const double direct =
        evolved_ray_distance(cr, ray.path_length, ray.rel, {}, {}, s.motion, 7.0);
    // evolve the ray state halfway, then the rest of the way
    ClusterPathState st;
    st.total_distance = ray.path_length;
    st.rx_elevation = cr.center.rx_elevation + ray.rel.rx_elevation;
    st.rx_azimuth = cr.center.rx_azimuth + ray.rel.rx_azimuth;
    st.tx_elevation = cr.center.tx_elevation + ray.rel.tx_elevation;
    st.tx_azimuth = cr.center.tx_azimuth + ray.rel.tx_azimuth;
    const ClusterPathState half = evolve_cluster_path(st, s.motion, 3.0);
    const ClusterPathState full = evolve_cluster_path(half, s.motion, 4.0);
    REQUIRE(full.total_distance == Approx(direct).epsilon(1e-12));
}

TEST_CASE("sub-band transfer function", "[channel]")
{
    const auto plan = SubBandPlan::make(300e9, 300.2e9, 0.1e9);

    SECTION("flat response for a zero-delay unit tap")
    {
        SubBandCir cir;
        cir.subband_index = 0;
        cir.center_freq = plan.centers[0];
        cir.taps = {{0.0, {1.0, 0.0}}};
        const auto grid = ctf_grid(plan, 0, 10e6);
        REQUIRE(grid.size() == 10);
        for (const CtfSample& sample : ctf_subband(cir, plan, grid))
            REQUIRE(std::abs(sample.value - std::complex<double>(1.0, 0.0)) < 1e-12);
    }
    SECTION("single delayed tap keeps magnitude and slopes the phase")
    {
        SubBandCir cir;
        cir.subband_index = 0;
        cir.center_freq = plan.centers[0];
        const double tau = 12.0 * ns;
        cir.taps = {{tau, std::polar(0.7, 0.4)}};
        const auto grid = ctf_grid(plan, 0, 10e6);
        const auto ctf = ctf_subband(cir, plan, grid);
        for (std::size_t i = 0; i < ctf.size(); ++i) {
            REQUIRE(std::abs(ctf[i].value) == Approx(0.7).epsilon(1e-12));
            if (i > 0) {
                const double dphi = std::arg(ctf[i].value / ctf[i - 1].value);
                REQUIRE(dphi == Approx(-two_pi * tau * 10e6 +
                                       std::round(tau * 10e6) * two_pi)
                                    .margin(1e-9));
            }
        }
    }
    SECTION("two equal taps null at half the inverse delay split")
    {
        SubBandCir cir;
        cir.subband_index = 0;
        cir.center_freq = plan.centers[0];
        const double split = 25.0 * ns; // null 20 MHz away from a constructive point
        cir.taps = {{0.0, {0.5, 0.0}}, {split, {0.5, 0.0}}};
        const auto peak = ctf_subband(cir, plan, {plan.centers[0]});
        const auto null = ctf_subband(cir, plan, {plan.centers[0] + 1.0 / (2.0 * split)});
        REQUIRE(std::abs(peak[0].value) == Approx(1.0).epsilon(1e-12));
        REQUIRE(std::abs(null[0].value) == Approx(0.0).margin(1e-12));
    }
    SECTION("out-of-band evaluation is rejected")
    {
        SubBandCir cir;
        cir.subband_index = 0;
        cir.center_freq = plan.centers[0];
        cir.taps = {{0.0, {1.0, 0.0}}};
        REQUIRE_THROWS_AS(ctf_subband(cir, plan, {plan.centers[1]}), std::domain_error);
    }
}

TEST_CASE("full band concatenation", "[channel]")
{
    SECTION("single band is the identity")
    {
        std::vector<CtfSample> band = {{300.0e9, {1.0, 0.0}}, {300.05e9, {0.5, 0.5}}};
        const auto full = ctf_fullband({band});
        REQUIRE(full.size() == 2);
        REQUIRE(full[1].value == band[1].value);
    }
    SECTION("step values concatenate in order")
    {
        std::vector<std::vector<CtfSample>> bands;
        for (int i = 0; i < 5; ++i) {
            std::vector<CtfSample> band;
            for (int k = 0; k < 4; ++k)
                band.push_back({300e9 + i * 0.1e9 + k * 0.025e9,
                                {static_cast<double>(i), 0.0}});
            bands.push_back(band);
        }
        const auto full = ctf_fullband(bands);
        REQUIRE(full.size() == 20);
        for (std::size_t i = 1; i < full.size(); ++i)
            REQUIRE(full[i].freq > full[i - 1].freq);
        REQUIRE(full[0].value.real() == 0.0);
        REQUIRE(full[19].value.real() == 4.0);
    }
    SECTION("overlapping supports are rejected")
    {
        std::vector<CtfSample> a = {{300.00e9, {1.0, 0.0}}, {300.08e9, {1.0, 0.0}}};
        std::vector<CtfSample> b = {{300.05e9, {1.0, 0.0}}};
        REQUIRE_THROWS_AS(ctf_fullband({a, b}), std::runtime_error);
    }
}

TEST_CASE("evaluation grids tile the whole band", "[channel][property]")
{
    const auto plan = SubBandPlan::make(300e9, 301e9, 0.1e9);
    std::vector<std::vector<CtfSample>> bands;
    for (int i = 0; i < plan.count; ++i) {
        SubBandCir cir;
        cir.subband_index = i;
        cir.center_freq = plan.centers[static_cast<std::size_t>(i)];
        cir.taps = {{10.0 * ns, {1.0, 0.0}}};
        bands.push_back(ctf_subband(cir, plan, ctf_grid(plan, i, 10e6)));
    }
    const auto full = ctf_fullband(bands);
    REQUIRE(full.size() == static_cast<std::size_t>(plan.count) * 10);
}

TEST_CASE("transfer function is linear in the taps", "[channel][property]")
{
    const auto plan = SubBandPlan::make(300e9, 300.1e9, 0.1e9);
    const Scenario s = desk_scenario(2, 1);
    Realization real(s);
    const auto full = cir_assemble(real, 1, 2, 0, 0.0);
    const auto grid = ctf_grid(plan, 0, 10e6);

    // per-cluster pieces of the same tap list
    std::vector<std::vector<CtfSample>> parts;
    std::size_t offset = 0;
    for (std::size_t c = 0; c < real.clusters().size(); ++c) {
        const std::size_t count = real.rays_at(c, 0).rays.size();
        SubBandCir piece = full;
        piece.taps.assign(full.taps.begin() + offset,
                          full.taps.begin() + offset + count);
        offset += count;
        parts.push_back(ctf_subband(piece, plan, grid));
    }
    REQUIRE(offset == full.taps.size());
    const auto whole = ctf_subband(full, plan, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::complex<double> sum{0.0, 0.0};
        for (const auto& part : parts)
            sum += part[i].value;
        REQUIRE(std::abs(sum - whole[i].value) < 1e-12);
    }
}

TEST_CASE("assembly rejects out-of-range element indices", "[channel]")
{
    const Scenario s = desk_scenario();
    Realization real(s);
    REQUIRE_THROWS_AS(cir_assemble(real, 0, 1, 0, 0.0), std::domain_error);
    REQUIRE_THROWS_AS(cir_assemble(real, 1, 5, 0, 0.0), std::domain_error);
}

TEST_CASE("five hundred sub-bands tile contiguously", "[channel]")
{
    const auto plan = SubBandPlan::make(300e9, 350e9, 0.1e9);
    REQUIRE(plan.count == 500);
    std::vector<std::vector<CtfSample>> bands;
    for (int i = 0; i < plan.count; ++i) {
        SubBandCir cir;
        cir.subband_index = i;
        cir.center_freq = plan.centers[static_cast<std::size_t>(i)];
        cir.taps = {{10.0 * ns, {1.0, 0.0}}};
        bands.push_back(ctf_subband(cir, plan, ctf_grid(plan, i, 10e6)));
    }
    const auto full = ctf_fullband(bands);
    REQUIRE(full.size() == 5000);
    const double spacing = full[1].freq - full[0].freq;
    for (std::size_t i = 1; i < full.size(); ++i)
        REQUIRE(full[i].freq - full[i - 1].freq == Approx(spacing).epsilon(1e-9));
}
