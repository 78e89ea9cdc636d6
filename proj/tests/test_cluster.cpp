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
#include <numeric>

#include "thzgbsm/cluster.hpp"
#include "thzgbsm/constants.hpp"
#include "thzgbsm/rng.hpp"

using namespace thzgbsm;
using Catch::Approx;

TEST_CASE("cluster delays are strictly increasing and trail the LoS", "[cluster]")
{
    for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
        auto rng = make_stream(seed, RngPurpose::cluster_delay);
        const auto delays = draw_cluster_delays(2.73 * ns, 8, 3.0, rng);
        REQUIRE(delays.size() == 8);
        double prev = 3.0 / speed_of_light;
        for (double d : delays) {
            REQUIRE(d > prev);
            prev = d;
        }
    }
}

TEST_CASE("cluster delays reproduce with the same stream", "[cluster]")
{
    auto rng_a = make_stream(7, RngPurpose::cluster_delay, 1);
    auto rng_b = make_stream(7, RngPurpose::cluster_delay, 1);
    const auto a = draw_cluster_delays(2.73 * ns, 3, 3.0, rng_a);
    const auto b = draw_cluster_delays(2.73 * ns, 3, 3.0, rng_b);
    REQUIRE(a == b);
}

TEST_CASE("cluster inter-arrival mean converges", "[cluster][property]")
{
    // law of large numbers on the configured exponential means
    const double mean_sb = 2.73 * ns, mean_mb = 2.33 * ns, los = 3.0;
    for (double mean : {mean_sb, mean_mb}) {
        auto rng = make_stream(123, RngPurpose::cluster_delay, mean == mean_sb ? 0 : 1);
        const int n = 100000;
        const auto delays = draw_cluster_delays(mean, n, los, rng);
        // increments
        double sum = delays.front() - los / speed_of_light;
        for (int i = 1; i < n; ++i)
            sum += delays[i] - delays[i - 1];
        const double sample_mean = sum / n;
        REQUIRE(sample_mean == Approx(mean).epsilon(0.02));
    }
}

TEST_CASE("cluster powers normalize to one", "[cluster]")
{
    SECTION("single cluster")
    {
        const auto p = assign_cluster_powers({10.0 * ns}, 9.0 * ns, 3.0 / ns, {2.5});
        REQUIRE(p.size() == 1);
        REQUIRE(p[0] == Approx(1.0).margin(1e-15));
    }
    SECTION("two clusters with equal delay")
    {
        const auto p =
            assign_cluster_powers({10.0 * ns, 10.0 * ns}, 9.0 * ns, 3.0 / ns, {0.0, 0.0});
        REQUIRE(p[0] == Approx(0.5).margin(1e-15));
        REQUIRE(p[1] == Approx(0.5).margin(1e-15));
    }
    SECTION("hand-evaluated decay")
    {
        const double los = 10.0 * ns;
        const auto p =
            assign_cluster_powers({los, los + 1.0 * ns}, los, 3.0 / ns, {0.0, 0.0});
        REQUIRE(p[0] == Approx(0.6661394245831221).epsilon(1e-12));
        REQUIRE(p[1] == Approx(0.3338605754168779).epsilon(1e-12));
    }
    SECTION("empty")
    {
        REQUIRE(assign_cluster_powers({}, 0.0, 3.0 / ns, {}).empty());
    }
}

TEST_CASE("cluster power sum is exactly normalized", "[cluster][property]")
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> extra(0.0, 20.0 * ns), shadow(-6.0, 6.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double los = 10.0 * ns;
        std::vector<double> delays, shadows;
        for (int c = 0; c < 8; ++c) {
            delays.push_back(los + extra(rng));
            shadows.push_back(shadow(rng));
        }
        const auto p = assign_cluster_powers(delays, los, 3.0 / ns, shadows);
        const double total = std::accumulate(p.begin(), p.end(), 0.0);
        REQUIRE(total == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("cluster geometry ratio constraints", "[cluster]")
{
    ClusterParams params;
    SECTION("single bounce ratios sum to one exactly")
    {
        auto rng = make_stream(5, RngPurpose::cluster_geometry);
        for (int i = 0; i < 1000; ++i) {
            const auto g = draw_cluster_geometry(ClusterKind::single_bounce, rng, params);
            REQUIRE(g.r_tx + g.r_rx == 1.0);
            REQUIRE(g.r_tx >= 0.2);
            REQUIRE(g.r_tx <= 0.8);
        }
    }
    SECTION("multi bounce ratios stay inside the triangle")
    {
        auto rng = make_stream(6, RngPurpose::cluster_geometry);
        for (int i = 0; i < 100000; ++i) {
            const auto g = draw_cluster_geometry(ClusterKind::multi_bounce, rng, params);
            REQUIRE(g.r_tx + g.r_rx < 1.0);
            REQUIRE(g.r_tx > 0.05 - 1e-12);
            REQUIRE(g.r_rx > 0.05 - 1e-12);
            REQUIRE(g.r_tx + g.r_rx <= 0.9);
        }
    }
    SECTION("pinned transmit ratio")
    {
        params.fixed_r_tx = 0.4;
        auto rng = make_stream(7, RngPurpose::cluster_geometry);
        const auto g = draw_cluster_geometry(ClusterKind::single_bounce, rng, params);
        REQUIRE(g.r_tx == 0.4);
        REQUIRE(g.r_rx == 0.6);
    }
    SECTION("elevations stay physical")
    {
        auto rng = make_stream(8, RngPurpose::cluster_geometry);
        for (int i = 0; i < 1000; ++i) {
            const auto g = draw_cluster_geometry(ClusterKind::single_bounce, rng, params);
            REQUIRE(std::abs(g.tx_elevation) <= pi / 2);
            REQUIRE(std::abs(g.rx_elevation) <= pi / 2);
            REQUIRE(g.tx_azimuth >= -pi);
            REQUIRE(g.tx_azimuth < pi);
        }
    }
}

TEST_CASE("cluster geometry deterministic per stream", "[cluster]")
{
    ClusterParams params;
    auto rng_a = make_stream(9, RngPurpose::cluster_geometry, 3);
    auto rng_b = make_stream(9, RngPurpose::cluster_geometry, 3);
    const auto a = draw_cluster_geometry(ClusterKind::multi_bounce, rng_a, params);
    const auto b = draw_cluster_geometry(ClusterKind::multi_bounce, rng_b, params);
    REQUIRE(a.tx_elevation == b.tx_elevation);
    REQUIRE(a.rx_azimuth == b.rx_azimuth);
    REQUIRE(a.r_tx == b.r_tx);
    REQUIRE(a.r_rx == b.r_rx);
}

TEST_CASE("vanishing inter-arrival mean pins delays to the LoS", "[cluster]")
{
    auto rng = make_stream(2, RngPurpose::cluster_delay);
    const auto delays = draw_cluster_delays(1e-18, 4, 3.0, rng);
    const double los = 3.0 / speed_of_light;
    for (double d : delays) {
        REQUIRE(d > los);
        REQUIRE(d == Approx(los).margin(1e-12));
    }
}
