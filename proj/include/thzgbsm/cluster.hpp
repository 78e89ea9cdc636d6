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

#ifndef THZGBSM_CLUSTER_HPP
#define THZGBSM_CLUSTER_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "thzgbsm/constants.hpp"
#include "thzgbsm/rng.hpp"

namespace thzgbsm {

enum class ClusterKind { single_bounce, multi_bounce };

/// Statistical parameters of the cluster generation process.
struct ClusterParams {
    double mean_interarrival_sb = 2.73 * ns; // seconds
    double mean_interarrival_mb = 2.33 * ns; // seconds
    int count_sb = 5;
    int count_mb = 3;
    double decay_db_per_sec = 3.0 / ns;      // temporal decay, dB per second
    double shadow_std_db = 3.0;              // per-cluster power deviation
    double rician_k = 2.0;                   // linear ratio; 0 gives pure NLoS
    double center_elevation_std = deg2rad(10.0);
    std::optional<double> fixed_r_tx;        // pins the SBC transmit-side ratio
};

/// One generated cluster: delay, normalized power, center angles and the
/// transmit/receive distance ratios. `rng_id` keys all per-cluster streams.
struct Cluster {
    ClusterKind kind = ClusterKind::single_bounce;
    int index = 0;
    double delay = 0.0;        // seconds, > los delay
    double power = 0.0;        // linear fraction of total power
    double tx_elevation = 0.0; // radians
    double tx_azimuth = 0.0;
    double rx_elevation = 0.0;
    double rx_azimuth = 0.0;
    double r_tx = 0.5;         // distance ratio, transmit side
    double r_rx = 0.5;         // distance ratio, receive side
    std::uint64_t rng_id = 0;
};

/// Strictly increasing arrival delays: the first cluster trails the LoS delay
/// by one exponential inter-arrival draw, each following cluster by another.
inline std::vector<double> draw_cluster_delays(double mean_interarrival, int count,
                                               double los_distance, std::mt19937_64& rng)
{
    if (count < 0)
        throw std::invalid_argument("draw_cluster_delays: count must be >= 0");
    std::vector<double> delays;
    delays.reserve(static_cast<std::size_t>(count));
    std::exponential_distribution<double> gap(1.0 / mean_interarrival);
    double tau = los_distance / speed_of_light;
    for (int c = 0; c < count; ++c) {
        double dt = gap(rng);
        while (dt <= 0.0) // keep the sequence strictly increasing
            dt = gap(rng);
        tau += dt;
        delays.push_back(tau);
    }
    return delays;
}

/// Cluster powers from the delay decay law plus per-cluster shadowing, in dB,
/// converted to linear and normalized to a unit sum. Call with the delays of
/// every cluster (both kinds) so the normalization spans the whole channel.
inline std::vector<double> assign_cluster_powers(const std::vector<double>& delays,
                                                 double los_delay,
                                                 double decay_db_per_sec,
                                                 const std::vector<double>& shadow_db)
{
    if (delays.empty())
        return {};
    if (shadow_db.size() != delays.size())
        throw std::invalid_argument("assign_cluster_powers: shadow draw count mismatch");
    std::vector<double> powers(delays.size());
    double total = 0.0;
    for (std::size_t i = 0; i < delays.size(); ++i) {
        if (delays[i] < los_delay - 1e-15)
            throw std::invalid_argument("assign_cluster_powers: delay precedes the LoS path");
        const double db = -decay_db_per_sec * (delays[i] - los_delay) + shadow_db[i];
        powers[i] = std::pow(10.0, db / 10.0);
        total += powers[i];
    }
    for (double& p : powers)
        p /= total;
    return powers;
}

/// Center angles and distance ratios for one cluster. Azimuths are uniform,
/// elevations Gaussian (redrawn until inside [-pi/2, pi/2]). Single-bounce
/// ratios satisfy r_tx + r_rx = 1; multi-bounce pairs are uniform on the
/// triangle r_tx, r_rx > 0.05, r_tx + r_rx <= 0.9.
struct ClusterGeometryDraw {
    double tx_elevation, tx_azimuth;
    double rx_elevation, rx_azimuth;
    double r_tx, r_rx;
};

inline ClusterGeometryDraw draw_cluster_geometry(ClusterKind kind, std::mt19937_64& rng,
                                                 const ClusterParams& params)
{
    std::uniform_real_distribution<double> uniform_az(-pi, pi);
    std::normal_distribution<double> gauss_el(0.0, params.center_elevation_std);

    auto draw_elevation = [&]() {
        double e = gauss_el(rng);
        while (std::abs(e) > pi / 2.0)
            e = gauss_el(rng);
        return e;
    };

    ClusterGeometryDraw out{};
    out.tx_elevation = draw_elevation();
    out.tx_azimuth = uniform_az(rng);
    out.rx_elevation = draw_elevation();
    out.rx_azimuth = uniform_az(rng);

    if (kind == ClusterKind::single_bounce) {
        if (params.fixed_r_tx) {
            out.r_tx = *params.fixed_r_tx;
        } else {
            std::uniform_real_distribution<double> ratio(0.2, 0.8);
            out.r_tx = ratio(rng);
        }
        out.r_rx = 1.0 - out.r_tx;
    } else {
        std::uniform_real_distribution<double> ratio(0.05, 0.85);
        double rt = ratio(rng), rr = ratio(rng);
        while (rt + rr > 0.9) {
            rt = ratio(rng);
            rr = ratio(rng);
        }
        out.r_tx = rt;
        out.r_rx = rr;
    }
    return out;
}

} // namespace thzgbsm

#endif
