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

#ifndef THZGBSM_GEOMETRY_HPP
#define THZGBSM_GEOMETRY_HPP

#include <cmath>
#include <stdexcept>

#include "thzgbsm/vec3.hpp"

namespace thzgbsm {

/// Uniform linear array. Elements are indexed 1..element_count and lie on the
/// axis given by (elevation, azimuth), centered on the array reference point.
struct ArrayGeometry {
    int element_count = 1;     // N
    double spacing = 0.0;      // meters between consecutive elements
    double elevation = 0.0;    // array axis elevation, radians
    double azimuth = 0.0;      // array axis azimuth, radians
};

/// Constant receiver velocity in spherical form.
struct Motion {
    double speed = 0.0;        // m/s, >= 0
    double elevation = 0.0;    // radians
    double azimuth = 0.0;      // radians

    Vec3 velocity() const { return speed * unit_direction(elevation, azimuth); }
};

/// Line-of-sight link between the array centers.
struct LosGeometry {
    double distance = 0.0;     // meters, > 0
    double elevation = 0.0;    // radians
    double azimuth = 0.0;      // radians
};

/// State of one propagation path (cluster center or individual ray): total
/// unfolded path length plus departure/arrival angles. The arrival side is
/// the mirror-image direction used for straight-line motion updates.
struct ClusterPathState {
    double total_distance = 0.0; // meters
    double rx_elevation = 0.0;   // radians
    double rx_azimuth = 0.0;     // radians
    double tx_elevation = 0.0;   // radians
    double tx_azimuth = 0.0;     // radians
};

/// Intra-cluster ray angle offsets about the cluster center, radians.
struct RelativeAngles {
    double tx_elevation = 0.0;
    double tx_azimuth = 0.0;
    double rx_elevation = 0.0;
    double rx_azimuth = 0.0;
};

/// Position of element `index` (1-based) relative to the array center.
/// Offsets of index and N+1-index are negatives of each other.
inline Vec3 element_offset(const ArrayGeometry& array, int index)
{
    if (index < 1 || index > array.element_count)
        throw std::domain_error("element_offset: index out of range");
    const double scale =
        0.5 * static_cast<double>(array.element_count - 2 * index + 1) * array.spacing;
    return scale * unit_direction(array.elevation, array.azimuth);
}

/// Vector from transmit element to receive element at time t; the caller
/// takes the norm for the element-pair distance.
inline Vec3 los_vector(const LosGeometry& los, const Vec3& tx_offset,
                       const Vec3& rx_offset, const Motion& motion, double t)
{
    return los.distance * unit_direction(los.elevation, los.azimuth) + rx_offset -
           tx_offset + motion.velocity() * t;
}

inline double los_distance(const LosGeometry& los, const Vec3& tx_offset,
                           const Vec3& rx_offset, const Motion& motion, double t)
{
    return los_vector(los, tx_offset, rx_offset, motion, t).norm();
}

/// Mirror-point update: the unfolded path vector points along the arrival
/// direction, so receiver motion is plain vector addition. Departure angles
/// stay fixed (the transmitter does not move).
inline ClusterPathState evolve_cluster_path(const ClusterPathState& state,
                                            const Motion& motion, double dt)
{
    if (dt == 0.0 || motion.speed == 0.0)
        return state;
    const Vec3 path = state.total_distance *
                          unit_direction(state.rx_elevation, state.rx_azimuth) +
                      motion.velocity() * dt;
    const auto [el, az] = spherical_angles(path);
    ClusterPathState out = state;
    out.total_distance = path.norm();
    out.rx_elevation = el;
    out.rx_azimuth = az;
    return out;
}

/// Apply antenna element offsets to a center path: the receive offset is
/// folded like a motion step along the arrival direction, the transmit
/// offset is folded the same way along the departure direction.
inline ClusterPathState per_antenna_state(const ClusterPathState& center,
                                          const Vec3& tx_offset,
                                          const Vec3& rx_offset)
{
    ClusterPathState out = center;
    if (rx_offset.x != 0.0 || rx_offset.y != 0.0 || rx_offset.z != 0.0) {
        const Vec3 path = out.total_distance *
                              unit_direction(out.rx_elevation, out.rx_azimuth) +
                          rx_offset;
        const auto [el, az] = spherical_angles(path);
        out.total_distance = path.norm();
        out.rx_elevation = el;
        out.rx_azimuth = az;
    }
    if (tx_offset.x != 0.0 || tx_offset.y != 0.0 || tx_offset.z != 0.0) {
        const Vec3 path = out.total_distance *
                              unit_direction(out.tx_elevation, out.tx_azimuth) +
                          tx_offset;
        const auto [el, az] = spherical_angles(path);
        out.total_distance = path.norm();
        out.tx_elevation = el;
        out.tx_azimuth = az;
    }
    return out;
}

inline double per_antenna_cluster_distance(const ClusterPathState& center,
                                           const Vec3& tx_offset,
                                           const Vec3& rx_offset)
{
    return per_antenna_state(center, tx_offset, rx_offset).total_distance;
}

/// Path length of a ray with angle offsets `rel` about the cluster center.
/// The vertical and horizontal components are stretched by 1/cos of the
/// respective offsets on the transmit (weight r_tx) and receive (weight r_rx)
/// legs. Both components are projected with the receive-side center
/// elevation; the departure-side center elevation deliberately does not
/// enter the split.
/// Equals center.total_distance when all offsets are zero and r_tx+r_rx == 1.
inline double ray_path_length(const ClusterPathState& center, const RelativeAngles& rel,
                              double r_tx, double r_rx)
{
    constexpr double limit = 1.5707963267948966; // pi/2
    if (std::abs(rel.tx_elevation) >= limit || std::abs(rel.tx_azimuth) >= limit ||
        std::abs(rel.rx_elevation) >= limit || std::abs(rel.rx_azimuth) >= limit)
        throw std::domain_error("ray_path_length: relative angle magnitude must be < pi/2");

    const double d = center.total_distance;
    const double se = std::sin(center.rx_elevation);
    const double ce = std::cos(center.rx_elevation);
    const double vertical = d * se * (r_rx / std::cos(rel.rx_elevation) +
                                      r_tx / std::cos(rel.tx_elevation));
    const double horizontal = d * ce * (r_rx / std::cos(rel.rx_azimuth) +
                                        r_tx / std::cos(rel.tx_azimuth));
    return std::sqrt(vertical * vertical + horizontal * horizontal);
}

} // namespace thzgbsm

#endif
