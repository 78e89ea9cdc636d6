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

#ifndef THZGBSM_RAYS_HPP
#define THZGBSM_RAYS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "thzgbsm/constants.hpp"
#include "thzgbsm/geometry.hpp"

namespace thzgbsm {

enum class RayModel { theoretical_mc, simulation_mea };

/// One intra-cluster ray: angle offsets about the cluster center, a static
/// phase, and the center-to-center path length at the build instant.
struct Ray {
    RelativeAngles rel;
    double phase = 0.0;       // radians, (0, 2pi]
    double path_length = 0.0; // meters, includes the virtual link for MBCs
};

/// Per-cluster, per-sub-band ray collection. `unit_offsets` keeps the angle
/// offsets in units of the per-dimension standard deviation, so sub-band
/// refreshes scale exactly and reproducibly.
struct RaySet {
    std::uint64_t cluster_id = 0;
    int subband_index = 0;
    RayModel model = RayModel::simulation_mea;
    std::vector<Ray> rays;
    std::vector<RelativeAngles> unit_offsets;
};

/// Per-dimension intra-cluster angle standard deviations, radians.
struct AngleSigmas {
    double tx_elevation = 0.0;
    double tx_azimuth = 0.0;
    double rx_elevation = 0.0;
    double rx_azimuth = 0.0;
};

/// Everything needed to turn ray angle offsets into a total path length:
/// the cluster center path, the leg ratios, the multi-bounce virtual link,
/// and an optional rescale of the delay offsets.
struct RayPathContext {
    ClusterPathState center; // center-to-center state at the build instant
    double r_tx = 0.5;
    double r_rx = 0.5;
    bool multi_bounce = false;
    double delay_scale = 1.0; // applied to the path-length excess over specular
};

/// Total ray path length for the given angle offsets. The two bounce legs
/// follow the vertical/horizontal leg geometry; a multi-bounce cluster
/// additionally carries the straight virtual-link segment. The excess over
/// the specular length is scaled by `delay_scale`.
inline double ray_total_length(const RayPathContext& ctx, const RelativeAngles& rel)
{
    double geo = ray_path_length(ctx.center, rel, ctx.r_tx, ctx.r_rx);
    if (ctx.multi_bounce)
        geo += (1.0 - ctx.r_tx - ctx.r_rx) * ctx.center.total_distance;
    return ctx.center.total_distance +
           ctx.delay_scale * (geo - ctx.center.total_distance);
}

namespace detail {

/// Inverse CDF of the standard normal distribution (Acklam's rational
/// approximation with one Halley refinement step; absolute error far below
/// the 1e-9 contract of the MEA discretization).
inline double normal_quantile(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("normal_quantile: p must be in (0, 1)");
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement against the erfc-based CDF
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(two_pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

// geometry guard: ray angles must stay clear of pi/2
inline double clamp_offset(double v)
{
    constexpr double limit = 0.99 * pi / 2.0;
    return std::clamp(v, -limit, limit);
}

} // namespace detail

/// Independent zero-mean Gaussian angle draws with standard deviation
/// `sigma`; values at or beyond 0.99*pi/2 are redrawn.
inline std::vector<double> draw_relative_angles(double sigma, int count,
                                                std::mt19937_64& rng)
{
    if (count < 1)
        throw std::invalid_argument("draw_relative_angles: count must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(count), 0.0);
    if (sigma <= 0.0)
        return out;
    std::normal_distribution<double> gauss(0.0, sigma);
    constexpr double limit = 0.99 * pi / 2.0;
    for (double& v : out) {
        v = gauss(rng);
        while (std::abs(v) >= limit)
            v = gauss(rng);
    }
    return out;
}

/// Equal-area discretization of the zero-mean Gaussian with standard
/// deviation `sigma`: the n mid-probability quantiles F^-1((l-0.5)/n),
/// l = 1..n. Strictly increasing and symmetric about zero.
inline std::vector<double> mea_discretize(double sigma, int n)
{
    if (sigma <= 0.0)
        throw std::domain_error("mea_discretize: sigma must be > 0");
    if (n < 1)
        throw std::domain_error("mea_discretize: n must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int l = 1; l <= n; ++l) {
        if (2 * l - 1 == n) {
            out[static_cast<std::size_t>(l - 1)] = 0.0; // exact median
        } else {
            const double p = (static_cast<double>(l) - 0.5) / static_cast<double>(n);
            out[static_cast<std::size_t>(l - 1)] = sigma * detail::normal_quantile(p);
        }
    }
    return out;
}

namespace detail {

inline void fill_ray_angles_and_lengths(RaySet& set, const AngleSigmas& sigmas,
                                        const RayPathContext& ctx)
{
    set.rays.resize(set.unit_offsets.size());
    for (std::size_t i = 0; i < set.unit_offsets.size(); ++i) {
        const RelativeAngles& z = set.unit_offsets[i];
        Ray& ray = set.rays[i];
        ray.rel.tx_elevation = clamp_offset(z.tx_elevation * sigmas.tx_elevation);
        ray.rel.tx_azimuth = clamp_offset(z.tx_azimuth * sigmas.tx_azimuth);
        ray.rel.rx_elevation = clamp_offset(z.rx_elevation * sigmas.rx_elevation);
        ray.rel.rx_azimuth = clamp_offset(z.rx_azimuth * sigmas.rx_azimuth);
        ray.path_length = ray_total_length(ctx, ray.rel);
    }
}

} // namespace detail

/// Build an MEA-discretized ray set: sqrt(L) equal-area points per angle
/// dimension, tensor-paired into L (azimuth, elevation) combinations per
/// side, transmit and receive sides matched under a seeded random
/// permutation, phases uniform on (0, 2pi].
inline RaySet build_rayset_mea(const AngleSigmas& sigmas, int ray_count,
                               const RayPathContext& ctx, std::mt19937_64& rng,
                               std::uint64_t cluster_id = 0, int subband_index = 0)
{
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(ray_count))));
    if (n < 1 || n * n != ray_count)
        throw std::domain_error("build_rayset_mea: ray count must be a perfect square");

    // unit (sigma = 1) quantiles shared by all four dimensions
    std::vector<double> unit(static_cast<std::size_t>(n));
    for (int l = 1; l <= n; ++l)
        unit[static_cast<std::size_t>(l - 1)] =
            (2 * l - 1 == n) ? 0.0
                             : detail::normal_quantile(
                                   (static_cast<double>(l) - 0.5) / static_cast<double>(n));

    std::vector<int> pairing(static_cast<std::size_t>(ray_count));
    std::iota(pairing.begin(), pairing.end(), 0);
    std::shuffle(pairing.begin(), pairing.end(), rng);

    RaySet set;
    set.cluster_id = cluster_id;
    set.subband_index = subband_index;
    set.model = RayModel::simulation_mea;
    set.unit_offsets.resize(static_cast<std::size_t>(ray_count));
    for (int l = 0; l < ray_count; ++l) {
        const int tx_el = l / n, tx_az = l % n;
        const int rx = pairing[static_cast<std::size_t>(l)];
        const int rx_el = rx / n, rx_az = rx % n;
        RelativeAngles& z = set.unit_offsets[static_cast<std::size_t>(l)];
        z.tx_elevation = unit[static_cast<std::size_t>(tx_el)];
        z.tx_azimuth = unit[static_cast<std::size_t>(tx_az)];
        z.rx_elevation = unit[static_cast<std::size_t>(rx_el)];
        z.rx_azimuth = unit[static_cast<std::size_t>(rx_az)];
    }
    detail::fill_ray_angles_and_lengths(set, sigmas, ctx);

    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (Ray& ray : set.rays)
        ray.phase = (1.0 - uni(rng)) * two_pi; // (0, 2pi]
    return set;
}

/// Build a ray set with independent Gaussian angle offsets (the ensemble
/// sampling used for the infinite-ray model). Phases uniform on (0, 2pi].
inline RaySet build_rayset_mc(const AngleSigmas& sigmas, int ray_count,
                              const RayPathContext& ctx, std::mt19937_64& rng,
                              std::uint64_t cluster_id = 0, int subband_index = 0)
{
    if (ray_count < 1)
        throw std::domain_error("build_rayset_mc: ray count must be >= 1");
    RaySet set;
    set.cluster_id = cluster_id;
    set.subband_index = subband_index;
    set.model = RayModel::theoretical_mc;
    set.unit_offsets.resize(static_cast<std::size_t>(ray_count));
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (RelativeAngles& z : set.unit_offsets) {
        z.tx_elevation = gauss(rng);
        z.tx_azimuth = gauss(rng);
        z.rx_elevation = gauss(rng);
        z.rx_azimuth = gauss(rng);
    }
    detail::fill_ray_angles_and_lengths(set, sigmas, ctx);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (Ray& ray : set.rays)
        ray.phase = (1.0 - uni(rng)) * two_pi;
    return set;
}

/// Re-derive a ray set for another sub-band. MEA sets keep their equal-area
/// points (quantiles scale linearly with sigma), ensemble sets redraw their
/// offsets from `redraw_rng`, which the caller keys by (seed, cluster,
/// sub-band). Phases persist for matching ray indices; path lengths are
/// recomputed for the rescaled angles.
inline RaySet refresh_for_subband(const RaySet& base, const AngleSigmas& sigmas_at_freq,
                                  const RayPathContext& ctx, int subband_index,
                                  std::mt19937_64* redraw_rng = nullptr)
{
    RaySet set = base;
    set.subband_index = subband_index;
    if (set.model == RayModel::theoretical_mc) {
        if (redraw_rng == nullptr)
            throw std::invalid_argument("refresh_for_subband: ensemble sets need a redraw stream");
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (RelativeAngles& z : set.unit_offsets) {
            z.tx_elevation = gauss(*redraw_rng);
            z.tx_azimuth = gauss(*redraw_rng);
            z.rx_elevation = gauss(*redraw_rng);
            z.rx_azimuth = gauss(*redraw_rng);
        }
    }
    std::vector<double> phases(set.rays.size());
    for (std::size_t i = 0; i < set.rays.size(); ++i)
        phases[i] = base.rays[i].phase;
    detail::fill_ray_angles_and_lengths(set, sigmas_at_freq, ctx);
    for (std::size_t i = 0; i < set.rays.size(); ++i)
        set.rays[i].phase = phases[i];
    return set;
}

} // namespace thzgbsm

#endif
