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

#ifndef THZGBSM_CHANNEL_HPP
#define THZGBSM_CHANNEL_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "thzgbsm/band.hpp"
#include "thzgbsm/cluster.hpp"
#include "thzgbsm/constants.hpp"
#include "thzgbsm/geometry.hpp"
#include "thzgbsm/rays.hpp"
#include "thzgbsm/rng.hpp"
#include "thzgbsm/scenario.hpp"

namespace thzgbsm {

/// One frozen cluster of a channel realization: the stochastic skeleton
/// (delay, power, center angles, ratios), its drawn angle spreads at the
/// reference frequency, and the reference-frequency ray set whose phases
/// persist across sub-bands.
struct ClusterRealization {
    Cluster info;
    ClusterPathState center;  // between array centers at t = 0
    AngleSigmas sigma_ref;    // at Scenario::sigma_ref_freq()
    RayPathContext path_ctx;  // includes the relative-delay rescale
    RaySet base_rays;
};

struct CirTap {
    double delay = 0.0;                  // seconds
    std::complex<double> amplitude{0.0}; // includes the carrier phase
};

/// Tapped-delay-line CIR for one (p, q, sub-band, t) tuple.
struct SubBandCir {
    int tx_index = 1;
    int rx_index = 1;
    int subband_index = 0;
    double time = 0.0;
    double center_freq = 0.0;
    std::vector<CirTap> taps;
};

struct CtfSample {
    double freq = 0.0;
    std::complex<double> value{0.0};
};

/// Frozen channel realization: built single-threaded, read from anywhere.
class Realization {
  public:
    explicit Realization(const Scenario& s) : scenario_(s) { build(); }

    const Scenario& scenario() const { return scenario_; }
    const std::vector<ClusterRealization>& clusters() const { return clusters_; }

    /// Angle spreads of one cluster at an arbitrary frequency.
    AngleSigmas sigmas_at(const ClusterRealization& cr, double freq) const
    {
        const double factor =
            std::pow(freq / scenario_.sigma_ref_freq(), scenario_.freq_exponent);
        return {cr.sigma_ref.tx_elevation * factor, cr.sigma_ref.tx_azimuth * factor,
                cr.sigma_ref.rx_elevation * factor, cr.sigma_ref.rx_azimuth * factor};
    }

    /// Ray set of cluster `c` for the sub-band containing `centers[subband]`.
    RaySet rays_at(std::size_t c, int subband) const
    {
        return rays_at_freq(c, scenario_.band.centers.at(static_cast<std::size_t>(subband)),
                            subband);
    }

    /// Ray set of cluster `c` with spreads evaluated at `freq`. Equal-area
    /// sets rescale deterministically; ensemble sets redraw from the stream
    /// keyed by (seed, cluster, sub-band label).
    RaySet rays_at_freq(std::size_t c, double freq, int subband_label) const
    {
        const ClusterRealization& cr = clusters_.at(c);
        const AngleSigmas sig = sigmas_at(cr, freq);
        if (cr.base_rays.model == RayModel::theoretical_mc) {
            auto redraw = make_stream(scenario_.seed, RngPurpose::ray_angles,
                                      cr.info.rng_id,
                                      static_cast<std::uint64_t>(subband_label) + 1);
            return refresh_for_subband(cr.base_rays, sig, cr.path_ctx, subband_label,
                                       &redraw);
        }
        return refresh_for_subband(cr.base_rays, sig, cr.path_ctx, subband_label);
    }

  private:
    void build()
    {
        const Scenario& s = scenario_;
        const double los_delay = s.los.distance / speed_of_light;

        auto delay_rng_sb = make_stream(s.seed, RngPurpose::cluster_delay, 0);
        auto delay_rng_mb = make_stream(s.seed, RngPurpose::cluster_delay, 1);
        const auto delays_sb = draw_cluster_delays(
            s.clusters.mean_interarrival_sb, s.clusters.count_sb, s.los.distance,
            delay_rng_sb);
        const auto delays_mb = draw_cluster_delays(
            s.clusters.mean_interarrival_mb, s.clusters.count_mb, s.los.distance,
            delay_rng_mb);

        std::vector<double> all_delays = delays_sb;
        all_delays.insert(all_delays.end(), delays_mb.begin(), delays_mb.end());

        auto shadow_rng = make_stream(s.seed, RngPurpose::cluster_shadow);
        std::normal_distribution<double> shadow(0.0, s.clusters.shadow_std_db);
        std::vector<double> shadows(all_delays.size());
        for (double& v : shadows)
            v = (s.clusters.shadow_std_db > 0.0) ? shadow(shadow_rng) : 0.0;

        const auto powers = assign_cluster_powers(all_delays, los_delay,
                                                  s.clusters.decay_db_per_sec, shadows);

        clusters_.reserve(all_delays.size());
        for (std::size_t i = 0; i < all_delays.size(); ++i) {
            const bool is_sb = i < delays_sb.size();
            const int index = static_cast<int>(is_sb ? i : i - delays_sb.size());
            ClusterRealization cr;
            cr.info.kind = is_sb ? ClusterKind::single_bounce : ClusterKind::multi_bounce;
            cr.info.index = index;
            cr.info.delay = all_delays[i];
            cr.info.power = powers[i];
            cr.info.rng_id = (is_sb ? 0x1000u : 0x2000u) + static_cast<std::uint64_t>(index);

            auto geom_rng =
                make_stream(s.seed, RngPurpose::cluster_geometry, cr.info.rng_id);
            const auto geom = draw_cluster_geometry(cr.info.kind, geom_rng, s.clusters);
            cr.info.tx_elevation = geom.tx_elevation;
            cr.info.tx_azimuth = geom.tx_azimuth;
            cr.info.rx_elevation = geom.rx_elevation;
            cr.info.rx_azimuth = geom.rx_azimuth;
            cr.info.r_tx = geom.r_tx;
            cr.info.r_rx = geom.r_rx;

            cr.center = ClusterPathState{cr.info.delay * speed_of_light,
                                         geom.rx_elevation, geom.rx_azimuth,
                                         geom.tx_elevation, geom.tx_azimuth};

            auto sigma_rng = make_stream(s.seed, RngPurpose::sigma_draw, cr.info.rng_id);
            cr.sigma_ref =
                AngleSigmas{draw_sigma(s.mean_sigmas.tx_elevation, sigma_rng),
                            draw_sigma(s.mean_sigmas.tx_azimuth, sigma_rng),
                            draw_sigma(s.mean_sigmas.rx_elevation, sigma_rng),
                            draw_sigma(s.mean_sigmas.rx_azimuth, sigma_rng)};

            cr.path_ctx.center = cr.center;
            cr.path_ctx.r_tx = geom.r_tx;
            cr.path_ctx.r_rx = geom.r_rx;
            cr.path_ctx.multi_bounce = (cr.info.kind == ClusterKind::multi_bounce);
            cr.path_ctx.delay_scale = 1.0;

            const int ray_count = is_sb ? s.rays_sb : s.rays_mb;
            auto ray_rng = make_stream(s.seed, RngPurpose::ray_pairing, cr.info.rng_id);
            if (s.ray_model == RayModel::simulation_mea) {
                cr.base_rays = build_rayset_mea(cr.sigma_ref, ray_count, cr.path_ctx,
                                                ray_rng, cr.info.rng_id, 0);
            } else {
                cr.base_rays = build_rayset_mc(cr.sigma_ref, ray_count, cr.path_ctx,
                                               ray_rng, cr.info.rng_id, 0);
            }

            if (s.mean_toa) {
                double excess = 0.0;
                for (const Ray& r : cr.base_rays.rays)
                    excess += r.path_length - cr.center.total_distance;
                excess /= static_cast<double>(cr.base_rays.rays.size()) * speed_of_light;
                if (excess > 1e-18) {
                    cr.path_ctx.delay_scale = *s.mean_toa / excess;
                    cr.base_rays = refresh_for_subband(cr.base_rays, cr.sigma_ref,
                                                       cr.path_ctx, 0);
                }
            }
            clusters_.push_back(std::move(cr));
        }
    }

    Scenario scenario_;
    std::vector<ClusterRealization> clusters_;
};

/// Total path distance of one ray for an element pair at time t: the base
/// center-to-center length, the mirror-point motion update along the ray
/// arrival direction, then the element offsets folded on both sides.
inline double evolved_ray_distance(const ClusterRealization& cr, double base_length,
                                   const RelativeAngles& rel, const Vec3& tx_offset,
                                   const Vec3& rx_offset, const Motion& motion, double t)
{
    ClusterPathState st;
    st.total_distance = base_length;
    st.rx_elevation = cr.center.rx_elevation + rel.rx_elevation;
    st.rx_azimuth = cr.center.rx_azimuth + rel.rx_azimuth;
    st.tx_elevation = cr.center.tx_elevation + rel.tx_elevation;
    st.tx_azimuth = cr.center.tx_azimuth + rel.tx_azimuth;
    st = evolve_cluster_path(st, motion, t);
    st = per_antenna_state(st, tx_offset, rx_offset);
    return st.total_distance;
}

/// Ray delay for a continuous angle offset (used by the integral-form
/// statistics); identical arithmetic to the finite-ray taps, including the
/// pi/2 guard applied when ray sets are built.
inline double cluster_ray_delay(const ClusterRealization& cr, const RelativeAngles& rel,
                                const Vec3& tx_offset, const Vec3& rx_offset,
                                const Motion& motion, double t)
{
    const RelativeAngles guarded{
        detail::clamp_offset(rel.tx_elevation), detail::clamp_offset(rel.tx_azimuth),
        detail::clamp_offset(rel.rx_elevation), detail::clamp_offset(rel.rx_azimuth)};
    const double base = ray_total_length(cr.path_ctx, guarded);
    return evolved_ray_distance(cr, base, guarded, tx_offset, rx_offset, motion, t) /
           speed_of_light;
}

/// Line-of-sight tap.
inline CirTap cir_los(const LosGeometry& los, const Vec3& tx_offset, const Vec3& rx_offset,
                      const Motion& motion, double rician_k, double freq, double t)
{
    if (rician_k < 0.0)
        throw std::invalid_argument("cir_los: K must be >= 0");
    const double delay = los_distance(los, tx_offset, rx_offset, motion, t) / speed_of_light;
    const double mag = std::sqrt(rician_k / (rician_k + 1.0));
    return {delay, std::polar(mag, -two_pi * freq * delay)};
}

/// Finite-ray cluster taps: equal power split across rays, static phases,
/// delays from the per-ray evolved geometry.
inline std::vector<CirTap> cir_cluster_sim(const ClusterRealization& cr,
                                           const RaySet& rays, const Vec3& tx_offset,
                                           const Vec3& rx_offset, const Motion& motion,
                                           double rician_k, double freq, double t)
{
    const double count = static_cast<double>(rays.rays.size());
    const double mag = std::sqrt(cr.info.power / ((rician_k + 1.0) * count));
    std::vector<CirTap> taps;
    taps.reserve(rays.rays.size());
    for (const Ray& ray : rays.rays) {
        const double dist = evolved_ray_distance(cr, ray.path_length, ray.rel, tx_offset,
                                                 rx_offset, motion, t);
        const double delay = dist / speed_of_light;
        taps.push_back({delay, std::polar(mag, ray.phase - two_pi * freq * delay)});
    }
    return taps;
}

/// Full sub-band CIR for one antenna pair: LoS tap (when K > 0) followed by
/// the taps of every cluster.
inline SubBandCir cir_assemble(const Realization& real, int p, int q, int subband,
                               double t)
{
    const Scenario& s = real.scenario();
    if (p < 1 || p > s.tx.element_count)
        throw std::domain_error("cir_assemble: transmit index out of range");
    if (q < 1 || q > s.rx.element_count)
        throw std::domain_error("cir_assemble: receive index out of range");
    const double freq = s.band.centers.at(static_cast<std::size_t>(subband));

    SubBandCir cir;
    cir.tx_index = p;
    cir.rx_index = q;
    cir.subband_index = subband;
    cir.time = t;
    cir.center_freq = freq;

    const Vec3 tx_off = element_offset(s.tx, p);
    const Vec3 rx_off = element_offset(s.rx, q);
    if (s.clusters.rician_k > 0.0)
        cir.taps.push_back(
            cir_los(s.los, tx_off, rx_off, s.motion, s.clusters.rician_k, freq, t));
    for (std::size_t c = 0; c < real.clusters().size(); ++c) {
        const RaySet rays = real.rays_at(c, subband);
        const auto taps = cir_cluster_sim(real.clusters()[c], rays, tx_off, rx_off,
                                          s.motion, s.clusters.rician_k, freq, t);
        cir.taps.insert(cir.taps.end(), taps.begin(), taps.end());
    }
    return cir;
}

/// Narrowband channel value at the sub-band center: the coherent tap sum.
inline std::complex<double> narrowband_value(const SubBandCir& cir)
{
    std::complex<double> h{0.0, 0.0};
    for (const CirTap& tap : cir.taps)
        h += tap.amplitude;
    return h;
}

/// Sub-band transfer function at the requested frequencies. Tap amplitudes
/// already carry the carrier phase at the sub-band center, so the transform
/// applies only the offset from that center.
inline std::vector<CtfSample> ctf_subband(const SubBandCir& cir, const SubBandPlan& plan,
                                          const std::vector<double>& freqs)
{
    const double lo = plan.lower_edge(cir.subband_index);
    const double hi = plan.upper_edge(cir.subband_index);
    std::vector<CtfSample> out;
    out.reserve(freqs.size());
    for (double f : freqs) {
        if (f < lo - 1e-6 || f > hi + 1e-6)
            throw std::domain_error("ctf_subband: frequency outside the sub-band");
        std::complex<double> h{0.0, 0.0};
        for (const CirTap& tap : cir.taps)
            h += tap.amplitude *
                 std::polar(1.0, -two_pi * (f - cir.center_freq) * tap.delay);
        out.push_back({f, h});
    }
    return out;
}

/// Evaluation grid of one sub-band at the configured spacing.
inline std::vector<double> ctf_grid(const SubBandPlan& plan, int subband, double spacing)
{
    std::vector<double> freqs;
    const double lo = plan.lower_edge(subband);
    const int n = std::max(1, static_cast<int>(plan.subband_width / spacing));
    freqs.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        freqs.push_back(lo + (static_cast<double>(k) + 0.5) * spacing);
    return freqs;
}

/// Whole-band transfer function by support concatenation: every frequency is
/// owned by exactly one sub-band, so the per-band pieces are appended after
/// checking that supports neither overlap nor interleave.
inline std::vector<CtfSample>
ctf_fullband(const std::vector<std::vector<CtfSample>>& per_band)
{
    std::vector<CtfSample> out;
    double last = -1.0;
    for (const auto& band : per_band) {
        if (band.empty())
            continue;
        if (!out.empty() && band.front().freq <= last)
            throw std::runtime_error("ctf_fullband: overlapping sub-band supports");
        for (const CtfSample& sample : band) {
            if (sample.freq <= last && !out.empty())
                throw std::runtime_error("ctf_fullband: unsorted sub-band samples");
            out.push_back(sample);
            last = sample.freq;
        }
    }
    return out;
}

} // namespace thzgbsm

#endif
