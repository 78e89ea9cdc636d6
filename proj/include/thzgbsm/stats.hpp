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

#ifndef THZGBSM_STATS_HPP
#define THZGBSM_STATS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "thzgbsm/channel.hpp"
#include "thzgbsm/quadrature.hpp"
#include "thzgbsm/rng.hpp"

namespace thzgbsm {

/// Sampled correlation curve. `values` are the normalized samples when
/// `normalized` is set; the raw lagged products are always kept alongside.
struct CorrelationResult {
    std::vector<double> lags;                  // seconds, element spacings, or Hz
    std::vector<std::complex<double>> raw;     // as computed
    std::vector<std::complex<double>> values;  // raw / norm_factor
    std::vector<double> stderrs;               // per-lag standard error (empirical)
    bool normalized = false;
    double norm_factor = 1.0;
    int p = 1, q = 1, p2 = 1, q2 = 1;
    double t = 0.0;
    double freq = 0.0;
    bool quadrature_converged = true;
};

inline void normalize_correlation(CorrelationResult& r)
{
    if (r.raw.empty())
        return;
    const double norm = std::abs(r.raw.front());
    if (norm <= 0.0)
        throw std::runtime_error("correlation: zero-lag magnitude vanishes");
    r.norm_factor = norm;
    r.values.resize(r.raw.size());
    for (std::size_t i = 0; i < r.raw.size(); ++i)
        r.values[i] = r.raw[i] / norm;
    for (double& se : r.stderrs)
        se /= norm;
    r.normalized = true;
}

// ------------------------------------------------------ integral statistics

struct QuadratureOptions {
    double rel_tol = 1e-4;
    double value_floor = 0.05; // convergence floor for near-zero correlation values
    int min_nodes = 16;
    int max_nodes = 128;
    double truncation_sigmas = 6.0;
};

struct QuadratureReport {
    bool converged = true;
    int max_nodes_used = 0;
};

namespace detail {

/// Tabulated one-endpoint ray-delay evaluator over the quadrature nodes.
///
/// Reproduces cluster_ray_delay() exactly (checked by unit test) while
/// hoisting every trigonometric call out of the tensor loop: per dimension
/// the tables hold the leg-stretch factors and the sine/cosine of the ray
/// departure and arrival angles, so one evaluation is a handful of
/// multiplications plus two norms.
struct DelayEvaluator {
    std::vector<double> stretch_te, stretch_ta, stretch_re, stretch_ra;
    std::vector<double> ce_te, se_te, ca_ta, sa_ta, ce_re, se_re, ca_ra, sa_ra;
    double d_sin_center = 0.0; // D * sin(center rx elevation)
    double d_cos_center = 0.0;
    double d_center = 0.0;
    double link_length = 0.0;
    double delay_scale = 1.0;
    Vec3 shift;   // motion displacement plus the receive element offset
    Vec3 tx_off;
    bool fold_tx = false;

    DelayEvaluator(const ClusterRealization& cr, const AngleSigmas& sig,
                   const std::vector<double>& z, const Vec3& tx_offset,
                   const Vec3& rx_offset, const Motion& motion, double t)
    {
        const RayPathContext& ctx = cr.path_ctx;
        const std::size_t n = z.size();
        stretch_te.resize(n);
        stretch_ta.resize(n);
        stretch_re.resize(n);
        stretch_ra.resize(n);
        ce_te.resize(n);
        se_te.resize(n);
        ca_ta.resize(n);
        sa_ta.resize(n);
        ce_re.resize(n);
        se_re.resize(n);
        ca_ra.resize(n);
        sa_ra.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double a_te = clamp_offset(z[i] * sig.tx_elevation);
            const double a_ta = clamp_offset(z[i] * sig.tx_azimuth);
            const double a_re = clamp_offset(z[i] * sig.rx_elevation);
            const double a_ra = clamp_offset(z[i] * sig.rx_azimuth);
            stretch_te[i] = ctx.r_tx / std::cos(a_te);
            stretch_ta[i] = ctx.r_tx / std::cos(a_ta);
            stretch_re[i] = ctx.r_rx / std::cos(a_re);
            stretch_ra[i] = ctx.r_rx / std::cos(a_ra);
            ce_te[i] = std::cos(ctx.center.tx_elevation + a_te);
            se_te[i] = std::sin(ctx.center.tx_elevation + a_te);
            ca_ta[i] = std::cos(ctx.center.tx_azimuth + a_ta);
            sa_ta[i] = std::sin(ctx.center.tx_azimuth + a_ta);
            ce_re[i] = std::cos(ctx.center.rx_elevation + a_re);
            se_re[i] = std::sin(ctx.center.rx_elevation + a_re);
            ca_ra[i] = std::cos(ctx.center.rx_azimuth + a_ra);
            sa_ra[i] = std::sin(ctx.center.rx_azimuth + a_ra);
        }
        d_center = ctx.center.total_distance;
        d_sin_center = d_center * std::sin(ctx.center.rx_elevation);
        d_cos_center = d_center * std::cos(ctx.center.rx_elevation);
        link_length = ctx.multi_bounce ? (1.0 - ctx.r_tx - ctx.r_rx) * d_center : 0.0;
        delay_scale = ctx.delay_scale;
        shift = motion.velocity() * t + rx_offset;
        tx_off = tx_offset;
        fold_tx = (tx_offset.x != 0.0 || tx_offset.y != 0.0 || tx_offset.z != 0.0);
    }

    double delay(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const
    {
        const double vertical = d_sin_center * (stretch_re[c] + stretch_te[a]);
        const double horizontal = d_cos_center * (stretch_ra[d] + stretch_ta[b]);
        const double raw = std::sqrt(vertical * vertical + horizontal * horizontal) +
                           link_length;
        const double geo = d_center + delay_scale * (raw - d_center);
        const double x = geo * ce_re[c] * ca_ra[d] + shift.x;
        const double y = geo * ce_re[c] * sa_ra[d] + shift.y;
        const double zc = geo * se_re[c] + shift.z;
        double dist = std::sqrt(x * x + y * y + zc * zc);
        if (fold_tx) {
            const double tx = dist * ce_te[a] * ca_ta[b] + tx_off.x;
            const double ty = dist * ce_te[a] * sa_ta[b] + tx_off.y;
            const double tz = dist * se_te[a] + tx_off.z;
            dist = std::sqrt(tx * tx + ty * ty + tz * tz);
        }
        return dist / speed_of_light;
    }
};

/// Adaptive tensor Gauss-Legendre integral of the per-cluster phase factor
/// against the four intra-cluster Gaussian angle densities truncated at
/// +-truncation_sigmas. Node counts double until the result moves by less
/// than rel_tol, up to max_nodes per dimension.
inline std::complex<double> cluster_correlation_integral(
    const ClusterRealization& cr, const AngleSigmas& sig_a, const AngleSigmas& sig_b,
    const Vec3& tx_a, const Vec3& rx_a, const Vec3& tx_b, const Vec3& rx_b,
    const Motion& motion, double t_a, double t_b, double freq_a, double freq_b,
    const QuadratureOptions& opts, QuadratureReport* report)
{
    std::complex<double> previous{0.0, 0.0};
    bool have_previous = false;
    for (int n = opts.min_nodes; n <= opts.max_nodes; n *= 2) {
        const GaussLegendreRule& rule = gauss_legendre(n);
        const std::size_t nn = static_cast<std::size_t>(n);
        std::vector<double> z(nn), w(nn);
        for (std::size_t i = 0; i < nn; ++i) {
            z[i] = opts.truncation_sigmas * rule.nodes[i];
            w[i] = opts.truncation_sigmas * rule.weights[i] *
                   std::exp(-0.5 * z[i] * z[i]) / std::sqrt(two_pi);
        }
        const DelayEvaluator eval_a(cr, sig_a, z, tx_a, rx_a, motion, t_a);
        const DelayEvaluator eval_b(cr, sig_b, z, tx_b, rx_b, motion, t_b);
        const double wa = two_pi * freq_a, wb = two_pi * freq_b;
        std::complex<double> sum{0.0, 0.0};
        for (std::size_t a = 0; a < nn; ++a)
            for (std::size_t b = 0; b < nn; ++b)
                for (std::size_t c = 0; c < nn; ++c) {
                    std::complex<double> inner{0.0, 0.0};
                    const double wabc = w[a] * w[b] * w[c];
                    for (std::size_t d = 0; d < nn; ++d) {
                        const double ph =
                            wa * eval_a.delay(a, b, c, d) - wb * eval_b.delay(a, b, c, d);
                        inner += w[d] * std::complex<double>(std::cos(ph), std::sin(ph));
                    }
                    sum += wabc * inner;
                }
        if (report)
            report->max_nodes_used = std::max(report->max_nodes_used, n);
        if (have_previous &&
            std::abs(sum - previous) <= opts.rel_tol * std::max(std::abs(sum), opts.value_floor))
            return sum;
        previous = sum;
        have_previous = true;
    }
    if (report)
        report->converged = false;
    return previous;
}

} // namespace detail

/// Space-time-frequency correlation of the integral-form model: the LoS term
/// plus one four-dimensional angle integral per cluster, each against the
/// intra-cluster Gaussian angle densities and weighted by the cluster power.
inline std::complex<double>
stfcf_theoretical(const Realization& real, int p, int q, int p2, int q2, double t,
                  double dt, double freq, double dfreq,
                  const QuadratureOptions& opts = {}, QuadratureReport* report = nullptr)
{
    const Scenario& s = real.scenario();
    const double freq2 = freq + dfreq;
    const double k_factor = s.clusters.rician_k;
    const Vec3 tx_a = element_offset(s.tx, p), rx_a = element_offset(s.rx, q);
    const Vec3 tx_b = element_offset(s.tx, p2), rx_b = element_offset(s.rx, q2);

    std::complex<double> total{0.0, 0.0};
    if (k_factor > 0.0) {
        const double tau_a =
            los_distance(s.los, tx_a, rx_a, s.motion, t) / speed_of_light;
        const double tau_b =
            los_distance(s.los, tx_b, rx_b, s.motion, t + dt) / speed_of_light;
        const double ph = two_pi * (freq * tau_a - freq2 * tau_b);
        total += (k_factor / (k_factor + 1.0)) *
                 std::complex<double>(std::cos(ph), std::sin(ph));
    }

    for (const ClusterRealization& cr : real.clusters()) {
        const AngleSigmas sig_a = real.sigmas_at(cr, freq);
        const AngleSigmas sig_b = real.sigmas_at(cr, freq2);
        const std::complex<double> integral = detail::cluster_correlation_integral(
            cr, sig_a, sig_b, tx_a, rx_a, tx_b, rx_b, s.motion, t, t + dt, freq, freq2,
            opts, report);
        total += cr.info.power / (k_factor + 1.0) * integral;
    }
    return total;
}

/// Time autocorrelation of the integral-form model over a lag grid whose
/// first entry must be the zero lag.
inline CorrelationResult acf_theoretical(const Realization& real, int p, int q, double t,
                                         const std::vector<double>& lags, double freq,
                                         const QuadratureOptions& opts = {})
{
    CorrelationResult r;
    r.lags = lags;
    r.p = r.p2 = p;
    r.q = r.q2 = q;
    r.t = t;
    r.freq = freq;
    QuadratureReport report;
    for (double lag : lags)
        r.raw.push_back(stfcf_theoretical(real, p, q, p, q, t, lag, freq, 0.0, opts, &report));
    r.quadrature_converged = report.converged;
    normalize_correlation(r);
    return r;
}

/// Spatial cross-correlation of the integral-form model against receive
/// element separation 0..max_spacings (in element spacings).
inline CorrelationResult ccf_spatial_theoretical(const Realization& real, int p, int q,
                                                 double t, double freq, int max_spacings,
                                                 const QuadratureOptions& opts = {})
{
    const Scenario& s = real.scenario();
    if (q + max_spacings > s.rx.element_count)
        throw std::domain_error("ccf: receive separation exceeds the array");
    CorrelationResult r;
    r.p = r.p2 = p;
    r.q = q;
    r.t = t;
    r.freq = freq;
    QuadratureReport report;
    for (int sep = 0; sep <= max_spacings; ++sep) {
        r.lags.push_back(static_cast<double>(sep));
        r.raw.push_back(
            stfcf_theoretical(real, p, q, p, q + sep, t, 0.0, freq, 0.0, opts, &report));
    }
    r.q2 = q + max_spacings;
    r.quadrature_converged = report.converged;
    normalize_correlation(r);
    return r;
}

// ----------------------------------------------------- finite-ray statistics

/// Correlation of the finite-ray model between (p, q, t, f) and
/// (p2, q2, t+dt, f2): closed sums over matching ray indices, the expectation
/// over the uniform phases removing every cross term. Ray angles follow the
/// sub-band owning each frequency.
inline std::complex<double> correlation_sim(const Realization& real, int p, int q, int p2,
                                            int q2, double t, double dt, double freq,
                                            double freq2)
{
    const Scenario& s = real.scenario();
    const double k_factor = s.clusters.rician_k;
    const Vec3 tx_a = element_offset(s.tx, p), rx_a = element_offset(s.rx, q);
    const Vec3 tx_b = element_offset(s.tx, p2), rx_b = element_offset(s.rx, q2);

    std::complex<double> total{0.0, 0.0};
    if (k_factor > 0.0) {
        const double tau_a =
            los_distance(s.los, tx_a, rx_a, s.motion, t) / speed_of_light;
        const double tau_b =
            los_distance(s.los, tx_b, rx_b, s.motion, t + dt) / speed_of_light;
        const double ph = two_pi * (freq * tau_a - freq2 * tau_b);
        total += (k_factor / (k_factor + 1.0)) *
                 std::complex<double>(std::cos(ph), std::sin(ph));
    }

    const int band_a = s.band.owner(freq);
    const int band_b = s.band.owner(freq2);
    for (std::size_t c = 0; c < real.clusters().size(); ++c) {
        const ClusterRealization& cr = real.clusters()[c];
        const RaySet rays_a = real.rays_at_freq(c, freq, band_a);
        const RaySet rays_b =
            (freq2 == freq) ? rays_a : real.rays_at_freq(c, freq2, band_b);
        const double count = static_cast<double>(rays_a.rays.size());
        std::complex<double> sum{0.0, 0.0};
        for (std::size_t l = 0; l < rays_a.rays.size(); ++l) {
            const Ray& ra = rays_a.rays[l];
            const Ray& rb = rays_b.rays[l];
            const double tau_a =
                evolved_ray_distance(cr, ra.path_length, ra.rel, tx_a, rx_a, s.motion, t) /
                speed_of_light;
            const double tau_b =
                evolved_ray_distance(cr, rb.path_length, rb.rel, tx_b, rx_b, s.motion,
                                     t + dt) /
                speed_of_light;
            const double ph = two_pi * (freq * tau_a - freq2 * tau_b);
            sum += std::complex<double>(std::cos(ph), std::sin(ph));
        }
        total += cr.info.power / ((k_factor + 1.0) * count) * sum;
    }
    return total;
}

inline CorrelationResult acf_sim(const Realization& real, int p, int q, double t,
                                 const std::vector<double>& lags, double freq)
{
    CorrelationResult r;
    r.lags = lags;
    r.p = r.p2 = p;
    r.q = r.q2 = q;
    r.t = t;
    r.freq = freq;
    for (double lag : lags)
        r.raw.push_back(correlation_sim(real, p, q, p, q, t, lag, freq, freq));
    normalize_correlation(r);
    return r;
}

inline CorrelationResult ccf_spatial_sim(const Realization& real, int p, int q, double t,
                                         double freq, int max_spacings)
{
    const Scenario& s = real.scenario();
    if (q + max_spacings > s.rx.element_count)
        throw std::domain_error("ccf: receive separation exceeds the array");
    CorrelationResult r;
    r.p = r.p2 = p;
    r.q = q;
    r.q2 = q + max_spacings;
    r.t = t;
    r.freq = freq;
    for (int sep = 0; sep <= max_spacings; ++sep) {
        r.lags.push_back(static_cast<double>(sep));
        r.raw.push_back(correlation_sim(real, p, q, p, q + sep, t, 0.0, freq, freq));
    }
    normalize_correlation(r);
    return r;
}

/// Frequency correlation of the finite-ray model: matching ray indices keep
/// their phases across sub-bands, so the closed sum again drops every cross
/// term. Lags in Hz, first lag must be zero.
inline CorrelationResult fcf_sim(const Realization& real, int p, int q, double t,
                                 double freq, const std::vector<double>& dfreqs)
{
    CorrelationResult r;
    r.lags = dfreqs;
    r.p = r.p2 = p;
    r.q = r.q2 = q;
    r.t = t;
    r.freq = freq;
    for (double df : dfreqs)
        r.raw.push_back(correlation_sim(real, p, q, p, q, t, 0.0, freq, freq + df));
    normalize_correlation(r);
    return r;
}

// --------------------------------------------------- empirical correlation

enum class CorrelationAxis { time, space, frequency };

struct EmpiricalSpec {
    CorrelationAxis axis = CorrelationAxis::time;
    int p = 1;
    int q = 1;
    double t = 0.0;
    double freq = 0.0;          // absolute anchor frequency
    std::vector<double> lags;   // seconds | element spacings | Hz; first must be 0
    int replicas = 200;
};

/// Ensemble estimate of the lagged correlation: the cluster phases are
/// redrawn per replica (persisting across sub-bands inside a replica), the
/// deterministic ray delays are computed once per lag. Reports the per-lag
/// standard error of the complex mean.
inline CorrelationResult empirical_correlation(const Realization& real,
                                               const EmpiricalSpec& spec)
{
    const Scenario& s = real.scenario();
    if (spec.lags.empty() || spec.lags.front() != 0.0)
        throw std::invalid_argument("empirical_correlation: first lag must be zero");
    const double k_factor = s.clusters.rician_k;
    const std::size_t n_lags = spec.lags.size();
    const std::size_t n_clusters = real.clusters().size();

    // per-lag deterministic coefficients: coef[lag][cluster][ray]
    std::vector<std::vector<std::vector<std::complex<double>>>> coef(n_lags);
    std::vector<std::complex<double>> los_term(n_lags, {0.0, 0.0});
    for (std::size_t k = 0; k < n_lags; ++k) {
        int p2 = spec.p, q2 = spec.q;
        double t2 = spec.t, f2 = spec.freq;
        switch (spec.axis) {
        case CorrelationAxis::time: t2 += spec.lags[k]; break;
        case CorrelationAxis::space:
            q2 += static_cast<int>(std::lround(spec.lags[k]));
            break;
        case CorrelationAxis::frequency: f2 += spec.lags[k]; break;
        }
        if (q2 < 1 || q2 > s.rx.element_count)
            throw std::domain_error("empirical_correlation: receive index out of range");
        const Vec3 tx_off = element_offset(s.tx, p2);
        const Vec3 rx_off = element_offset(s.rx, q2);
        if (k_factor > 0.0) {
            const double tau =
                los_distance(s.los, tx_off, rx_off, s.motion, t2) / speed_of_light;
            los_term[k] = std::sqrt(k_factor / (k_factor + 1.0)) *
                          std::polar(1.0, -two_pi * f2 * tau);
        }
        coef[k].resize(n_clusters);
        const int band = s.band.owner(f2);
        for (std::size_t c = 0; c < n_clusters; ++c) {
            const ClusterRealization& cr = real.clusters()[c];
            const RaySet rays = real.rays_at_freq(c, f2, band);
            const double count = static_cast<double>(rays.rays.size());
            const double mag = std::sqrt(cr.info.power / ((k_factor + 1.0) * count));
            coef[k][c].reserve(rays.rays.size());
            for (const Ray& ray : rays.rays) {
                const double tau = evolved_ray_distance(cr, ray.path_length, ray.rel,
                                                        tx_off, rx_off, s.motion, t2) /
                                   speed_of_light;
                coef[k][c].push_back(std::polar(mag, -two_pi * f2 * tau));
            }
        }
    }

    std::vector<std::complex<double>> sum(n_lags, {0.0, 0.0});
    std::vector<double> sum_re2(n_lags, 0.0), sum_im2(n_lags, 0.0);
    std::vector<std::complex<double>> h(n_lags);
    for (int rep = 0; rep < spec.replicas; ++rep) {
        for (std::size_t k = 0; k < n_lags; ++k)
            h[k] = los_term[k];
        for (std::size_t c = 0; c < n_clusters; ++c) {
            const ClusterRealization& cr = real.clusters()[c];
            auto phase_rng = make_stream(s.seed, RngPurpose::mc_replica, cr.info.rng_id,
                                         static_cast<std::uint64_t>(rep));
            std::uniform_real_distribution<double> uni(0.0, 1.0);
            const std::size_t n_rays = coef.front()[c].size();
            for (std::size_t l = 0; l < n_rays; ++l) {
                const double theta = (1.0 - uni(phase_rng)) * two_pi;
                const std::complex<double> rot = std::polar(1.0, theta);
                for (std::size_t k = 0; k < n_lags; ++k)
                    h[k] += coef[k][c][l] * rot;
            }
        }
        const std::complex<double> anchor = std::conj(h[0]);
        for (std::size_t k = 0; k < n_lags; ++k) {
            const std::complex<double> prod = anchor * h[k];
            sum[k] += prod;
            sum_re2[k] += prod.real() * prod.real();
            sum_im2[k] += prod.imag() * prod.imag();
        }
    }

    CorrelationResult r;
    r.lags = spec.lags;
    r.p = r.p2 = spec.p;
    r.q = spec.q;
    r.t = spec.t;
    r.freq = spec.freq;
    const double n = static_cast<double>(spec.replicas);
    r.raw.resize(n_lags);
    r.stderrs.resize(n_lags);
    for (std::size_t k = 0; k < n_lags; ++k) {
        r.raw[k] = sum[k] / n;
        const double var_re =
            std::max(0.0, sum_re2[k] / n - r.raw[k].real() * r.raw[k].real());
        const double var_im =
            std::max(0.0, sum_im2[k] / n - r.raw[k].imag() * r.raw[k].imag());
        r.stderrs[k] = std::sqrt((var_re + var_im) / n);
    }
    normalize_correlation(r);
    return r;
}

// ------------------------------------------------------------- delay PSD

/// Binned power profile over the delay axis; bins live on the absolute grid
/// floor(delay / bin_width) so profiles from different sub-bands align.
struct DelayPsd {
    double time = 0.0;
    int subband = 0;
    double bin_width = 0.0;
    std::vector<std::pair<double, double>> bins; // (bin center delay, power)
};

inline DelayPsd delay_psd(const SubBandCir& cir, double bin_width)
{
    if (bin_width <= 0.0)
        throw std::invalid_argument("delay_psd: bin width must be > 0");
    std::map<long long, double> acc;
    for (const CirTap& tap : cir.taps)
        acc[static_cast<long long>(std::floor(tap.delay / bin_width))] +=
            std::norm(tap.amplitude);
    DelayPsd psd;
    psd.time = cir.time;
    psd.subband = cir.subband_index;
    psd.bin_width = bin_width;
    psd.bins.reserve(acc.size());
    for (const auto& [idx, power] : acc)
        psd.bins.emplace_back((static_cast<double>(idx) + 0.5) * bin_width, power);
    return psd;
}

inline double psd_total_power(const DelayPsd& psd)
{
    double total = 0.0;
    for (const auto& [delay, power] : psd.bins)
        total += power;
    return total;
}

/// Root-mean-square width of a delay power profile.
inline double rms_delay_spread(const DelayPsd& psd)
{
    double p_sum = 0.0, m1 = 0.0, m2 = 0.0;
    for (const auto& [delay, power] : psd.bins) {
        p_sum += power;
        m1 += power * delay;
        m2 += power * delay * delay;
    }
    if (p_sum <= 0.0)
        throw std::domain_error("rms_delay_spread: empty profile");
    m1 /= p_sum;
    m2 /= p_sum;
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

// ----------------------------------------------------- stationary interval

struct StationaryIntervalResult {
    CorrelationAxis axis = CorrelationAxis::frequency;
    std::vector<double> samples; // interval length per anchor
    double threshold = 0.9;
};

namespace detail {

inline double psd_cross(const DelayPsd& a, const DelayPsd& b)
{
    double sum = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.bins.size() && j < b.bins.size()) {
        const double da = a.bins[i].first, db = b.bins[j].first;
        if (std::abs(da - db) < 0.5 * a.bin_width) {
            sum += a.bins[i].second * b.bins[j].second;
            ++i;
            ++j;
        } else if (da < db) {
            ++i;
        } else {
            ++j;
        }
    }
    return sum;
}

} // namespace detail

/// Normalized correlation of two delay profiles with the max-power
/// denominator.
inline double psd_correlation(const DelayPsd& a, const DelayPsd& b)
{
    const double cross = detail::psd_cross(a, b);
    const double denom = std::max(detail::psd_cross(a, a), detail::psd_cross(b, b));
    if (denom <= 0.0)
        throw std::domain_error("psd_correlation: empty profiles");
    return cross / denom;
}

/// Stationary interval per anchor: the smallest positive lag at which the
/// normalized delay-profile correlation drops below the threshold (the full
/// remaining span when it never does). The grid must be uniform; the last
/// grid point has no upward room and yields no sample.
inline StationaryIntervalResult
stationary_interval(const std::vector<DelayPsd>& psds, const std::vector<double>& axis,
                    double threshold,
                    CorrelationAxis axis_kind = CorrelationAxis::frequency)
{
    if (psds.size() != axis.size() || axis.size() < 2)
        throw std::domain_error("stationary_interval: need at least two grid points");
    if (threshold <= 0.0 || threshold >= 1.0)
        throw std::domain_error("stationary_interval: threshold must be inside (0, 1)");
    const double step = axis[1] - axis[0];
    for (std::size_t i = 1; i < axis.size(); ++i)
        if (std::abs(axis[i] - axis[i - 1] - step) > 1e-6 * step)
            throw std::domain_error("stationary_interval: grid must be uniform");

    StationaryIntervalResult result;
    result.axis = axis_kind;
    result.threshold = threshold;
    for (std::size_t a = 0; a + 1 < axis.size(); ++a) {
        double interval = axis.back() - axis[a];
        for (std::size_t j = a + 1; j < axis.size(); ++j) {
            if (psd_correlation(psds[a], psds[j]) < threshold) {
                interval = axis[j] - axis[a];
                break;
            }
        }
        result.samples.push_back(interval);
    }
    return result;
}

// ------------------------------------------------------------ angle spread

/// Empirical CDF points (value, probability) of a sample set.
inline std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> values)
{
    if (values.empty())
        throw std::domain_error("empirical_cdf: empty sample set");
    std::sort(values.begin(), values.end());
    std::vector<std::pair<double, double>> cdf;
    cdf.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        cdf.emplace_back(values[i],
                         (static_cast<double>(i) + 1.0) / static_cast<double>(values.size()));
    return cdf;
}

/// CDF evaluated at x by step interpolation.
inline double cdf_at(const std::vector<std::pair<double, double>>& cdf, double x)
{
    std::size_t lo = 0, hi = cdf.size();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (cdf[mid].first <= x)
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo == 0 ? 0.0 : cdf[lo - 1].second;
}

/// Receive-azimuth angle offsets collected over an ensemble of seeds: each
/// seed rebuilds the cluster skeleton (new sigma draws), every ray of every
/// cluster contributes one sample at the configured output sub-band.
inline std::vector<double> relative_angle_ensemble(const Scenario& base, int num_seeds)
{
    std::vector<double> out;
    for (int i = 0; i < num_seeds; ++i) {
        Scenario s = base;
        s.seed = base.seed + static_cast<std::uint64_t>(i);
        Realization real(s);
        const int band = s.out_subbands.front();
        for (std::size_t c = 0; c < real.clusters().size(); ++c) {
            const RaySet rays = real.rays_at(c, band);
            for (const Ray& ray : rays.rays)
                out.push_back(ray.rel.rx_azimuth);
        }
    }
    return out;
}

/// Delay profiles of one antenna pair sampled across the band at the
/// configured spacing; axis holds the sampled sub-band centers.
inline std::pair<std::vector<DelayPsd>, std::vector<double>>
band_psd_sweep(const Realization& real, int p, int q, double t)
{
    const Scenario& s = real.scenario();
    const int stride = std::max(
        1, static_cast<int>(std::lround(s.psd_sample_spacing / s.band.subband_width)));
    std::vector<DelayPsd> psds;
    std::vector<double> axis;
    for (int i = 0; i < s.band.count; i += stride) {
        psds.push_back(delay_psd(cir_assemble(real, p, q, i, t), s.psd_bin));
        axis.push_back(s.band.centers[static_cast<std::size_t>(i)]);
    }
    return {std::move(psds), std::move(axis)};
}

/// Stationary bandwidth anchored at the band start, one sample per seed:
/// seed i uses root seed base.seed + i. Intervals in Hz.
inline std::vector<double> stationary_bandwidth_ensemble(const Scenario& base,
                                                         int num_seeds)
{
    std::vector<double> intervals;
    intervals.reserve(static_cast<std::size_t>(num_seeds));
    const int p = base.out_pairs.front().first;
    const int q = base.out_pairs.front().second;
    const double t = base.out_times.front();
    for (int i = 0; i < num_seeds; ++i) {
        Scenario s = base;
        s.seed = base.seed + static_cast<std::uint64_t>(i);
        Realization real(s);
        const auto [psds, axis] = band_psd_sweep(real, p, q, t);
        intervals.push_back(
            stationary_interval(psds, axis, s.stationarity_threshold).samples.front());
    }
    return intervals;
}

/// Ensemble-mean narrowband power over phase redraws, averaged across
/// `subband_samples` sub-bands spread over the band. Equals 1 in expectation
/// for normalized cluster powers and K = 0.
inline double mean_total_power(const Realization& real, int p, int q, double t,
                               int replicas, int subband_samples)
{
    const Scenario& s = real.scenario();
    const int stride = std::max(1, s.band.count / std::max(1, subband_samples));
    double sum = 0.0;
    int used = 0;
    for (int i = 0; i < s.band.count; i += stride) {
        EmpiricalSpec spec;
        spec.axis = CorrelationAxis::frequency;
        spec.p = p;
        spec.q = q;
        spec.t = t;
        spec.freq = s.band.centers[static_cast<std::size_t>(i)];
        spec.lags = {0.0};
        spec.replicas = replicas;
        sum += empirical_correlation(real, spec).raw.front().real();
        ++used;
    }
    return sum / used;
}

// --------------------------------------------------------------- fitting

struct FitProblem {
    std::function<double(const std::vector<double>&)> mse;
    std::vector<double> lower;
    std::vector<double> upper;
};

struct FitResult {
    std::vector<double> params;
    double mse = 0.0;
    int evaluations = 0;
};

/// Derivative-free coordinate search with seeded random restarts.
inline FitResult fit_parameter(const FitProblem& problem, int restarts,
                               std::uint64_t seed)
{
    if (problem.lower.size() != problem.upper.size() || problem.lower.empty())
        throw std::invalid_argument("fit_parameter: inconsistent bounds");
    for (std::size_t i = 0; i < problem.lower.size(); ++i)
        if (!(problem.lower[i] < problem.upper[i]))
            throw std::invalid_argument("fit_parameter: lower bound must be below upper");
    if (restarts < 1)
        throw std::invalid_argument("fit_parameter: need at least one restart");

    const std::size_t dim = problem.lower.size();
    FitResult best;
    best.mse = std::numeric_limits<double>::infinity();
    int evaluations = 0;
    auto evaluate = [&](const std::vector<double>& x) {
        ++evaluations;
        return problem.mse(x);
    };

    for (int restart = 0; restart < restarts; ++restart) {
        auto rng = make_stream(seed, RngPurpose::fit_restart,
                               static_cast<std::uint64_t>(restart));
        std::vector<double> x(dim), step(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            std::uniform_real_distribution<double> uni(problem.lower[i], problem.upper[i]);
            x[i] = uni(rng);
            step[i] = 0.25 * (problem.upper[i] - problem.lower[i]);
        }
        double fx = evaluate(x);
        for (int iter = 0; iter < 400; ++iter) {
            bool improved = false;
            for (std::size_t i = 0; i < dim; ++i) {
                for (double dir : {1.0, -1.0}) {
                    std::vector<double> trial = x;
                    trial[i] = std::clamp(trial[i] + dir * step[i], problem.lower[i],
                                          problem.upper[i]);
                    if (trial[i] == x[i])
                        continue;
                    const double ft = evaluate(trial);
                    if (ft < fx) {
                        x = trial;
                        fx = ft;
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) {
                bool done = true;
                for (std::size_t i = 0; i < dim; ++i) {
                    step[i] *= 0.5;
                    if (step[i] > 1e-6 * (problem.upper[i] - problem.lower[i]))
                        done = false;
                }
                if (done)
                    break;
            }
        }
        if (fx < best.mse) {
            best.mse = fx;
            best.params = x;
        }
    }
    best.evaluations = evaluations;
    return best;
}

} // namespace thzgbsm

#endif
