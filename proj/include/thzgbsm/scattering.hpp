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

#ifndef THZGBSM_SCATTERING_HPP
#define THZGBSM_SCATTERING_HPP

#include <cmath>
#include <cstddef>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "thzgbsm/constants.hpp"

namespace thzgbsm {

/// Rough rectangular surface: Gaussian height deviation, correlation length
/// and the illuminated extents.
struct SurfaceParams {
    double height_std = 0.0;   // sigma_h, meters
    double corr_length = 0.0;  // meters
    double extent_x = 0.0;     // meters
    double extent_y = 0.0;     // meters
};

/// Incident/exit geometry of a single scatter event. `plane_offset` is the
/// angle between the incident plane and the exit plane.
struct ScatterGeometry {
    double incident = 0.0;     // theta_1, radians, [0, pi/2)
    double exit = 0.0;         // theta_2, radians, [0, pi/2)
    double plane_offset = 0.0; // theta_3, radians, [-pi, pi]
};

/// Frequency scaling law for an intra-cluster angle standard deviation:
/// sigma(f) = sigma_ref * (f / ref_freq)^exponent. `mean_sigma` is the mean
/// of the exponential draw that produces sigma_ref for each cluster.
struct AngleSpreadLaw {
    double sigma_ref = 0.0;  // radians at ref_freq
    double ref_freq = 0.0;   // Hz
    double exponent = 0.0;   // dimensionless
    double mean_sigma = 0.0; // radians, mean of the per-cluster draw
};

namespace detail {

inline double sinc_unnormalized(double u)
{
    return (u == 0.0) ? 1.0 : std::sin(u) / u;
}

} // namespace detail

/// Average power scattering coefficient of a rough surface.
///
/// Combines the attenuated specular term with a series of diffuse terms.
/// Each series term is evaluated in log space so that large roughness
/// parameters (g of order hundreds at THz wavenumbers) cannot overflow.
/// The series stops once past its peak the next term falls below 1e-12 of
/// the accumulated sum, or at 500 terms.
inline double scattering_coefficient(const SurfaceParams& surface,
                                     const ScatterGeometry& geom, double wavenumber,
                                     double series_tol = 1e-12)
{
    if (wavenumber <= 0.0)
        throw std::domain_error("scattering_coefficient: wavenumber must be > 0");
    const double c1 = std::cos(geom.incident);
    const double c2 = std::cos(geom.exit);
    if (c1 <= 1e-12 || c1 + c2 <= 1e-12)
        throw std::domain_error("scattering_coefficient: grazing geometry (theta at pi/2)");

    const double s1 = std::sin(geom.incident);
    const double s2 = std::sin(geom.exit);
    const double c3 = std::cos(geom.plane_offset);
    const double s3 = std::sin(geom.plane_offset);

    const double vx = wavenumber * (s1 - s2 * c3);
    const double vy = wavenumber * (-s2 * s3);
    const double vxy_sq = vx * vx + vy * vy;

    const double rho0 = detail::sinc_unnormalized(vx * surface.extent_x) *
                        detail::sinc_unnormalized(vy * surface.extent_y);
    const double shape = (1.0 + c1 * c2 - s1 * s2 * c3) / (c1 * (c1 + c2));
    const double g = wavenumber * wavenumber * surface.height_std * surface.height_std *
                     (c1 + c2) * (c1 + c2);

    const double lc = surface.corr_length;
    const double area = surface.extent_x * surface.extent_y;

    double series = 0.0; // sum of exp(-g) * g^m / (m! m) * exp(-vxy^2 lc^2 / (4m))
    if (g > 0.0) {
        const double log_g = std::log(g);
        const double decay = 0.25 * vxy_sq * lc * lc;
        for (int m = 1; m <= 500; ++m) {
            const double md = static_cast<double>(m);
            const double log_term =
                md * log_g - std::lgamma(md + 1.0) - std::log(md) - decay / md - g;
            const double term = std::exp(log_term);
            series += term;
            // terms grow until m ~ g; only test convergence past the peak
            if (md > g && term < series_tol * series)
                break;
        }
    }

    const double specular = std::exp(-g) * rho0 * rho0;
    const double diffuse = pi * lc * lc * shape * shape / area * series;
    return specular + diffuse;
}

/// Scattering coefficient profile over a grid of exit angles at fixed
/// incident angle, in the incident plane (plane_offset = 0).
inline std::vector<std::pair<double, double>>
scattering_profile(const SurfaceParams& surface, double incident, double wavenumber,
                   const std::vector<double>& exit_angles)
{
    std::vector<std::pair<double, double>> profile;
    profile.reserve(exit_angles.size());
    for (double exit : exit_angles) {
        ScatterGeometry geom{incident, std::abs(exit), exit < 0.0 ? pi : 0.0};
        profile.emplace_back(exit, scattering_coefficient(surface, geom, wavenumber));
    }
    return profile;
}

/// Reference specular angle for main-lobe width extraction (radians).
inline constexpr double reference_specular_angle = deg2rad(2.5);

/// Scattering coefficient profile around the specular cone: incident and
/// exit angles pinned to `specular`, sweeping the angle between incident and
/// exit planes. This is the reference sweep used to extract main-lobe widths;
/// an exit-angle sweep at these surface parameters is dominated by the
/// specular sinc spike and yields widths an order of magnitude narrower.
inline std::vector<std::pair<double, double>>
specular_cone_profile(const SurfaceParams& surface, double specular, double wavenumber,
                      double half_range = deg2rad(60.0), double step = deg2rad(0.25))
{
    std::vector<std::pair<double, double>> profile;
    for (double a = -half_range; a <= half_range + 1e-12; a += step) {
        ScatterGeometry geom{specular, specular, a};
        profile.emplace_back(a, scattering_coefficient(surface, geom, wavenumber));
    }
    return profile;
}

/// Least-squares Gaussian fit of a scattering main lobe.
///
/// The profile is normalized to unit peak and restricted to the contiguous
/// samples around the maximum that stay at or above 1% of the peak. The
/// curve exp(-(x-x0)^2 / (2 sigma^2)) is then fitted by Gauss-Newton with a
/// log-domain quadratic as the starting point. Returns sigma in radians.
inline double fit_gaussian_mainlobe(const std::vector<std::pair<double, double>>& profile)
{
    const std::size_t n = profile.size();
    if (n < 5)
        throw std::runtime_error("fit_gaussian_mainlobe: need at least 5 samples");

    std::size_t peak = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (profile[i].second > profile[peak].second)
            peak = i;
    if (peak == 0 || peak == n - 1)
        throw std::runtime_error("fit_gaussian_mainlobe: no interior maximum");
    const double peak_value = profile[peak].second;
    if (peak_value <= 0.0)
        throw std::runtime_error("fit_gaussian_mainlobe: nonpositive peak");

    // contiguous main lobe at >= 1% of the peak
    std::size_t lo = peak, hi = peak;
    while (lo > 0 && profile[lo - 1].second >= 0.01 * peak_value)
        --lo;
    while (hi + 1 < n && profile[hi + 1].second >= 0.01 * peak_value)
        ++hi;
    if (hi - lo + 1 < 5)
        throw std::runtime_error("fit_gaussian_mainlobe: main lobe has fewer than 5 samples");

    std::vector<double> xs, ys;
    xs.reserve(hi - lo + 1);
    ys.reserve(hi - lo + 1);
    for (std::size_t i = lo; i <= hi; ++i) {
        xs.push_back(profile[i].first);
        ys.push_back(profile[i].second / peak_value);
    }

    // log-domain quadratic initialisation: log y = a x^2 + b x + c
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, t0 = 0, t1 = 0, t2 = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i], ly = std::log(ys[i]);
        const double x2 = x * x;
        s0 += 1.0;
        s1 += x;
        s2 += x2;
        s3 += x2 * x;
        s4 += x2 * x2;
        t0 += ly;
        t1 += x * ly;
        t2 += x2 * ly;
    }
    // solve the 3x3 normal equations by elimination
    double m[3][4] = {{s4, s3, s2, t2}, {s3, s2, s1, t1}, {s2, s1, s0, t0}};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col]))
                piv = r;
        for (int k = 0; k < 4; ++k)
            std::swap(m[col][k], m[piv][k]);
        if (std::abs(m[col][col]) < 1e-300)
            throw std::runtime_error("fit_gaussian_mainlobe: degenerate fit system");
        for (int r = 0; r < 3; ++r) {
            if (r == col)
                continue;
            const double f = m[r][col] / m[col][col];
            for (int k = col; k < 4; ++k)
                m[r][k] -= f * m[col][k];
        }
    }
    const double qa = m[0][3] / m[0][0];
    const double qb = m[1][3] / m[1][1];
    if (qa >= 0.0)
        throw std::runtime_error("fit_gaussian_mainlobe: profile is not bell shaped");
    double sigma = std::sqrt(-0.5 / qa);
    double x0 = -0.5 * qb / qa;

    // Gauss-Newton refinement in the linear domain
    for (int iter = 0; iter < 100; ++iter) {
        double jtj00 = 0, jtj01 = 0, jtj11 = 0, jtr0 = 0, jtr1 = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double d = xs[i] - x0;
            const double model = std::exp(-0.5 * d * d / (sigma * sigma));
            const double r = model - ys[i];
            const double j0 = model * d / (sigma * sigma);          // d/dx0
            const double j1 = model * d * d / (sigma * sigma * sigma); // d/dsigma
            jtj00 += j0 * j0;
            jtj01 += j0 * j1;
            jtj11 += j1 * j1;
            jtr0 += j0 * r;
            jtr1 += j1 * r;
        }
        const double det = jtj00 * jtj11 - jtj01 * jtj01;
        if (std::abs(det) < 1e-300)
            break;
        const double dx0 = -(jtj11 * jtr0 - jtj01 * jtr1) / det;
        const double dsig = -(-jtj01 * jtr0 + jtj00 * jtr1) / det;
        x0 += dx0;
        sigma += dsig;
        if (sigma <= 0.0)
            throw std::runtime_error("fit_gaussian_mainlobe: fit collapsed");
        if (std::abs(dx0) < 1e-14 && std::abs(dsig) < 1e-14)
            break;
    }
    return sigma;
}

/// One exponential draw with the given mean; strictly positive.
inline double draw_sigma(double mean_sigma, std::mt19937_64& rng)
{
    if (mean_sigma <= 0.0)
        throw std::domain_error("draw_sigma: mean must be > 0");
    std::exponential_distribution<double> dist(1.0 / mean_sigma);
    double v = dist(rng);
    while (v <= 0.0)
        v = dist(rng);
    return v;
}

/// sigma(f) = sigma(f0) * (f/f0)^rho.
inline double scale_sigma(const AngleSpreadLaw& law, double freq)
{
    if (freq <= 0.0)
        throw std::domain_error("scale_sigma: frequency must be > 0");
    return law.sigma_ref * std::pow(freq / law.ref_freq, law.exponent);
}

/// Built-in surface material table (height deviation / correlation length).
inline const std::map<std::string, SurfaceParams>& material_presets()
{
    static const std::map<std::string, SurfaceParams> presets = {
        {"painted_wall", {0.13 * mm, 2.3 * mm, 23.0 * mm, 23.0 * mm}},
        {"plaster1", {0.5 * mm, 2.3 * mm, 23.0 * mm, 23.0 * mm}},
        {"plaster2", {1.5 * mm, 2.3 * mm, 23.0 * mm, 23.0 * mm}},
    };
    return presets;
}

inline SurfaceParams material_by_key(const std::string& key)
{
    const auto& presets = material_presets();
    auto it = presets.find(key);
    if (it == presets.end())
        throw std::invalid_argument("unknown surface material: " + key);
    return it->second;
}

} // namespace thzgbsm

#endif
