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

#ifndef THZGBSM_SCENARIO_HPP
#define THZGBSM_SCENARIO_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "thzgbsm/band.hpp"
#include "thzgbsm/cluster.hpp"
#include "thzgbsm/constants.hpp"
#include "thzgbsm/geometry.hpp"
#include "thzgbsm/rays.hpp"
#include "thzgbsm/scattering.hpp"

namespace thzgbsm {

/// User-facing configuration. Values are kept in the units of the config
/// file (degrees, GHz, ns, meters) so that a load/emit round trip is exact;
/// `to_scenario()` converts to SI for the engine.
struct ScenarioConfig {
    struct ArrayCfg {
        int elements = 8;
        std::optional<double> spacing_m; // empty: half wavelength at 325 GHz
        double elevation_deg = 0.0;
        double azimuth_deg = 0.0;
        bool operator==(const ArrayCfg&) const = default;
    };
    struct LosCfg {
        double distance_m = 3.0;
        double elevation_deg = 0.0;
        double azimuth_deg = 0.0;
        bool operator==(const LosCfg&) const = default;
    };
    struct MotionCfg {
        double speed_mps = 0.1;
        double elevation_deg = 0.0;
        double azimuth_deg = 60.0;
        bool operator==(const MotionCfg&) const = default;
    };
    struct BandCfg {
        double start_ghz = 300.0;
        double stop_ghz = 350.0;
        double subband_width_ghz = 0.1;
        double stationary_safe_width_ghz = 1.0;
        bool operator==(const BandCfg&) const = default;
    };
    struct ClustersCfg {
        int count_sb = 5;
        int count_mb = 3;
        double mean_interarrival_sb_ns = 2.73;
        double mean_interarrival_mb_ns = 2.33;
        double decay_db_per_ns = 3.0;
        double shadow_std_db = 3.0;
        double rician_k = 2.0;
        double center_elevation_std_deg = 10.0;
        std::optional<double> fixed_r_tx;
        bool operator==(const ClustersCfg&) const = default;
    };
    struct AngleSpreadCfg {
        double mean_tx_elevation_deg = 1.2;
        double mean_tx_azimuth_deg = 1.7;
        double mean_rx_elevation_deg = 1.4;
        double mean_rx_azimuth_deg = 2.8;
        double freq_exponent = 1.2;
        std::optional<double> mean_toa_ns;
        bool operator==(const AngleSpreadCfg&) const = default;
    };
    struct RaysCfg {
        int per_sb = 400;
        int per_mb = 400;
        bool operator==(const RaysCfg&) const = default;
    };
    struct OutputsCfg {
        std::vector<std::array<int, 2>> pairs = {{1, 1}};
        std::vector<double> times_s = {0.0};
        std::vector<int> subbands; // empty: center sub-band only
        double ctf_spacing_mhz = 10.0;
        double psd_bin_ns = 0.05;
        bool operator==(const OutputsCfg&) const = default;
    };
    struct StatsCfg {
        int mc_replicas = 200;
        double stationarity_threshold = 0.9;
        int stationarity_seeds = 100;
        double psd_sample_spacing_ghz = 0.5;
        int lag_points = 41;
        double lag_max_s = 0.1;
        int ccf_max_spacings = 10;
        bool operator==(const StatsCfg&) const = default;
    };

    std::string preset;                 // name of the preset this grew from
    std::string model = "simulation";   // or "theoretical"
    std::uint64_t seed = 1;
    ArrayCfg tx, rx;
    LosCfg los;
    MotionCfg motion;
    BandCfg band;
    ClustersCfg clusters;
    AngleSpreadCfg angle_spread;
    RaysCfg rays;
    std::string surface_material = "painted_wall";
    std::optional<std::string> surface_material_file; // overrides the built-in table
    OutputsCfg outputs;
    StatsCfg stats;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Material table from a JSON file: { "<key>": {"height_std_mm": ...,
/// "corr_length_mm": ..., "extent_x_mm": ..., "extent_y_mm": ...}, ... }.
inline std::map<std::string, SurfaceParams> load_material_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open material file: " + path);
    nlohmann::json j;
    in >> j;
    if (!j.is_object())
        throw std::invalid_argument("material file must hold an object: " + path);
    std::map<std::string, SurfaceParams> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& m = it.value();
        SurfaceParams params;
        params.height_std = m.at("height_std_mm").get<double>() * mm;
        params.corr_length = m.at("corr_length_mm").get<double>() * mm;
        params.extent_x = m.value("extent_x_mm", 10.0 * m.at("corr_length_mm").get<double>()) * mm;
        params.extent_y = m.value("extent_y_mm", 10.0 * m.at("corr_length_mm").get<double>()) * mm;
        if (params.height_std <= 0.0 || params.corr_length <= 0.0)
            throw std::invalid_argument("material " + it.key() +
                                        ": dimensions must be > 0");
        out[it.key()] = params;
    }
    return out;
}

/// Engine-facing scenario in SI units (meters, seconds, Hz, radians).
struct Scenario {
    ArrayGeometry tx, rx;
    LosGeometry los;
    Motion motion;
    SubBandPlan band;
    ClusterParams clusters;
    AngleSigmas mean_sigmas;      // means of the per-cluster sigma draws
    double freq_exponent = 1.2;
    std::optional<double> mean_toa; // seconds
    int rays_sb = 400;
    int rays_mb = 400;
    RayModel ray_model = RayModel::simulation_mea;
    SurfaceParams surface;
    std::uint64_t seed = 1;

    std::vector<std::pair<int, int>> out_pairs;
    std::vector<double> out_times;
    std::vector<int> out_subbands;
    double ctf_spacing = 10.0 * mhz;
    double psd_bin = 0.05 * ns;
    int mc_replicas = 200;
    double stationarity_threshold = 0.9;
    int stationarity_seeds = 100;
    double psd_sample_spacing = 0.5 * ghz;
    int lag_points = 41;
    double lag_max = 0.1;
    int ccf_max_spacings = 10;

    /// Anchor frequency of the sigma scaling law (and of the relative-delay
    /// rescale when a mean time of arrival is configured).
    double sigma_ref_freq() const { return band.start_freq; }
};

namespace detail {

[[noreturn]] inline void config_error(const std::string& path, const std::string& what)
{
    throw std::invalid_argument("config: " + path + ": " + what);
}

inline void check_keys(const nlohmann::json& j, const std::string& path,
                       const std::set<std::string>& allowed)
{
    if (!j.is_object())
        config_error(path, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            config_error(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
}

template <typename T>
void read_field(const nlohmann::json& j, const std::string& path, const char* key, T& out)
{
    if (!j.contains(key))
        return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        config_error(path.empty() ? key : path + "." + key, e.what());
    }
}

inline void read_optional(const nlohmann::json& j, const std::string& path,
                          const char* key, std::optional<double>& out)
{
    if (!j.contains(key))
        return;
    if (j.at(key).is_null()) {
        out.reset();
        return;
    }
    try {
        out = j.at(key).get<double>();
    } catch (const nlohmann::json::exception& e) {
        config_error(path.empty() ? key : path + "." + key, e.what());
    }
}

} // namespace detail

inline void validate_config(const ScenarioConfig& c)
{
    using detail::config_error;
    auto check_array = [&](const ScenarioConfig::ArrayCfg& a, const std::string& path) {
        if (a.elements < 1)
            config_error(path + ".elements", "must be >= 1");
        if (a.spacing_m && *a.spacing_m <= 0.0)
            config_error(path + ".spacing_m", "must be > 0");
        if (a.elevation_deg < -90.0 || a.elevation_deg > 90.0)
            config_error(path + ".elevation_deg", "must be in [-90, 90]");
    };
    check_array(c.tx, "arrays.tx");
    check_array(c.rx, "arrays.rx");

    if (c.model != "simulation" && c.model != "theoretical")
        config_error("model", "must be \"simulation\" or \"theoretical\"");
    if (c.los.distance_m <= 0.0)
        config_error("los.distance_m", "must be > 0");
    if (c.motion.speed_mps < 0.0)
        config_error("motion.speed_mps", "must be >= 0");
    if (c.band.stop_ghz <= c.band.start_ghz)
        config_error("band.stop_ghz", "must exceed band.start_ghz");
    if (c.band.subband_width_ghz <= 0.0)
        config_error("band.subband_width_ghz", "must be > 0");
    if (c.band.subband_width_ghz > c.band.stationary_safe_width_ghz)
        config_error("band.subband_width_ghz",
                     "must not exceed band.stationary_safe_width_ghz");

    if (c.clusters.count_sb < 0)
        config_error("clusters.count_sb", "must be >= 0");
    if (c.clusters.count_mb < 0)
        config_error("clusters.count_mb", "must be >= 0");
    if (c.clusters.count_sb + c.clusters.count_mb == 0 && c.clusters.rician_k <= 0.0)
        config_error("clusters", "no propagation paths: zero clusters and zero K");
    if (c.clusters.mean_interarrival_sb_ns <= 0.0)
        config_error("clusters.mean_interarrival_sb_ns", "must be > 0");
    if (c.clusters.mean_interarrival_mb_ns <= 0.0)
        config_error("clusters.mean_interarrival_mb_ns", "must be > 0");
    if (c.clusters.shadow_std_db < 0.0)
        config_error("clusters.shadow_std_db", "must be >= 0");
    if (c.clusters.rician_k < 0.0)
        config_error("clusters.rician_k", "must be >= 0");
    if (c.clusters.center_elevation_std_deg <= 0.0)
        config_error("clusters.center_elevation_std_deg", "must be > 0");
    if (c.clusters.fixed_r_tx &&
        (*c.clusters.fixed_r_tx <= 0.0 || *c.clusters.fixed_r_tx >= 1.0))
        config_error("clusters.fixed_r_tx", "must be inside (0, 1)");

    if (c.angle_spread.mean_tx_elevation_deg <= 0.0 ||
        c.angle_spread.mean_tx_azimuth_deg <= 0.0 ||
        c.angle_spread.mean_rx_elevation_deg <= 0.0 ||
        c.angle_spread.mean_rx_azimuth_deg <= 0.0)
        config_error("angle_spread", "means must be > 0");
    if (c.angle_spread.mean_toa_ns && *c.angle_spread.mean_toa_ns <= 0.0)
        config_error("angle_spread.mean_toa_ns", "must be > 0");

    if (c.rays.per_sb < 1)
        config_error("rays.per_sb", "must be >= 1");
    if (c.rays.per_mb < 1)
        config_error("rays.per_mb", "must be >= 1");
    if (c.model == "simulation") {
        auto square = [](int n) {
            int r = static_cast<int>(std::lround(std::sqrt(double(n))));
            return r * r == n;
        };
        if (!square(c.rays.per_sb))
            config_error("rays.per_sb", "must be a perfect square in simulation mode");
        if (!square(c.rays.per_mb))
            config_error("rays.per_mb", "must be a perfect square in simulation mode");
    }

    if (c.surface_material_file) {
        const auto table = load_material_file(*c.surface_material_file);
        if (!table.count(c.surface_material))
            config_error("surface_material",
                         "not present in " + *c.surface_material_file);
    } else {
        material_by_key(c.surface_material); // throws on unknown key
    }

    const auto band =
        SubBandPlan::make(c.band.start_ghz * ghz, c.band.stop_ghz * ghz,
                          c.band.subband_width_ghz * ghz);
    if (c.outputs.pairs.empty())
        config_error("outputs.pairs", "must name at least one antenna pair");
    for (const auto& pq : c.outputs.pairs) {
        if (pq[0] < 1 || pq[0] > c.tx.elements)
            config_error("outputs.pairs", "transmit index out of range");
        if (pq[1] < 1 || pq[1] > c.rx.elements)
            config_error("outputs.pairs", "receive index out of range");
    }
    for (double t : c.outputs.times_s)
        if (t < 0.0)
            config_error("outputs.times_s", "must be >= 0");
    for (int sb : c.outputs.subbands)
        if (sb < 0 || sb >= band.count)
            config_error("outputs.subbands", "index out of range");
    if (c.outputs.ctf_spacing_mhz <= 0.0)
        config_error("outputs.ctf_spacing_mhz", "must be > 0");
    if (c.outputs.psd_bin_ns <= 0.0)
        config_error("outputs.psd_bin_ns", "must be > 0");

    if (c.stats.mc_replicas < 1)
        config_error("stats.mc_replicas", "must be >= 1");
    if (c.stats.stationarity_threshold <= 0.0 || c.stats.stationarity_threshold >= 1.0)
        config_error("stats.stationarity_threshold", "must be inside (0, 1)");
    if (c.stats.stationarity_seeds < 1)
        config_error("stats.stationarity_seeds", "must be >= 1");
    if (c.stats.psd_sample_spacing_ghz < c.band.subband_width_ghz)
        config_error("stats.psd_sample_spacing_ghz", "must be >= the sub-band width");
    if (c.stats.lag_points < 2)
        config_error("stats.lag_points", "must be >= 2");
    if (c.stats.lag_max_s <= 0.0)
        config_error("stats.lag_max_s", "must be > 0");
    if (c.stats.ccf_max_spacings < 1)
        config_error("stats.ccf_max_spacings", "must be >= 1");
}

inline Scenario to_scenario(const ScenarioConfig& c)
{
    validate_config(c);
    Scenario s;
    const double default_spacing = speed_of_light / 325e9 / 2.0;
    s.tx = ArrayGeometry{c.tx.elements, c.tx.spacing_m.value_or(default_spacing),
                         deg2rad(c.tx.elevation_deg), deg2rad(c.tx.azimuth_deg)};
    s.rx = ArrayGeometry{c.rx.elements, c.rx.spacing_m.value_or(default_spacing),
                         deg2rad(c.rx.elevation_deg), deg2rad(c.rx.azimuth_deg)};
    s.los = LosGeometry{c.los.distance_m, deg2rad(c.los.elevation_deg),
                        deg2rad(c.los.azimuth_deg)};
    s.motion = Motion{c.motion.speed_mps, deg2rad(c.motion.elevation_deg),
                      deg2rad(c.motion.azimuth_deg)};
    s.band = SubBandPlan::make(c.band.start_ghz * ghz, c.band.stop_ghz * ghz,
                               c.band.subband_width_ghz * ghz);
    s.clusters.count_sb = c.clusters.count_sb;
    s.clusters.count_mb = c.clusters.count_mb;
    s.clusters.mean_interarrival_sb = c.clusters.mean_interarrival_sb_ns * ns;
    s.clusters.mean_interarrival_mb = c.clusters.mean_interarrival_mb_ns * ns;
    s.clusters.decay_db_per_sec = c.clusters.decay_db_per_ns / ns;
    s.clusters.shadow_std_db = c.clusters.shadow_std_db;
    s.clusters.rician_k = c.clusters.rician_k;
    s.clusters.center_elevation_std = deg2rad(c.clusters.center_elevation_std_deg);
    s.clusters.fixed_r_tx = c.clusters.fixed_r_tx;
    s.mean_sigmas = AngleSigmas{deg2rad(c.angle_spread.mean_tx_elevation_deg),
                                deg2rad(c.angle_spread.mean_tx_azimuth_deg),
                                deg2rad(c.angle_spread.mean_rx_elevation_deg),
                                deg2rad(c.angle_spread.mean_rx_azimuth_deg)};
    s.freq_exponent = c.angle_spread.freq_exponent;
    if (c.angle_spread.mean_toa_ns)
        s.mean_toa = *c.angle_spread.mean_toa_ns * ns;
    s.rays_sb = c.rays.per_sb;
    s.rays_mb = c.rays.per_mb;
    s.ray_model = (c.model == "simulation") ? RayModel::simulation_mea
                                            : RayModel::theoretical_mc;
    if (c.surface_material_file)
        s.surface = load_material_file(*c.surface_material_file).at(c.surface_material);
    else
        s.surface = material_by_key(c.surface_material);
    s.seed = c.seed;

    for (const auto& pq : c.outputs.pairs)
        s.out_pairs.emplace_back(pq[0], pq[1]);
    s.out_times = c.outputs.times_s;
    s.out_subbands = c.outputs.subbands;
    if (s.out_subbands.empty())
        s.out_subbands.push_back(s.band.count / 2);
    s.ctf_spacing = c.outputs.ctf_spacing_mhz * mhz;
    s.psd_bin = c.outputs.psd_bin_ns * ns;
    s.mc_replicas = c.stats.mc_replicas;
    s.stationarity_threshold = c.stats.stationarity_threshold;
    s.stationarity_seeds = c.stats.stationarity_seeds;
    s.psd_sample_spacing = c.stats.psd_sample_spacing_ghz * ghz;
    s.lag_points = c.stats.lag_points;
    s.lag_max = c.stats.lag_max_s;
    s.ccf_max_spacings = c.stats.ccf_max_spacings;
    return s;
}

// ---------------------------------------------------------------- JSON -----

inline nlohmann::json config_to_json(const ScenarioConfig& c)
{
    using nlohmann::json;
    auto opt = [](const std::optional<double>& v) {
        return v ? json(*v) : json(nullptr);
    };
    json j;
    j["preset"] = c.preset;
    j["model"] = c.model;
    j["seed"] = c.seed;
    j["arrays"] = {
        {"tx",
         {{"elements", c.tx.elements},
          {"spacing_m", opt(c.tx.spacing_m)},
          {"elevation_deg", c.tx.elevation_deg},
          {"azimuth_deg", c.tx.azimuth_deg}}},
        {"rx",
         {{"elements", c.rx.elements},
          {"spacing_m", opt(c.rx.spacing_m)},
          {"elevation_deg", c.rx.elevation_deg},
          {"azimuth_deg", c.rx.azimuth_deg}}},
    };
    j["los"] = {{"distance_m", c.los.distance_m},
                {"elevation_deg", c.los.elevation_deg},
                {"azimuth_deg", c.los.azimuth_deg}};
    j["motion"] = {{"speed_mps", c.motion.speed_mps},
                   {"elevation_deg", c.motion.elevation_deg},
                   {"azimuth_deg", c.motion.azimuth_deg}};
    j["band"] = {{"start_ghz", c.band.start_ghz},
                 {"stop_ghz", c.band.stop_ghz},
                 {"subband_width_ghz", c.band.subband_width_ghz},
                 {"stationary_safe_width_ghz", c.band.stationary_safe_width_ghz}};
    j["clusters"] = {{"count_sb", c.clusters.count_sb},
                     {"count_mb", c.clusters.count_mb},
                     {"mean_interarrival_sb_ns", c.clusters.mean_interarrival_sb_ns},
                     {"mean_interarrival_mb_ns", c.clusters.mean_interarrival_mb_ns},
                     {"decay_db_per_ns", c.clusters.decay_db_per_ns},
                     {"shadow_std_db", c.clusters.shadow_std_db},
                     {"rician_k", c.clusters.rician_k},
                     {"center_elevation_std_deg", c.clusters.center_elevation_std_deg},
                     {"fixed_r_tx", opt(c.clusters.fixed_r_tx)}};
    j["angle_spread"] = {{"mean_tx_elevation_deg", c.angle_spread.mean_tx_elevation_deg},
                         {"mean_tx_azimuth_deg", c.angle_spread.mean_tx_azimuth_deg},
                         {"mean_rx_elevation_deg", c.angle_spread.mean_rx_elevation_deg},
                         {"mean_rx_azimuth_deg", c.angle_spread.mean_rx_azimuth_deg},
                         {"freq_exponent", c.angle_spread.freq_exponent},
                         {"mean_toa_ns", opt(c.angle_spread.mean_toa_ns)}};
    j["rays"] = {{"per_sb", c.rays.per_sb}, {"per_mb", c.rays.per_mb}};
    j["surface_material"] = c.surface_material;
    j["surface_material_file"] =
        c.surface_material_file ? nlohmann::json(*c.surface_material_file)
                                : nlohmann::json(nullptr);
    j["outputs"] = {{"pairs", c.outputs.pairs},
                    {"times_s", c.outputs.times_s},
                    {"subbands", c.outputs.subbands},
                    {"ctf_spacing_mhz", c.outputs.ctf_spacing_mhz},
                    {"psd_bin_ns", c.outputs.psd_bin_ns}};
    j["stats"] = {{"mc_replicas", c.stats.mc_replicas},
                  {"stationarity_threshold", c.stats.stationarity_threshold},
                  {"stationarity_seeds", c.stats.stationarity_seeds},
                  {"psd_sample_spacing_ghz", c.stats.psd_sample_spacing_ghz},
                  {"lag_points", c.stats.lag_points},
                  {"lag_max_s", c.stats.lag_max_s},
                  {"ccf_max_spacings", c.stats.ccf_max_spacings}};
    return j;
}

inline ScenarioConfig config_from_json(const nlohmann::json& j)
{
    using detail::check_keys;
    using detail::read_field;
    using detail::read_optional;
    check_keys(j, "", {"preset", "model", "seed", "arrays", "los", "motion", "band",
                       "clusters", "angle_spread", "rays", "surface_material",
                       "surface_material_file", "outputs", "stats", "_provenance"});
    ScenarioConfig c;
    read_field(j, "", "preset", c.preset);
    read_field(j, "", "model", c.model);
    read_field(j, "", "seed", c.seed);
    if (j.contains("arrays")) {
        const auto& arrays = j.at("arrays");
        check_keys(arrays, "arrays", {"tx", "rx"});
        auto read_array = [&](const char* side, ScenarioConfig::ArrayCfg& a) {
            if (!arrays.contains(side))
                return;
            const auto& ja = arrays.at(side);
            const std::string path = std::string("arrays.") + side;
            check_keys(ja, path,
                       {"elements", "spacing_m", "elevation_deg", "azimuth_deg"});
            read_field(ja, path, "elements", a.elements);
            read_optional(ja, path, "spacing_m", a.spacing_m);
            read_field(ja, path, "elevation_deg", a.elevation_deg);
            read_field(ja, path, "azimuth_deg", a.azimuth_deg);
        };
        read_array("tx", c.tx);
        read_array("rx", c.rx);
    }
    if (j.contains("los")) {
        const auto& jl = j.at("los");
        check_keys(jl, "los", {"distance_m", "elevation_deg", "azimuth_deg"});
        read_field(jl, "los", "distance_m", c.los.distance_m);
        read_field(jl, "los", "elevation_deg", c.los.elevation_deg);
        read_field(jl, "los", "azimuth_deg", c.los.azimuth_deg);
    }
    if (j.contains("motion")) {
        const auto& jm = j.at("motion");
        check_keys(jm, "motion", {"speed_mps", "elevation_deg", "azimuth_deg"});
        read_field(jm, "motion", "speed_mps", c.motion.speed_mps);
        read_field(jm, "motion", "elevation_deg", c.motion.elevation_deg);
        read_field(jm, "motion", "azimuth_deg", c.motion.azimuth_deg);
    }
    if (j.contains("band")) {
        const auto& jb = j.at("band");
        check_keys(jb, "band",
                   {"start_ghz", "stop_ghz", "subband_width_ghz",
                    "stationary_safe_width_ghz"});
        read_field(jb, "band", "start_ghz", c.band.start_ghz);
        read_field(jb, "band", "stop_ghz", c.band.stop_ghz);
        read_field(jb, "band", "subband_width_ghz", c.band.subband_width_ghz);
        read_field(jb, "band", "stationary_safe_width_ghz",
                   c.band.stationary_safe_width_ghz);
    }
    if (j.contains("clusters")) {
        const auto& jc = j.at("clusters");
        check_keys(jc, "clusters",
                   {"count_sb", "count_mb", "mean_interarrival_sb_ns",
                    "mean_interarrival_mb_ns", "decay_db_per_ns", "shadow_std_db",
                    "rician_k", "center_elevation_std_deg", "fixed_r_tx"});
        read_field(jc, "clusters", "count_sb", c.clusters.count_sb);
        read_field(jc, "clusters", "count_mb", c.clusters.count_mb);
        read_field(jc, "clusters", "mean_interarrival_sb_ns",
                   c.clusters.mean_interarrival_sb_ns);
        read_field(jc, "clusters", "mean_interarrival_mb_ns",
                   c.clusters.mean_interarrival_mb_ns);
        read_field(jc, "clusters", "decay_db_per_ns", c.clusters.decay_db_per_ns);
        read_field(jc, "clusters", "shadow_std_db", c.clusters.shadow_std_db);
        read_field(jc, "clusters", "rician_k", c.clusters.rician_k);
        read_field(jc, "clusters", "center_elevation_std_deg",
                   c.clusters.center_elevation_std_deg);
        read_optional(jc, "clusters", "fixed_r_tx", c.clusters.fixed_r_tx);
    }
    if (j.contains("angle_spread")) {
        const auto& ja = j.at("angle_spread");
        check_keys(ja, "angle_spread",
                   {"mean_tx_elevation_deg", "mean_tx_azimuth_deg",
                    "mean_rx_elevation_deg", "mean_rx_azimuth_deg", "freq_exponent",
                    "mean_toa_ns"});
        read_field(ja, "angle_spread", "mean_tx_elevation_deg",
                   c.angle_spread.mean_tx_elevation_deg);
        read_field(ja, "angle_spread", "mean_tx_azimuth_deg",
                   c.angle_spread.mean_tx_azimuth_deg);
        read_field(ja, "angle_spread", "mean_rx_elevation_deg",
                   c.angle_spread.mean_rx_elevation_deg);
        read_field(ja, "angle_spread", "mean_rx_azimuth_deg",
                   c.angle_spread.mean_rx_azimuth_deg);
        read_field(ja, "angle_spread", "freq_exponent", c.angle_spread.freq_exponent);
        read_optional(ja, "angle_spread", "mean_toa_ns", c.angle_spread.mean_toa_ns);
    }
    if (j.contains("rays")) {
        const auto& jr = j.at("rays");
        check_keys(jr, "rays", {"per_sb", "per_mb"});
        read_field(jr, "rays", "per_sb", c.rays.per_sb);
        read_field(jr, "rays", "per_mb", c.rays.per_mb);
    }
    read_field(j, "", "surface_material", c.surface_material);
    if (j.contains("surface_material_file")) {
        if (j.at("surface_material_file").is_null()) {
            c.surface_material_file.reset();
        } else {
            try {
                c.surface_material_file =
                    j.at("surface_material_file").get<std::string>();
            } catch (const nlohmann::json::exception& e) {
                detail::config_error("surface_material_file", e.what());
            }
        }
    }
    if (j.contains("outputs")) {
        const auto& jo = j.at("outputs");
        check_keys(jo, "outputs",
                   {"pairs", "times_s", "subbands", "ctf_spacing_mhz", "psd_bin_ns"});
        read_field(jo, "outputs", "pairs", c.outputs.pairs);
        read_field(jo, "outputs", "times_s", c.outputs.times_s);
        read_field(jo, "outputs", "subbands", c.outputs.subbands);
        read_field(jo, "outputs", "ctf_spacing_mhz", c.outputs.ctf_spacing_mhz);
        read_field(jo, "outputs", "psd_bin_ns", c.outputs.psd_bin_ns);
    }
    if (j.contains("stats")) {
        const auto& js = j.at("stats");
        check_keys(js, "stats",
                   {"mc_replicas", "stationarity_threshold", "stationarity_seeds",
                    "psd_sample_spacing_ghz", "lag_points", "lag_max_s",
                    "ccf_max_spacings"});
        read_field(js, "stats", "mc_replicas", c.stats.mc_replicas);
        read_field(js, "stats", "stationarity_threshold",
                   c.stats.stationarity_threshold);
        read_field(js, "stats", "stationarity_seeds", c.stats.stationarity_seeds);
        read_field(js, "stats", "psd_sample_spacing_ghz",
                   c.stats.psd_sample_spacing_ghz);
        read_field(js, "stats", "lag_points", c.stats.lag_points);
        read_field(js, "stats", "lag_max_s", c.stats.lag_max_s);
        read_field(js, "stats", "ccf_max_spacings", c.stats.ccf_max_spacings);
    }
    validate_config(c);
    return c;
}

// -------------------------------------------------------------- presets ----

inline ScenarioConfig preset_config(const std::string& name);

/// Names and one-line descriptions of the built-in presets.
inline const std::vector<std::pair<std::string, std::string>>& preset_catalog()
{
    static const std::vector<std::pair<std::string, std::string>> catalog = {
        {"default", "desk-scale indoor scenario with library defaults"},
        {"fig4", "time-ACF reference: 3 m link, 256-element arrays, one single-bounce "
                 "cluster pinned at r_tx = 0.4, moving receiver"},
        {"fig5", "spatial-CCF reference: fig4 with a tilted receive array"},
        {"fcf", "frequency-correlation reference: static link, full cluster mix, "
                "0.3 ns mean ray arrival offset"},
        {"fig6", "stationary-bandwidth reference: fcf with a moving receiver and a "
                 "25 GHz analysis band"},
        {"fig7", "angle-spread CDF reference: 2.7 m static link, single cluster"},
    };
    return catalog;
}

inline ScenarioConfig preset_config(const std::string& name)
{
    ScenarioConfig c;
    c.preset = name;
    if (name == "default") {
        return c;
    }
    if (name == "fig4" || name == "fig5") {
        c.tx.elements = 256;
        c.rx.elements = 256;
        c.los.distance_m = 3.0;
        c.motion = {0.1, 0.0, 60.0};
        c.clusters.count_sb = 1;
        c.clusters.count_mb = 0;
        c.clusters.rician_k = 0.0;
        c.clusters.fixed_r_tx = 0.4;
        c.outputs.pairs = {{1, 1}, {1, 200}};
        c.outputs.times_s = {0.0, 5.0, 10.0};
        if (name == "fig5") {
            c.rx.azimuth_deg = 60.0;
            c.rx.elevation_deg = 45.0;
            c.outputs.times_s = {0.0, 10.0};
        }
        return c;
    }
    if (name == "fcf" || name == "fig6") {
        c.los.distance_m = 3.0;
        c.motion.speed_mps = (name == "fig6") ? 0.1 : 0.0;
        c.clusters.rician_k = 0.0;
        c.angle_spread.mean_toa_ns = 0.3;
        if (name == "fig6") {
            c.band.stop_ghz = 325.0;      // 25 GHz analysis band anchored at the start
            c.outputs.psd_bin_ns = 0.075; // delay resolution of the profile estimator
        }
        return c;
    }
    if (name == "fig7") {
        c.los.distance_m = 2.7;
        c.motion.speed_mps = 0.0;
        c.band.stop_ghz = 301.0;
        c.clusters.count_sb = 1;
        c.clusters.count_mb = 0;
        c.clusters.rician_k = 0.0;
        c.clusters.fixed_r_tx = 0.4;
        c.angle_spread.mean_rx_azimuth_deg = 1.4;
        return c;
    }
    throw std::invalid_argument("unknown preset: " + name);
}

// ------------------------------------------------------------ provenance ---

namespace detail {

inline void collect_leaves(const nlohmann::json& j, const std::string& prefix,
                           std::map<std::string, nlohmann::json>& out)
{
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            collect_leaves(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(),
                           out);
    } else {
        out[prefix] = j;
    }
}

} // namespace detail

/// Serialize with a per-field provenance block: "default" when the value
/// equals the library default, "preset:<name>" when it matches the config's
/// originating preset, "user" otherwise.
inline nlohmann::json emit_config(const ScenarioConfig& c)
{
    nlohmann::json j = config_to_json(c);
    std::map<std::string, nlohmann::json> values, defaults, preset_values;
    detail::collect_leaves(j, "", values);
    detail::collect_leaves(config_to_json(ScenarioConfig{}), "", defaults);
    const bool has_preset = !c.preset.empty() && c.preset != "default";
    if (has_preset)
        detail::collect_leaves(config_to_json(preset_config(c.preset)), "", preset_values);

    nlohmann::json prov;
    for (const auto& [path, value] : values) {
        if (path == "preset" || path == "seed")
            continue;
        if (defaults.count(path) && defaults.at(path) == value)
            prov[path] = "default";
        else if (has_preset && preset_values.count(path) && preset_values.at(path) == value)
            prov[path] = "preset:" + c.preset;
        else
            prov[path] = "user";
    }
    j["_provenance"] = prov;
    return j;
}

inline ScenarioConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("config parse error in " + path + ": " + e.what());
    }
    return config_from_json(j);
}

inline void save_config(const ScenarioConfig& c, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write config file: " + path);
    out << emit_config(c).dump(2) << "\n";
}

} // namespace thzgbsm

#endif
