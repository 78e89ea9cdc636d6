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

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thzgbsm/thzgbsm.hpp"

namespace fs = std::filesystem;
using namespace thzgbsm;

namespace {

struct RunContext {
    ScenarioConfig config;
    Scenario scenario;
    OutputMeta meta;
    std::string out_dir;
    std::string format = "csv"; // csv | json
    int threads = 1;

    std::string artifact_path(const std::string& stem) const
    {
        return (fs::path(out_dir) / (stem + "." + format)).string();
    }

    void write(const std::string& stem, const OutputMeta& m, const Table& t) const
    {
        if (format == "json")
            write_table_json(artifact_path(stem), m, t);
        else
            write_table_csv(artifact_path(stem), m, t);
    }
};

int resolve_threads(int requested)
{
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("THZ_GBSM_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0)
            return n;
    }
    return 1;
}

RunContext make_context(const std::string& config_path, const std::string& preset,
                        std::optional<std::uint64_t> seed, std::optional<int> mc,
                        const std::string& out_dir, const std::string& format,
                        int threads)
{
    RunContext ctx;
    ctx.config = config_path.empty() ? preset_config(preset) : load_config(config_path);
    if (seed)
        ctx.config.seed = *seed;
    if (mc)
        ctx.config.stats.mc_replicas = *mc;
    ctx.scenario = to_scenario(ctx.config);
    ctx.meta.seed = ctx.config.seed;
    ctx.meta.config_sha256 = sha256_hex(emit_config(ctx.config).dump(2));
    ctx.out_dir = out_dir;
    ctx.format = format;
    ctx.threads = resolve_threads(threads);
    fs::create_directories(out_dir);
    save_config(ctx.config, (fs::path(out_dir) / "config.json").string());
    return ctx;
}

// --------------------------------------------------------------- generate

void run_generate(const RunContext& ctx)
{
    const Scenario& s = ctx.scenario;
    const Realization real(s);

    struct WorkItem {
        int p, q, subband;
        double t;
    };
    std::vector<WorkItem> items;
    for (const auto& [p, q] : s.out_pairs)
        for (double t : s.out_times)
            for (int sb : s.out_subbands)
                items.push_back({p, q, sb, t});

    std::vector<SubBandCir> cirs(items.size());
    parallel_for(items.size(), ctx.threads, [&](std::size_t i) {
        cirs[i] = cir_assemble(real, items[i].p, items[i].q, items[i].subband,
                               items[i].t);
    });

    Table cir_table;
    cir_table.columns = {"p", "q", "subband_index", "t", "tap_index",
                         "delay_s", "re", "im"};
    for (const SubBandCir& cir : cirs) {
        long long tap_index = 0;
        for (const CirTap& tap : cir.taps) {
            cir_table.rows.push_back({static_cast<long long>(cir.tx_index),
                                      static_cast<long long>(cir.rx_index),
                                      static_cast<long long>(cir.subband_index),
                                      cir.time, tap_index++, tap.delay,
                                      tap.amplitude.real(), tap.amplitude.imag()});
        }
    }
    ctx.write("cir", ctx.meta, cir_table);

    Table ctf_table;
    ctf_table.columns = {"p", "q", "t", "freq_hz", "re", "im"};
    for (const SubBandCir& cir : cirs) {
        const auto grid = ctf_grid(s.band, cir.subband_index, s.ctf_spacing);
        for (const CtfSample& sample : ctf_subband(cir, s.band, grid))
            ctf_table.rows.push_back({static_cast<long long>(cir.tx_index),
                                      static_cast<long long>(cir.rx_index), cir.time,
                                      sample.freq, sample.value.real(),
                                      sample.value.imag()});
    }
    ctx.write("ctf", ctx.meta, ctf_table);
}

// ------------------------------------------------------------------ stats

OutputMeta curve_meta(const RunContext& ctx, const CorrelationResult& r,
                      const char* kind)
{
    OutputMeta meta = ctx.meta;
    meta.extra.emplace_back("kind", kind);
    meta.extra.emplace_back("normalization", "zero_lag_abs");
    meta.extra.emplace_back("norm_factor", format_double(r.norm_factor));
    meta.extra.emplace_back("p", std::to_string(r.p));
    meta.extra.emplace_back("q", std::to_string(r.q));
    meta.extra.emplace_back("t", format_double(r.t));
    meta.extra.emplace_back("freq_hz", format_double(r.freq));
    if (!r.quadrature_converged)
        meta.extra.emplace_back("accuracy_warning", "quadrature cap reached");
    return meta;
}

Table correlation_table(const CorrelationResult& r)
{
    Table table;
    table.columns = {"lag", "re", "im", "abs", "raw_re", "raw_im"};
    const bool with_se = !r.stderrs.empty();
    if (with_se)
        table.columns.push_back("stderr");
    for (std::size_t i = 0; i < r.lags.size(); ++i) {
        std::vector<CellValue> row = {r.lags[i],          r.values[i].real(),
                                      r.values[i].imag(), std::abs(r.values[i]),
                                      r.raw[i].real(),    r.raw[i].imag()};
        if (with_se)
            row.push_back(r.stderrs[i]);
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::vector<double> acf_lags(const Scenario& s)
{
    std::vector<double> lags;
    for (int i = 0; i < s.lag_points; ++i)
        lags.push_back(s.lag_max * i / (s.lag_points - 1));
    return lags;
}

void run_stats(const RunContext& ctx, bool do_acf, bool do_ccf, bool do_fcf,
               bool do_psd, bool do_stationary, bool do_angle_cdf, bool do_rmsds,
               int fcf_points, double fcf_step_ghz)
{
    const Scenario& s = ctx.scenario;
    const bool theoretical = (s.ray_model == RayModel::theoretical_mc);
    const Realization real(s);

    if (do_acf) {
        const auto lags = acf_lags(s);
        const double f = s.band.centers[static_cast<std::size_t>(s.out_subbands.front())];
        for (std::size_t pi = 0; pi < s.out_pairs.size(); ++pi) {
            const auto [p, q] = s.out_pairs[pi];
            for (std::size_t ti = 0; ti < s.out_times.size(); ++ti) {
                const double t = s.out_times[ti];
                const std::string suffix = "_p" + std::to_string(p) + "_q" +
                                           std::to_string(q) + "_ti" +
                                           std::to_string(ti);
                const auto sim = acf_sim(real, p, q, t, lags, f);
                ctx.write("acf_sim" + suffix, curve_meta(ctx, sim, "acf_sim"),
                          correlation_table(sim));
                EmpiricalSpec spec;
                spec.axis = CorrelationAxis::time;
                spec.p = p;
                spec.q = q;
                spec.t = t;
                spec.freq = f;
                spec.lags = lags;
                spec.replicas = s.mc_replicas;
                const auto emp = empirical_correlation(real, spec);
                ctx.write("acf_emp" + suffix, curve_meta(ctx, emp, "acf_empirical"),
                          correlation_table(emp));
                if (theoretical) {
                    const auto theo = acf_theoretical(real, p, q, t, lags, f);
                    ctx.write("acf_theory" + suffix,
                              curve_meta(ctx, theo, "acf_theoretical"),
                              correlation_table(theo));
                }
            }
        }
    }

    if (do_ccf) {
        const std::vector<double> anchors = {s.band.centers.front(),
                                             s.band.centers.back()};
        for (std::size_t fi = 0; fi < anchors.size(); ++fi) {
            for (std::size_t ti = 0; ti < s.out_times.size(); ++ti) {
                const auto [p, q] = s.out_pairs.front();
                const double t = s.out_times[ti];
                const std::string suffix =
                    "_f" + std::to_string(fi) + "_ti" + std::to_string(ti);
                const auto sim =
                    ccf_spatial_sim(real, p, q, t, anchors[fi], s.ccf_max_spacings);
                ctx.write("ccf_sim" + suffix, curve_meta(ctx, sim, "ccf_sim"),
                          correlation_table(sim));
                if (theoretical) {
                    const auto theo = ccf_spatial_theoretical(real, p, q, t, anchors[fi],
                                                              s.ccf_max_spacings);
                    ctx.write("ccf_theory" + suffix,
                              curve_meta(ctx, theo, "ccf_theoretical"),
                              correlation_table(theo));
                }
            }
        }
    }

    if (do_fcf) {
        std::vector<double> dfreqs;
        for (int i = 0; i < fcf_points; ++i)
            dfreqs.push_back(i * fcf_step_ghz * ghz);
        // anchors with upward lag room inside the configured band
        const std::vector<double> anchors = {
            s.band.centers.front(),
            s.band.centers[static_cast<std::size_t>(s.band.count / 4)],
            s.band.centers[static_cast<std::size_t>(s.band.count / 2)]};
        const auto [p, q] = s.out_pairs.front();
        const double t = s.out_times.front();
        for (std::size_t fi = 0; fi < anchors.size(); ++fi) {
            std::vector<double> usable;
            for (double df : dfreqs)
                if (anchors[fi] + df <= s.band.upper_edge(s.band.count - 1))
                    usable.push_back(df);
            if (usable.size() < 2)
                continue;
            const auto fcf = fcf_sim(real, p, q, t, anchors[fi], usable);
            ctx.write("fcf_f" + std::to_string(fi), curve_meta(ctx, fcf, "fcf_sim"),
                      correlation_table(fcf));
        }
    }

    if (do_psd) {
        Table table;
        table.columns = {"p", "q", "subband_index", "t", "delay_s", "power"};
        for (const auto& [p, q] : s.out_pairs)
            for (double t : s.out_times)
                for (int sb : s.out_subbands) {
                    const auto psd = delay_psd(cir_assemble(real, p, q, sb, t), s.psd_bin);
                    for (const auto& [delay, power] : psd.bins)
                        table.rows.push_back({static_cast<long long>(p),
                                              static_cast<long long>(q),
                                              static_cast<long long>(sb), t, delay,
                                              power});
                }
        OutputMeta meta = ctx.meta;
        meta.extra.emplace_back("bin_width_s", format_double(s.psd_bin));
        ctx.write("delay_psd", meta, table);
    }

    if (do_stationary) {
        const auto [p, q] = s.out_pairs.front();
        const double t = s.out_times.front();
        std::vector<double> intervals(static_cast<std::size_t>(s.stationarity_seeds));
        parallel_for(intervals.size(), ctx.threads, [&](std::size_t i) {
            Scenario seeded = s;
            seeded.seed = s.seed + i;
            const Realization r(seeded);
            const auto [psds, axis] = band_psd_sweep(r, p, q, t);
            intervals[i] =
                stationary_interval(psds, axis, s.stationarity_threshold).samples.front();
        });
        Table per_seed;
        per_seed.columns = {"seed", "interval_hz"};
        for (std::size_t i = 0; i < intervals.size(); ++i)
            per_seed.rows.push_back(
                {static_cast<long long>(s.seed + i), intervals[i]});
        OutputMeta meta = ctx.meta;
        meta.extra.emplace_back("threshold", format_double(s.stationarity_threshold));
        meta.extra.emplace_back("anchor_hz", format_double(s.band.centers.front()));
        ctx.write("stationary_bandwidth", meta, per_seed);

        Table cdf_table;
        cdf_table.columns = {"interval_hz", "probability"};
        for (const auto& [value, prob] : empirical_cdf(intervals))
            cdf_table.rows.push_back({value, prob});
        ctx.write("stationary_bandwidth_cdf", meta, cdf_table);
    }

    if (do_angle_cdf) {
        const int per_realization =
            std::max(1, (s.clusters.count_sb * s.rays_sb +
                         s.clusters.count_mb * s.rays_mb));
        const int seeds =
            std::clamp(20000 / per_realization + 1, 1, 200);
        const auto samples = relative_angle_ensemble(s, seeds);
        Table table;
        table.columns = {"angle_rad", "probability"};
        for (const auto& [value, prob] : empirical_cdf(samples))
            table.rows.push_back({value, prob});
        OutputMeta meta = ctx.meta;
        meta.extra.emplace_back("ensemble_seeds", std::to_string(seeds));
        ctx.write("angle_cdf", meta, table);
    }

    if (do_rmsds) {
        Table table;
        table.columns = {"p", "q", "subband_index", "t", "rms_delay_spread_s"};
        for (const auto& [p, q] : s.out_pairs)
            for (double t : s.out_times)
                for (int sb : s.out_subbands) {
                    const auto psd = delay_psd(cir_assemble(real, p, q, sb, t), s.psd_bin);
                    table.rows.push_back({static_cast<long long>(p),
                                          static_cast<long long>(q),
                                          static_cast<long long>(sb), t,
                                          rms_delay_spread(psd)});
                }
        ctx.write("rms_delay_spread", ctx.meta, table);
    }
}

// ------------------------------------------------------------------ sweep

nlohmann::json& navigate_path(nlohmann::json& j, const std::string& dotted)
{
    nlohmann::json* node = &j;
    std::size_t begin = 0;
    while (begin < dotted.size()) {
        const std::size_t dot = dotted.find('.', begin);
        const std::string key = dotted.substr(begin, dot - begin);
        if (!node->contains(key))
            throw std::invalid_argument("unknown config path: " + dotted);
        node = &(*node)[key];
        if (dot == std::string::npos)
            break;
        begin = dot + 1;
    }
    return *node;
}

ScenarioConfig with_param(const ScenarioConfig& base, const std::string& param,
                          double value)
{
    nlohmann::json j = config_to_json(base);
    nlohmann::json& leaf = navigate_path(j, param);
    if (leaf.is_number_integer())
        leaf = static_cast<long long>(std::llround(value));
    else
        leaf = value;
    return config_from_json(j);
}

void run_sweep(const RunContext& ctx, const std::string& param,
               const std::vector<double>& values, const std::string& stat,
               int fcf_points, double fcf_step_ghz)
{
    nlohmann::json manifest;
    manifest["param"] = param;
    manifest["stat"] = stat;
    manifest["points"] = nlohmann::json::array();
    for (std::size_t k = 0; k < values.size(); ++k) {
        RunContext point = ctx;
        point.config = with_param(ctx.config, param, values[k]);
        point.scenario = to_scenario(point.config);
        point.meta.seed = point.config.seed;
        point.meta.config_sha256 = sha256_hex(emit_config(point.config).dump(2));
        point.out_dir = (fs::path(ctx.out_dir) / ("point_" + std::to_string(k))).string();
        fs::create_directories(point.out_dir);
        save_config(point.config, (fs::path(point.out_dir) / "config.json").string());
        run_stats(point, stat == "acf", false, false, stat == "delay-psd",
                  stat == "stationary-bandwidth", stat == "angle-cdf",
                  stat == "rms-ds", fcf_points, fcf_step_ghz);

        nlohmann::json entry;
        entry["value"] = values[k];
        entry["dir"] = point.out_dir;
        nlohmann::json files = nlohmann::json::object();
        for (const auto& file : fs::directory_iterator(point.out_dir))
            files[file.path().filename().string()] = sha256_file(file.path().string());
        entry["files"] = files;
        manifest["points"].push_back(entry);
    }
    manifest["meta"]["version"] = version;
    manifest["meta"]["seed"] = ctx.meta.seed;
    manifest["meta"]["config_sha256"] = ctx.meta.config_sha256;
    std::ofstream out(fs::path(ctx.out_dir) / "manifest.json");
    out << manifest.dump(2) << "\n";
}

// -------------------------------------------------------------------- fit

void run_fit(const RunContext& ctx, const std::string& target_path,
             const std::string& param, double lower, double upper, int restarts,
             int ensemble_seeds)
{
    const auto [xs, ys] = read_xy_csv(target_path);
    FitProblem problem;
    problem.lower = {lower};
    problem.upper = {upper};
    problem.mse = [&](const std::vector<double>& params) {
        const ScenarioConfig cfg = with_param(ctx.config, param, params[0]);
        const auto samples = relative_angle_ensemble(to_scenario(cfg), ensemble_seeds);
        const auto cdf = empirical_cdf(samples);
        double acc = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double model = cdf_at(cdf, xs[i]);
            acc += (model - ys[i]) * (model - ys[i]);
        }
        return acc / static_cast<double>(xs.size());
    };
    const FitResult result = fit_parameter(problem, restarts, ctx.config.seed);

    nlohmann::json report;
    report["meta"]["version"] = version;
    report["meta"]["seed"] = ctx.meta.seed;
    report["meta"]["config_sha256"] = ctx.meta.config_sha256;
    report["param"] = param;
    report["value"] = result.params[0];
    report["mse"] = result.mse;
    report["evaluations"] = result.evaluations;
    report["restarts"] = restarts;
    report["target"] = target_path;
    std::ofstream out(fs::path(ctx.out_dir) / "fit_report.json");
    out << report.dump(2) << "\n";
    std::cout << "fitted " << param << " = " << result.params[0]
              << " (mse " << result.mse << ")\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"thz-gbsm: wideband space-time-frequency channel simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, preset = "default", out_dir = "out", format = "csv";
    std::optional<std::uint64_t> seed;
    std::optional<int> mc;
    int threads = 0;
    app.add_option("--config", config_path, "configuration file (JSON)");
    app.add_option("--preset", preset, "built-in scenario preset");
    app.add_option("--seed", seed, "root random seed");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--format", format, "artifact format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads,
                   "worker threads (default: THZ_GBSM_THREADS or 1)");
    app.add_option("--mc", mc, "Monte-Carlo replicas for empirical estimates");

    auto* cmd_generate = app.add_subcommand("generate", "write CIR and CTF artifacts");
    auto* cmd_stats = app.add_subcommand("stats", "statistical property analysis");
    bool do_acf = false, do_ccf = false, do_fcf = false, do_psd = false;
    bool do_stationary = false, do_angle = false, do_rmsds = false;
    int fcf_points = 21;
    double fcf_step_ghz = 0.25;
    cmd_stats->add_flag("--acf", do_acf, "time autocorrelation");
    cmd_stats->add_flag("--ccf", do_ccf, "spatial cross-correlation");
    cmd_stats->add_flag("--fcf", do_fcf, "frequency correlation");
    cmd_stats->add_flag("--delay-psd", do_psd, "delay power profiles");
    cmd_stats->add_flag("--stationary-bandwidth", do_stationary,
                        "per-seed frequency stationary intervals");
    cmd_stats->add_flag("--angle-cdf", do_angle, "relative angle CDF");
    cmd_stats->add_flag("--rms-ds", do_rmsds, "RMS delay spread");
    cmd_stats->add_option("--fcf-points", fcf_points, "frequency lag count");
    cmd_stats->add_option("--fcf-step-ghz", fcf_step_ghz, "frequency lag step");

    auto* cmd_sweep = app.add_subcommand("sweep", "parameter sweep with manifest");
    std::string sweep_param;
    std::vector<double> sweep_values;
    std::string sweep_stat = "angle-cdf";
    cmd_sweep->add_option("--param", sweep_param, "dotted config path")->required();
    cmd_sweep->add_option("--values", sweep_values, "grid values")
        ->required()
        ->delimiter(',');
    cmd_sweep->add_option("--stat", sweep_stat, "statistic per point")
        ->check(CLI::IsMember(
            {"acf", "angle-cdf", "rms-ds", "stationary-bandwidth", "delay-psd"}));

    auto* cmd_fit = app.add_subcommand("fit", "fit a parameter to a target curve");
    std::string fit_target, fit_param = "angle_spread.mean_rx_azimuth_deg";
    double fit_lower = 0.05, fit_upper = 10.0;
    int fit_restarts = 3, fit_seeds = 40;
    cmd_fit->add_option("--target", fit_target, "two-column (x, y) CSV")->required();
    cmd_fit->add_option("--param", fit_param, "dotted config path");
    cmd_fit->add_option("--lower", fit_lower, "lower bound");
    cmd_fit->add_option("--upper", fit_upper, "upper bound");
    cmd_fit->add_option("--restarts", fit_restarts, "random restarts");
    cmd_fit->add_option("--ensemble-seeds", fit_seeds, "seeds per evaluation");

    auto* cmd_presets = app.add_subcommand("presets", "list built-in presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_presets->parsed()) {
            for (const auto& [name, description] : preset_catalog())
                std::cout << name << "\t" << description << "\n";
            return 0;
        }
        RunContext ctx =
            make_context(config_path, preset, seed, mc, out_dir, format, threads);
        if (cmd_generate->parsed()) {
            run_generate(ctx);
        } else if (cmd_stats->parsed()) {
            if (!(do_acf || do_ccf || do_fcf || do_psd || do_stationary || do_angle ||
                  do_rmsds))
                throw std::invalid_argument(
                    "stats: choose at least one statistic flag (see --help)");
            run_stats(ctx, do_acf, do_ccf, do_fcf, do_psd, do_stationary, do_angle,
                      do_rmsds, fcf_points, fcf_step_ghz);
        } else if (cmd_sweep->parsed()) {
            run_sweep(ctx, sweep_param, sweep_values, sweep_stat, fcf_points,
                      fcf_step_ghz);
        } else if (cmd_fit->parsed()) {
            run_fit(ctx, fit_target, fit_param, fit_lower, fit_upper, fit_restarts,
                    fit_seeds);
        }
    } catch (const std::exception& e) {
        nlohmann::json err;
        err["error"]["message"] = e.what();
        std::cerr << err.dump() << std::endl;
        return 1;
    }
    return 0;
}
