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

#include <cstdio>
#include <filesystem>

#include "thzgbsm/io.hpp"
#include "thzgbsm/scenario.hpp"

using namespace thzgbsm;
using Catch::Approx;

TEST_CASE("preset fig4 pins the reference values", "[scenario]")
{
    const ScenarioConfig cfg = preset_config("fig4");
    const Scenario s = to_scenario(cfg);
    REQUIRE(s.tx.element_count == 256);
    REQUIRE(s.rx.element_count == 256);
    REQUIRE(s.tx.spacing == Approx(speed_of_light / 325e9 / 2.0).epsilon(1e-12));
    REQUIRE(s.los.distance == 3.0);
    REQUIRE(s.motion.speed == 0.1);
    REQUIRE(s.motion.azimuth == Approx(pi / 3).epsilon(1e-12));
    REQUIRE(s.motion.elevation == 0.0);
    REQUIRE(s.clusters.count_sb == 1);
    REQUIRE(s.clusters.count_mb == 0);
    REQUIRE(s.clusters.fixed_r_tx.value() == 0.4);
    REQUIRE(s.mean_sigmas.rx_elevation == Approx(deg2rad(1.4)).epsilon(1e-12));
    REQUIRE(s.mean_sigmas.rx_azimuth == Approx(deg2rad(2.8)).epsilon(1e-12));
    REQUIRE(s.mean_sigmas.tx_elevation == Approx(deg2rad(1.2)).epsilon(1e-12));
    REQUIRE(s.mean_sigmas.tx_azimuth == Approx(deg2rad(1.7)).epsilon(1e-12));
    REQUIRE(s.freq_exponent == 1.2);
    REQUIRE(s.rays_sb == 400);
    REQUIRE(s.band.count == 500);
}

TEST_CASE("preset fig6 carries the stationarity setup", "[scenario]")
{
    const ScenarioConfig cfg = preset_config("fig6");
    const Scenario s = to_scenario(cfg);
    REQUIRE(s.clusters.mean_interarrival_sb == Approx(2.73 * ns).epsilon(1e-12));
    REQUIRE(s.clusters.mean_interarrival_mb == Approx(2.33 * ns).epsilon(1e-12));
    REQUIRE(s.mean_toa.value() == Approx(0.3 * ns).epsilon(1e-12));
    REQUIRE(s.stationarity_threshold == 0.9);
    REQUIRE(s.stationarity_seeds == 100);
    REQUIRE(s.freq_exponent == 1.2);
    REQUIRE(s.motion.speed == 0.1);
}

TEST_CASE("unknown presets are rejected", "[scenario]")
{
    REQUIRE_THROWS_AS(preset_config("fig99"), std::invalid_argument);
}

TEST_CASE("config round trip is exact", "[scenario][property]")
{
    for (const auto& [name, description] : preset_catalog()) {
        ScenarioConfig cfg = preset_config(name);
        cfg.seed = 123456789ULL;
        cfg.tx.spacing_m = 0.000417731;
        cfg.motion.azimuth_deg = 61.37219846573;
        const nlohmann::json j = emit_config(cfg);
        const ScenarioConfig back = config_from_json(j);
        REQUIRE(back == cfg);
        // a second emit is byte-identical
        REQUIRE(emit_config(back).dump(2) == j.dump(2));
    }
}

TEST_CASE("unknown keys are rejected with their path", "[scenario]")
{
    nlohmann::json j = config_to_json(ScenarioConfig{});
    j["clusters"]["rician"] = 1.0; // misspelled key
    try {
        config_from_json(j);
        FAIL("expected a validation error");
    } catch (const std::invalid_argument& e) {
        REQUIRE(std::string(e.what()).find("clusters.rician") != std::string::npos);
    }
}

TEST_CASE("validation errors carry the field path", "[scenario]")
{
    ScenarioConfig cfg;
    cfg.band.subband_width_ghz = 5.0; // above the declared stationary-safe width
    try {
        validate_config(cfg);
        FAIL("expected a validation error");
    } catch (const std::invalid_argument& e) {
        REQUIRE(std::string(e.what()).find("band.subband_width_ghz") !=
                std::string::npos);
    }

    ScenarioConfig pairs_bad;
    pairs_bad.outputs.pairs = {{1, 200}};
    REQUIRE_THROWS_AS(validate_config(pairs_bad), std::invalid_argument);

    ScenarioConfig square_bad;
    square_bad.rays.per_sb = 300;
    REQUIRE_THROWS_AS(validate_config(square_bad), std::invalid_argument);

    ScenarioConfig empty_channel;
    empty_channel.clusters.count_sb = 0;
    empty_channel.clusters.count_mb = 0;
    empty_channel.clusters.rician_k = 0.0;
    REQUIRE_THROWS_AS(validate_config(empty_channel), std::invalid_argument);
}

TEST_CASE("provenance tags distinguish defaults from preset pins", "[scenario]")
{
    const nlohmann::json j = emit_config(preset_config("fig4"));
    REQUIRE(j.contains("_provenance"));
    const auto& prov = j.at("_provenance");
    REQUIRE(prov.at("los.distance_m") == "default"); // 3 m is also the default
    REQUIRE(prov.at("clusters.count_sb") == "preset:fig4");
    REQUIRE(prov.at("clusters.fixed_r_tx") == "preset:fig4");
    REQUIRE(prov.at("band.start_ghz") == "default");

    ScenarioConfig user = preset_config("fig4");
    user.motion.speed_mps = 0.25;
    REQUIRE(emit_config(user).at("_provenance").at("motion.speed_mps") == "user");
}

TEST_CASE("config files load and save through disk", "[scenario]")
{
    const auto dir = std::filesystem::temp_directory_path() / "thzgbsm_cfg_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "cfg.json").string();
    ScenarioConfig cfg = preset_config("fig5");
    cfg.seed = 42;
    save_config(cfg, path);
    const ScenarioConfig back = load_config(path);
    REQUIRE(back == cfg);
    std::filesystem::remove_all(dir);
}

TEST_CASE("sha256 known vectors", "[io]")
{
    REQUIRE(sha256_hex("") ==
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    REQUIRE(sha256_hex("abc") ==
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("table writers stamp the run header", "[io]")
{
    const auto dir = std::filesystem::temp_directory_path() / "thzgbsm_io_test";
    std::filesystem::create_directories(dir);
    OutputMeta meta;
    meta.seed = 7;
    meta.config_sha256 = sha256_hex("x");
    Table table;
    table.columns = {"a", "b"};
    table.rows = {{static_cast<long long>(1), 0.5}, {static_cast<long long>(2), 1.25}};

    const std::string csv_path = (dir / "t.csv").string();
    write_table_csv(csv_path, meta, table);
    std::ifstream in(csv_path);
    std::string first;
    std::getline(in, first);
    REQUIRE(first.rfind("# thz-gbsm v", 0) == 0);
    REQUIRE(first.find("seed=7") != std::string::npos);
    REQUIRE(first.find("config_sha256=") != std::string::npos);

    const std::string json_path = (dir / "t.json").string();
    write_table_json(json_path, meta, table);
    std::ifstream jin(json_path);
    nlohmann::json j;
    jin >> j;
    REQUIRE(j["meta"]["seed"] == 7);
    REQUIRE(j["columns"].size() == 2);
    REQUIRE(j["data"].size() == 2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("xy csv targets parse", "[io]")
{
    const auto dir = std::filesystem::temp_directory_path() / "thzgbsm_xy_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "target.csv").string();
    {
        std::ofstream out(path);
        out << "# comment\n0.1,0.3\n0.2,0.6\n0.3,0.9\n";
    }
    const auto [xs, ys] = read_xy_csv(path);
    REQUIRE(xs.size() == 3);
    REQUIRE(ys[1] == Approx(0.6));
    std::filesystem::remove_all(dir);
}

TEST_CASE("parallel_for covers every index once", "[io]")
{
    std::vector<int> hits(257, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits)
        REQUIRE(h == 1);
}

TEST_CASE("surface material files override the built-in table", "[scenario]")
{
    const auto dir = std::filesystem::temp_directory_path() / "thzgbsm_mat_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "materials.json").string();
    {
        std::ofstream out(path);
        out << R"({"brick": {"height_std_mm": 0.9, "corr_length_mm": 1.8}})";
    }
    const auto table = load_material_file(path);
    REQUIRE(table.at("brick").height_std == Approx(0.9 * mm));
    REQUIRE(table.at("brick").extent_x == Approx(18.0 * mm)); // 10x corr length

    ScenarioConfig cfg;
    cfg.surface_material = "brick";
    cfg.surface_material_file = path;
    const Scenario s = to_scenario(cfg);
    REQUIRE(s.surface.corr_length == Approx(1.8 * mm));

    cfg.surface_material = "marble";
    REQUIRE_THROWS_AS(validate_config(cfg), std::invalid_argument);
    std::filesystem::remove_all(dir);
}

TEST_CASE("shipped material table parses and matches the built-ins", "[scenario]")
{
    const auto table = load_material_file(std::string(THZGBSM_SOURCE_DIR) +
                                          "/data/materials.json");
    REQUIRE(table.count("plaster1") == 1);
    REQUIRE(table.at("plaster1").height_std == Approx(0.5 * mm));
    REQUIRE(table.at("plaster2").height_std == Approx(1.5 * mm));
    REQUIRE(table.at("painted_wall").height_std ==
            Approx(material_by_key("painted_wall").height_std));
}

TEST_CASE("type errors carry the field path", "[scenario]")
{
    nlohmann::json j = config_to_json(ScenarioConfig{});
    j["clusters"]["count_sb"] = "five";
    try {
        config_from_json(j);
        FAIL("expected a validation error");
    } catch (const std::invalid_argument& e) {
        REQUIRE(std::string(e.what()).find("clusters.count_sb") != std::string::npos);
    }
}
