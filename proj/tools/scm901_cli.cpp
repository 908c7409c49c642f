// SPDX-License-Identifier: Apache-2.0
//
// scm901: 3GPP TR 38.901 spatial channel model library and link-level simulator
// Copyright (C) 2026 the scm901 authors
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
//
// Command-line front end. Parses a declarative JSON config plus flag
// overrides and drives the scm901 C API.

#include "scm901/scm901.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace
{

using nlohmann::json;

struct CatalogHandle
{
    scm901_catalog* ptr{nullptr};
    ~CatalogHandle() { scm901_catalog_free(ptr); }
};

int fail(scm901_status status)
{
    std::cerr << "error: " << scm901_status_name(status) << ": " << scm901_last_error() << "\n";
    return 1;
}

int load_catalog(const std::string& path, CatalogHandle& out)
{
    const scm901_status s = path.empty() ? scm901_catalog_load_default(&out.ptr)
                                         : scm901_catalog_load(path.c_str(), &out.ptr);
    return s == SCM901_OK ? 0 : fail(s);
}

void read_vec3(const json& j, const char* key, double out[3])
{
    if (!j.contains(key))
    {
        return;
    }
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 3)
    {
        throw std::runtime_error(std::string("config field '") + key + "' must be [x, y, z]");
    }
    for (int i = 0; i < 3; ++i)
    {
        out[i] = v[i].get<double>();
    }
}

void read_array(const json& j, const char* key, scm901_array_config& a)
{
    if (!j.contains(key))
    {
        return;
    }
    const auto& v = j.at(key);
    if (v.contains("rows"))
    {
        a.rows = v["rows"].get<uint32_t>();
    }
    if (v.contains("cols"))
    {
        a.cols = v["cols"].get<uint32_t>();
    }
    if (v.contains("spacing_v_wl"))
    {
        a.spacing_v_wl = v["spacing_v_wl"].get<double>();
    }
    if (v.contains("spacing_h_wl"))
    {
        a.spacing_h_wl = v["spacing_h_wl"].get<double>();
    }
    if (v.contains("bearing_deg"))
    {
        a.bearing_deg = v["bearing_deg"].get<double>();
    }
    if (v.contains("downtilt_deg"))
    {
        a.downtilt_deg = v["downtilt_deg"].get<double>();
    }
    if (v.contains("element_gain_db"))
    {
        a.element_gain_db = v["element_gain_db"].get<double>();
    }
    if (v.contains("isotropic"))
    {
        a.isotropic = v["isotropic"].get<bool>() ? 1 : 0;
    }
}

// scenario string storage must outlive the C struct
std::string g_scenario;

void apply_config_file(const std::string& path,
                       scm901_sim_config& cfg,
                       std::vector<double>& distances)
{
    std::ifstream in(path);
    if (!in)
    {
        throw std::runtime_error("cannot open config file '" + path + "'");
    }
    json j = json::parse(in);

    if (j.contains("scenario"))
    {
        g_scenario = j["scenario"].get<std::string>();
        cfg.scenario = g_scenario.c_str();
    }
    if (j.contains("fc_ghz"))
    {
        cfg.fc_hz = j["fc_ghz"].get<double>() * 1e9;
    }
    if (j.contains("tx_power_dbm"))
    {
        cfg.tx_power_dbm = j["tx_power_dbm"].get<double>();
    }
    if (j.contains("noise_figure_db"))
    {
        cfg.noise_figure_db = j["noise_figure_db"].get<double>();
    }
    if (j.contains("temperature_k"))
    {
        cfg.temperature_k = j["temperature_k"].get<double>();
    }
    read_vec3(j, "pos_a", cfg.pos_a);
    read_vec3(j, "pos_b", cfg.pos_b);
    read_vec3(j, "vel_a", cfg.vel_a);
    read_vec3(j, "vel_b", cfg.vel_b);
    read_array(j, "array_a", cfg.array_a);
    read_array(j, "array_b", cfg.array_b);
    if (j.contains("condition_update_period_s"))
    {
        cfg.condition_update_period_s = j["condition_update_period_s"].get<double>();
    }
    if (j.contains("channel_update_period_s"))
    {
        cfg.channel_update_period_s = j["channel_update_period_s"].get<double>();
    }
    if (j.contains("shadowing"))
    {
        cfg.shadowing_enabled = j["shadowing"].get<bool>() ? 1 : 0;
    }
    if (j.contains("blockage"))
    {
        cfg.blockage_enabled = j["blockage"].get<bool>() ? 1 : 0;
    }
    if (j.contains("num_nonself_blockers"))
    {
        cfg.num_nonself_blockers = j["num_nonself_blockers"].get<int>();
    }
    if (j.contains("blocker_speed_ms"))
    {
        cfg.blocker_speed_ms = j["blocker_speed_ms"].get<double>();
    }
    if (j.contains("portrait_mode"))
    {
        cfg.portrait_mode = j["portrait_mode"].get<bool>() ? 1 : 0;
    }
    if (j.contains("bandwidth_hz"))
    {
        cfg.bandwidth_hz = j["bandwidth_hz"].get<double>();
    }
    if (j.contains("num_subbands"))
    {
        cfg.num_subbands = j["num_subbands"].get<uint32_t>();
    }
    if (j.contains("trace_duration_s"))
    {
        cfg.trace_duration_s = j["trace_duration_s"].get<double>();
    }
    if (j.contains("trace_step_s"))
    {
        cfg.trace_step_s = j["trace_step_s"].get<double>();
    }
    if (j.contains("seed"))
    {
        cfg.seed = j["seed"].get<uint64_t>();
    }
    if (j.contains("runs"))
    {
        cfg.runs = j["runs"].get<uint32_t>();
    }
    if (j.contains("distances_m"))
    {
        distances = j["distances_m"].get<std::vector<double>>();
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"scm901: TR 38.901 spatial channel model link simulator"};
    app.require_subcommand(1);

    std::string catalog_path;
    std::string config_path;
    std::string scenario;
    std::string out_path;
    double fc_ghz = 0.0;
    std::uint64_t seed = 0;
    std::uint32_t runs = 0;
    std::vector<double> distances;
    bool have_seed = false;
    bool have_runs = false;

    app.add_option("--catalog", catalog_path, "Parameter catalog file (default: embedded)");

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("--scenario", scenario,
                        "RMa | UMa | UMi-StreetCanyon | InH-OfficeMixed | InH-OfficeOpen");
        cmd->add_option("--fc-ghz", fc_ghz, "Carrier frequency, GHz");
        cmd->add_option("--seed", seed, "Master seed")->each([&](const std::string&) {
            have_seed = true;
        });
        cmd->add_option("--runs", runs, "Independent runs")->each([&](const std::string&) {
            have_runs = true;
        });
        cmd->add_option("--out", out_path, "Output CSV path")->required();
    };

    CLI::App* trace = app.add_subcommand("snr-trace", "Two-node SNR/pathloss trace");
    add_common(trace);

    CLI::App* sweep = app.add_subcommand("loss-sweep", "Averaged loss vs distance");
    add_common(sweep);
    sweep->add_option("--distance-m", distances, "Sweep distances in meters");

    CLI::App* check = app.add_subcommand("catalog-check", "Validate and reprint a catalog");
    std::string check_out;
    check->add_option("--out", check_out, "Write the canonical form here");

    CLI11_PARSE(app, argc, argv);

    try
    {
        CatalogHandle catalog;
        if (const int rc = load_catalog(catalog_path, catalog); rc != 0)
        {
            return rc;
        }

        if (check->parsed())
        {
            char* text = nullptr;
            if (const scm901_status s = scm901_catalog_format(catalog.ptr, &text); s != SCM901_OK)
            {
                return fail(s);
            }
            uint64_t checksum = 0;
            scm901_catalog_checksum(catalog.ptr, &checksum);
            if (!check_out.empty())
            {
                std::ofstream out(check_out, std::ios::binary);
                out << text;
            }
            std::printf("catalog ok, checksum %016llx\n",
                        static_cast<unsigned long long>(checksum));
            scm901_string_free(text);
            return 0;
        }

        scm901_sim_config cfg;
        scm901_sim_config_init(&cfg);
        std::vector<double> file_distances;
        if (!config_path.empty())
        {
            apply_config_file(config_path, cfg, file_distances);
        }
        if (!scenario.empty())
        {
            g_scenario = scenario;
            cfg.scenario = g_scenario.c_str();
        }
        if (fc_ghz > 0.0)
        {
            cfg.fc_hz = fc_ghz * 1e9;
        }
        if (have_seed)
        {
            cfg.seed = seed;
        }
        if (have_runs)
        {
            cfg.runs = runs;
        }
        if (distances.empty())
        {
            distances = file_distances;
        }

        scm901_status s;
        if (trace->parsed())
        {
            s = scm901_run_snr_trace(catalog.ptr, &cfg, out_path.c_str());
        }
        else
        {
            s = scm901_run_loss_sweep(catalog.ptr,
                                      &cfg,
                                      distances.empty() ? nullptr : distances.data(),
                                      distances.size(),
                                      out_path.c_str());
        }
        if (s != SCM901_OK)
        {
            return fail(s);
        }
        std::printf("wrote %s\n", out_path.c_str());
        return 0;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
