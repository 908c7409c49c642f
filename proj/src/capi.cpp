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

#include "scm901/scm901.h"

#include "condition.hpp"
#include "propagation.hpp"
#include "sim.hpp"
#include "spectrum.hpp"
#include "tables.hpp"

#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>

using namespace scm901;

struct scm901_catalog
{
    std::shared_ptr<const ParameterCatalog> impl;
};

struct scm901_link
{
    SimulationConfig config;
    std::shared_ptr<ChannelConditionModel> condition;
    std::unique_ptr<PropagationLossModel> propagation;
    std::shared_ptr<FadingModel> fading;
    std::unique_ptr<SpectrumModel> spectrum;
    std::shared_ptr<AntennaArray> array_a;
    std::shared_ptr<AntennaArray> array_b;
    std::shared_ptr<const BandModel> band;
    PowerSpectralDensity tx_psd;
    bool steered{false};
    Position last_a, last_b;
};

namespace
{

thread_local std::string g_last_error;

scm901_status set_error(scm901_status status, const std::string& message)
{
    g_last_error = message;
    return status;
}

template <typename Fn>
scm901_status guarded(Fn&& fn)
{
    try
    {
        return fn();
    }
    catch (const std::invalid_argument& e)
    {
        return set_error(SCM901_ERR_INVALID_ARGUMENT, e.what());
    }
    catch (const std::out_of_range& e)
    {
        return set_error(SCM901_ERR_INVALID_ARGUMENT, e.what());
    }
    catch (const std::bad_alloc&)
    {
        return set_error(SCM901_ERR_INTERNAL, "out of memory");
    }
    catch (const std::exception& e)
    {
        return set_error(SCM901_ERR_INTERNAL, e.what());
    }
}

scm901_status require(bool ok, const char* what)
{
    return ok ? SCM901_OK : set_error(SCM901_ERR_INVALID_ARGUMENT, what);
}

Position to_pos(const double v[3])
{
    return {v[0], v[1], v[2]};
}

ArraySimConfig to_array(const scm901_array_config& a)
{
    ArraySimConfig c;
    c.rows = a.rows;
    c.cols = a.cols;
    c.spacing_v_wl = a.spacing_v_wl;
    c.spacing_h_wl = a.spacing_h_wl;
    c.bearing_deg = a.bearing_deg;
    c.downtilt_deg = a.downtilt_deg;
    c.element_gain_db = a.element_gain_db;
    c.isotropic = a.isotropic != 0;
    return c;
}

SimulationConfig to_sim_config(const scm901_sim_config& c)
{
    SimulationConfig s;
    s.scenario = scenario_from_string(c.scenario ? c.scenario : "");
    s.fc_hz = c.fc_hz;
    s.tx_power_dbm = c.tx_power_dbm;
    s.noise_figure_db = c.noise_figure_db;
    s.temperature_k = c.temperature_k;
    s.pos_a = to_pos(c.pos_a);
    s.pos_b = to_pos(c.pos_b);
    s.vel_a = to_pos(c.vel_a);
    s.vel_b = to_pos(c.vel_b);
    s.array_a = to_array(c.array_a);
    s.array_b = to_array(c.array_b);
    s.condition_update_period_s = c.condition_update_period_s;
    s.channel_update_period_s = c.channel_update_period_s;
    s.shadowing_enabled = c.shadowing_enabled != 0;
    s.blockage_enabled = c.blockage_enabled != 0;
    s.num_nonself_blockers = c.num_nonself_blockers;
    s.blocker_speed_ms = c.blocker_speed_ms;
    s.portrait_mode = c.portrait_mode != 0;
    s.bandwidth_hz = c.bandwidth_hz;
    s.num_subbands = c.num_subbands;
    s.trace_duration_s = c.trace_duration_s;
    s.trace_step_s = c.trace_step_s;
    s.seed = c.seed;
    s.runs = c.runs;
    return s;
}

scm901_status write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        return set_error(SCM901_ERR_IO, "cannot open output file '" + path + "'");
    }
    out << content;
    out.flush();
    if (!out)
    {
        return set_error(SCM901_ERR_IO, "failed writing output file '" + path + "'");
    }
    return SCM901_OK;
}

} // namespace

extern "C" {

const char* scm901_status_name(scm901_status status)
{
    switch (status)
    {
    case SCM901_OK:
        return "ok";
    case SCM901_ERR_INVALID_ARGUMENT:
        return "invalid argument";
    case SCM901_ERR_PARSE:
        return "parse error";
    case SCM901_ERR_IO:
        return "io error";
    case SCM901_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown";
}

const char* scm901_last_error(void)
{
    return g_last_error.c_str();
}

scm901_status scm901_catalog_load(const char* path, scm901_catalog** out)
{
    if (scm901_status s = require(path && out, "null argument"); s != SCM901_OK)
    {
        return s;
    }
    return guarded([&] {
        try
        {
            auto cat = new scm901_catalog{ParameterCatalog::load(path)};
            *out = cat;
            return SCM901_OK;
        }
        catch (const std::runtime_error& e)
        {
            // distinguish I/O from validation failures for the caller
            if (std::strstr(e.what(), "cannot open") != nullptr)
            {
                return set_error(SCM901_ERR_IO, e.what());
            }
            return set_error(SCM901_ERR_PARSE, e.what());
        }
    });
}

scm901_status scm901_catalog_load_default(scm901_catalog** out)
{
    if (scm901_status s = require(out != nullptr, "null argument"); s != SCM901_OK)
    {
        return s;
    }
    return guarded([&] {
        *out = new scm901_catalog{ParameterCatalog::embedded_default()};
        return SCM901_OK;
    });
}

void scm901_catalog_free(scm901_catalog* catalog)
{
    delete catalog;
}

scm901_status scm901_catalog_format(const scm901_catalog* catalog, char** out_text)
{
    if (scm901_status s = require(catalog && out_text, "null argument"); s != SCM901_OK)
    {
        return s;
    }
    return guarded([&] {
        const std::string text = catalog->impl->canonical_format();
        char* buf = static_cast<char*>(::operator new(text.size() + 1));
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *out_text = buf;
        return SCM901_OK;
    });
}

void scm901_string_free(char* text)
{
    ::operator delete(text);
}

scm901_status scm901_catalog_checksum(const scm901_catalog* catalog, uint64_t* out)
{
    if (scm901_status s = require(catalog && out, "null argument"); s != SCM901_OK)
    {
        return s;
    }
    *out = catalog->impl->checksum();
    return SCM901_OK;
}

scm901_status scm901_los_probability(const scm901_catalog* catalog,
                                     const char* scenario,
                                     const double a_xyz[3],
                                     const double b_xyz[3],
                                     double* out_probability)
{
    if (scm901_status s = require(catalog && scenario && a_xyz && b_xyz && out_probability,
                                  "null argument");
        s != SCM901_OK)
    {
        return s;
    }
    return guarded([&] {
        *out_probability = ChannelConditionModel::los_probability(
            *catalog->impl, scenario_from_string(scenario), to_pos(a_xyz), to_pos(b_xyz));
        return SCM901_OK;
    });
}

scm901_status scm901_mean_pathloss(const scm901_catalog* catalog,
                                   const char* scenario,
                                   const char* condition,
                                   const double a_xyz[3],
                                   const double b_xyz[3],
                                   double fc_hz,
                                   double* out_db)
{
    if (scm901_status s =
            require(catalog && scenario && condition && a_xyz && b_xyz && out_db, "null argument");
        s != SCM901_OK)
    {
        return s;
    }
    return guarded([&] {
        *out_db = PropagationLossModel::mean_pathloss(*catalog->impl,
                                                      scenario_from_string(scenario),
                                                      condition_from_string(condition),
                                                      to_pos(a_xyz),
                                                      to_pos(b_xyz),
                                                      fc_hz);
        return SCM901_OK;
    });
}

scm901_status scm901_breakpoint_distance(const scm901_catalog* catalog,
                                         const char* scenario,
                                         double h_bs_m,
                                         double h_ut_m,
                                         double fc_hz,
                                         double* out_m)
{
    if (scm901_status s = require(catalog && scenario && out_m, "null argument"); s != SCM901_OK)
    {
        return s;
    }
    return guarded([&] {
        *out_m = PropagationLossModel::breakpoint_distance(
            *catalog->impl, scenario_from_string(scenario), h_bs_m, h_ut_m, fc_hz);
        return SCM901_OK;
    });
}

void scm901_sim_config_init(scm901_sim_config* config)
{
    if (!config)
    {
        return;
    }
    std::memset(config, 0, sizeof(*config));
    config->scenario = "UMa";
    config->fc_hz = 2.1e9;
    config->tx_power_dbm = 30.0;
    config->noise_figure_db = 5.0;
    config->temperature_k = 290.0;
    config->pos_a[2] = 25.0;
    config->pos_b[0] = 100.0;
    config->pos_b[2] = 1.5;
    config->array_a = {1, 1, 0.5, 0.5, 0.0, 0.0, 0.0, 1};
    config->array_b = {1, 1, 0.5, 0.5, 0.0, 0.0, 0.0, 1};
    config->shadowing_enabled = 1;
    config->num_nonself_blockers = 4;
    config->bandwidth_hz = 100e6;
    config->num_subbands = 72;
    config->trace_duration_s = 1.0;
    config->trace_step_s = 0.01;
    config->seed = 1;
    config->runs = 1;
}

scm901_status scm901_run_snr_trace(const scm901_catalog* catalog,
                                   const scm901_sim_config* config,
                                   const char* out_csv_path)
{
    if (scm901_status s = require(catalog && config && out_csv_path, "null argument");
        s != SCM901_OK)
    {
        return s;
    }
    return guarded([&] {
        const std::string csv = run_snr_trace(catalog->impl, to_sim_config(*config));
        return write_file(out_csv_path, csv);
    });
}

scm901_status scm901_run_loss_sweep(const scm901_catalog* catalog,
                                    const scm901_sim_config* config,
                                    const double* distances_m,
                                    size_t n_distances,
                                    const char* out_csv_path)
{
    if (scm901_status s = require(catalog && config && out_csv_path, "null argument");
        s != SCM901_OK)
    {
        return s;
    }
    if (scm901_status s = require(distances_m != nullptr || n_distances == 0,
                                  "distances_m is null but n_distances > 0");
        s != SCM901_OK)
    {
        return s;
    }
    return guarded([&] {
        SimulationConfig sim = to_sim_config(*config);
        sim.sweep_distances_m.assign(distances_m, distances_m + n_distances);
        const std::string csv = run_loss_sweep(catalog->impl, sim);
        return write_file(out_csv_path, csv);
    });
}

scm901_status scm901_link_create(const scm901_catalog* catalog,
                                 const scm901_sim_config* config,
                                 scm901_link** out)
{
    if (scm901_status s = require(catalog && config && out, "null argument"); s != SCM901_OK)
    {
        return s;
    }
    return guarded([&] {
        auto link = std::make_unique<scm901_link>();
        link->config = to_sim_config(*config);
        const SimulationConfig& c = link->config;

        link->condition = std::make_shared<ChannelConditionModel>(
            catalog->impl, c.scenario, c.condition_update_period_s, c.seed);
        link->propagation = std::make_unique<PropagationLossModel>(
            catalog->impl, c.scenario, c.fc_hz, link->condition, c.shadowing_enabled, c.seed);

        FadingConfig fc;
        fc.scenario = c.scenario;
        fc.fc_hz = c.fc_hz;
        fc.update_period_s = c.channel_update_period_s;
        fc.blockage_enabled = c.blockage_enabled;
        fc.num_nonself_blockers = c.num_nonself_blockers;
        fc.blocker_speed_ms = c.blocker_speed_ms;
        fc.portrait_mode = c.portrait_mode;
        link->fading = std::make_shared<FadingModel>(catalog->impl, fc, link->condition, c.seed);

        AntennaArray::Config aa;
        aa.rows = c.array_a.rows;
        aa.cols = c.array_a.cols;
        aa.spacing_v_wl = c.array_a.spacing_v_wl;
        aa.spacing_h_wl = c.array_a.spacing_h_wl;
        aa.orientation =
            Orientation{deg2rad(c.array_a.bearing_deg), deg2rad(c.array_a.downtilt_deg), 0.0};
        aa.element_gain_db = c.array_a.element_gain_db;
        aa.isotropic = c.array_a.isotropic;
        AntennaArray::Config ab = aa;
        ab.rows = c.array_b.rows;
        ab.cols = c.array_b.cols;
        ab.spacing_v_wl = c.array_b.spacing_v_wl;
        ab.spacing_h_wl = c.array_b.spacing_h_wl;
        ab.orientation =
            Orientation{deg2rad(c.array_b.bearing_deg), deg2rad(c.array_b.downtilt_deg), 0.0};
        ab.element_gain_db = c.array_b.element_gain_db;
        ab.isotropic = c.array_b.isotropic;

        link->array_a = std::make_shared<AntennaArray>(aa);
        link->array_b = std::make_shared<AntennaArray>(ab);
        link->fading->register_node(0, link->array_a);
        link->fading->register_node(1, link->array_b);
        link->spectrum = std::make_unique<SpectrumModel>(link->fading);

        link->band = BandModel::uniform(c.bandwidth_hz, c.num_subbands);
        const double tx_w = std::pow(10.0, (c.tx_power_dbm - 30.0) / 10.0);
        link->tx_psd =
            PowerSpectralDensity::flat(link->band, tx_w / link->band->total_bandwidth_hz());
        *out = link.release();
        return SCM901_OK;
    });
}

void scm901_link_free(scm901_link* link)
{
    delete link;
}

scm901_status scm901_link_step(scm901_link* link,
                               double now_s,
                               double* out_pathloss_db,
                               double* out_snr_db)
{
    if (scm901_status s = require(link && out_pathloss_db && out_snr_db, "null argument");
        s != SCM901_OK)
    {
        return s;
    }
    return guarded([&] {
        const SimulationConfig& c = link->config;
        const Position pa = c.pos_a + c.vel_a * now_s;
        const Position pb = c.pos_b + c.vel_b * now_s;

        if (!link->steered || (pa - link->last_a).norm() > 0.0 || (pb - link->last_b).norm() > 0.0)
        {
            const RelativeGeometry geom = relative_geometry(pa, pb);
            const double lambda = kSpeedOfLight / c.fc_hz;
            link->array_a->set_beamforming_vector(link->array_a->steering_vector(geom.aod, lambda));
            link->array_b->set_beamforming_vector(link->array_b->steering_vector(geom.aoa, lambda));
            link->steered = true;
            link->last_a = pa;
            link->last_b = pb;
        }

        const double rx_dbm =
            link->propagation->rx_power_dbm(c.tx_power_dbm, 0, 1, pa, pb, now_s);
        const double loss_db = c.tx_power_dbm - rx_dbm;

        PowerSpectralDensity rx_psd =
            link->spectrum->calc_rx_psd(link->tx_psd, 0, pa, c.vel_a, 1, pb, c.vel_b, now_s);
        const double prop_gain = std::pow(10.0, -loss_db / 10.0);
        for (double& v : rx_psd.values_w_hz)
        {
            v *= prop_gain;
        }

        *out_pathloss_db = loss_db;
        *out_snr_db = SpectrumModel::snr_db(rx_psd, c.noise_figure_db, c.temperature_k);
        return SCM901_OK;
    });
}

} // extern "C"
