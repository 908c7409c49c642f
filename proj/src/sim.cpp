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

#include "sim.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace scm901
{

namespace
{

constexpr NodeId kNodeA = 0;
constexpr NodeId kNodeB = 1;

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

AntennaArray::Config to_array_config(const ArraySimConfig& c)
{
    AntennaArray::Config a;
    a.rows = c.rows;
    a.cols = c.cols;
    a.spacing_v_wl = c.spacing_v_wl;
    a.spacing_h_wl = c.spacing_h_wl;
    a.orientation = Orientation{deg2rad(c.bearing_deg), deg2rad(c.downtilt_deg), 0.0};
    a.element_gain_db = c.element_gain_db;
    a.isotropic = c.isotropic;
    return a;
}

void validate(const SimulationConfig& c)
{
    if (c.runs < 1)
    {
        throw std::invalid_argument("config field 'runs' must be >= 1");
    }
    if (c.fc_hz < 0.5e9 || c.fc_hz > 100e9)
    {
        throw std::invalid_argument("config field 'fc_hz' must be within 0.5-100 GHz");
    }
    if (c.trace_step_s <= 0.0 || c.trace_duration_s < 0.0)
    {
        throw std::invalid_argument("config fields 'trace_step_s'/'trace_duration_s' are invalid");
    }
    if (c.bandwidth_hz <= 0.0 || c.num_subbands == 0)
    {
        throw std::invalid_argument("config fields 'bandwidth_hz'/'num_subbands' are invalid");
    }
    if (c.pos_a.z < 0.0 || c.pos_b.z < 0.0)
    {
        throw std::invalid_argument("config node heights must be >= 0");
    }
}

void write_metadata(std::ostringstream& out, const SimulationConfig& c)
{
    out << "# scenario=" << to_string(c.scenario) << " fc_ghz=" << fmt(c.fc_hz / 1e9)
        << " tx_power_dbm=" << fmt(c.tx_power_dbm) << " noise_figure_db=" << fmt(c.noise_figure_db)
        << " seed=" << c.seed << " runs=" << c.runs << "\n";
    out << "# pos_a=" << fmt(c.pos_a.x) << "," << fmt(c.pos_a.y) << "," << fmt(c.pos_a.z)
        << " pos_b=" << fmt(c.pos_b.x) << "," << fmt(c.pos_b.y) << "," << fmt(c.pos_b.z)
        << " shadowing=" << (c.shadowing_enabled ? 1 : 0)
        << " blockage=" << (c.blockage_enabled ? 1 : 0)
        << " array_a=" << c.array_a.rows << "x" << c.array_a.cols << " array_b=" << c.array_b.rows
        << "x" << c.array_b.cols << " isotropic_a=" << (c.array_a.isotropic ? 1 : 0)
        << " isotropic_b=" << (c.array_b.isotropic ? 1 : 0) << "\n";
}

} // namespace

std::vector<double> default_sweep_distances(Scenario scenario)
{
    switch (scenario)
    {
    case Scenario::InHOfficeMixed:
    case Scenario::InHOfficeOpen:
        return {1, 2, 5, 10, 20, 30, 50, 75, 100, 150};
    default:
        return {10, 20, 50, 100, 200, 500, 1000, 2000, 5000};
    }
}

void apply_default_heights(SimulationConfig& config)
{
    double hbs = 25.0;
    double hut = 1.5;
    switch (config.scenario)
    {
    case Scenario::RMa:
        hbs = 35.0;
        break;
    case Scenario::UMa:
        hbs = 25.0;
        break;
    case Scenario::UMiStreetCanyon:
        hbs = 10.0;
        break;
    case Scenario::InHOfficeMixed:
    case Scenario::InHOfficeOpen:
        hbs = 3.0;
        hut = 1.0;
        break;
    }
    config.pos_a.z = hbs;
    config.pos_b.z = hut;
}

std::string run_snr_trace(std::shared_ptr<const ParameterCatalog> catalog,
                          const SimulationConfig& config)
{
    validate(config);

    // model wiring: condition model, pathloss model bound to it, spectrum
    // model on top of the fading model, per-device arrays registered
    auto condition = std::make_shared<ChannelConditionModel>(
        catalog, config.scenario, config.condition_update_period_s, config.seed);
    PropagationLossModel propagation(
        catalog, config.scenario, config.fc_hz, condition, config.shadowing_enabled, config.seed);

    FadingConfig fading_config;
    fading_config.scenario = config.scenario;
    fading_config.fc_hz = config.fc_hz;
    fading_config.update_period_s = config.channel_update_period_s;
    fading_config.blockage_enabled = config.blockage_enabled;
    fading_config.num_nonself_blockers = config.num_nonself_blockers;
    fading_config.blocker_speed_ms = config.blocker_speed_ms;
    fading_config.portrait_mode = config.portrait_mode;
    auto fading = std::make_shared<FadingModel>(catalog, fading_config, condition, config.seed);

    auto array_a = std::make_shared<AntennaArray>(to_array_config(config.array_a));
    auto array_b = std::make_shared<AntennaArray>(to_array_config(config.array_b));
    fading->register_node(kNodeA, array_a);
    fading->register_node(kNodeB, array_b);
    SpectrumModel spectrum(fading);

    const auto band = BandModel::uniform(config.bandwidth_hz, config.num_subbands);
    const double tx_power_w = std::pow(10.0, (config.tx_power_dbm - 30.0) / 10.0);
    const PowerSpectralDensity tx_psd =
        PowerSpectralDensity::flat(band, tx_power_w / band->total_bandwidth_hz());
    const double lambda = kSpeedOfLight / config.fc_hz;

    std::ostringstream out;
    write_metadata(out, config);
    out << "time_s,pathloss_db,snr_db\n";

    Position pa{};
    Position pb{};
    bool have_geometry = false;
    const auto steps = static_cast<std::size_t>(config.trace_duration_s / config.trace_step_s);
    for (std::size_t i = 0; i <= steps; ++i)
    {
        const double t = static_cast<double>(i) * config.trace_step_s;
        const Position cur_a = config.pos_a + config.vel_a * t;
        const Position cur_b = config.pos_b + config.vel_b * t;

        // steer at the peer; refresh only when the geometry moved
        if (!have_geometry || (cur_a - pa).norm() > 0.0 || (cur_b - pb).norm() > 0.0)
        {
            const RelativeGeometry geom = relative_geometry(cur_a, cur_b);
            array_a->set_beamforming_vector(array_a->steering_vector(geom.aod, lambda));
            array_b->set_beamforming_vector(array_b->steering_vector(geom.aoa, lambda));
            pa = cur_a;
            pb = cur_b;
            have_geometry = true;
        }

        const double rx_dbm =
            propagation.rx_power_dbm(config.tx_power_dbm, kNodeA, kNodeB, cur_a, cur_b, t);
        const double loss_db = config.tx_power_dbm - rx_dbm;

        PowerSpectralDensity rx_psd =
            spectrum.calc_rx_psd(tx_psd, kNodeA, cur_a, config.vel_a, kNodeB, cur_b, config.vel_b, t);
        const double prop_gain = std::pow(10.0, -loss_db / 10.0);
        for (double& v : rx_psd.values_w_hz)
        {
            v *= prop_gain;
        }
        const double snr =
            SpectrumModel::snr_db(rx_psd, config.noise_figure_db, config.temperature_k);

        out << fmt(t) << "," << fmt(loss_db) << "," << fmt(snr) << "\n";
    }
    return out.str();
}

std::string run_loss_sweep(std::shared_ptr<const ParameterCatalog> catalog,
                           const SimulationConfig& config)
{
    validate(config);
    const std::vector<double> distances = config.sweep_distances_m.empty()
                                              ? default_sweep_distances(config.scenario)
                                              : config.sweep_distances_m;
    if (distances.empty())
    {
        throw std::invalid_argument("config field 'sweep_distances_m' must not be empty");
    }

    std::ostringstream out;
    write_metadata(out, config);
    out << "distance_m,condition,mean_loss_db,analytic_loss_db,runs\n";

    const Rng master(config.seed);
    std::uint64_t cell = 0;
    for (const double d : distances)
    {
        Position pa = config.pos_a;
        Position pb{pa.x + d, pa.y, config.pos_b.z};
        for (const Condition cond : {Condition::LOS, Condition::NLOS})
        {
            const double analytic = PropagationLossModel::mean_pathloss(
                *catalog, config.scenario, cond, pa, pb, config.fc_hz);

            // isolated model state per run, independent seeded substream per
            // (distance, condition, run)
            const Rng cell_rng = master.substream(cell++);
            double sum_loss = 0.0;
            for (std::uint32_t run = 0; run < config.runs; ++run)
            {
                auto condition = ChannelConditionModel::fixed(catalog, config.scenario, cond);
                PropagationLossModel propagation(catalog,
                                                 config.scenario,
                                                 config.fc_hz,
                                                 condition,
                                                 config.shadowing_enabled,
                                                 cell_rng.substream(run).seed());
                const double rx =
                    propagation.rx_power_dbm(config.tx_power_dbm, kNodeA, kNodeB, pa, pb, 0.0);
                sum_loss += config.tx_power_dbm - rx;
            }
            out << fmt(d) << "," << to_string(cond) << ","
                << fmt(sum_loss / static_cast<double>(config.runs)) << "," << fmt(analytic) << ","
                << config.runs << "\n";
        }
    }
    return out.str();
}

} // namespace scm901
