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
// Link-level experiments: a two-node SNR trace and an averaged
// loss-vs-distance sweep, both emitting CSV with a `# key=value` metadata
// preamble. Output is deterministic in (config, seed).

#pragma once

#include "propagation.hpp"
#include "spectrum.hpp"
#include "tables.hpp"

#include <memory>
#include <string>
#include <vector>

namespace scm901
{

struct ArraySimConfig
{
    std::uint32_t rows{1};
    std::uint32_t cols{1};
    double spacing_v_wl{0.5};
    double spacing_h_wl{0.5};
    double bearing_deg{0.0};
    double downtilt_deg{0.0};
    double element_gain_db{0.0};
    bool isotropic{true};
};

struct SimulationConfig
{
    Scenario scenario{Scenario::UMa};
    double fc_hz{2.1e9};
    double tx_power_dbm{30.0};
    double noise_figure_db{5.0};
    double temperature_k{290.0};

    Position pos_a{0.0, 0.0, 25.0};
    Position pos_b{100.0, 0.0, 1.5};
    Velocity vel_a{};
    Velocity vel_b{};
    ArraySimConfig array_a;
    ArraySimConfig array_b;

    double condition_update_period_s{0.0};
    double channel_update_period_s{0.0};
    bool shadowing_enabled{true};
    bool blockage_enabled{false};
    int num_nonself_blockers{4};
    double blocker_speed_ms{0.0};
    bool portrait_mode{false};

    double bandwidth_hz{100e6};
    std::uint32_t num_subbands{72};

    double trace_duration_s{1.0};
    double trace_step_s{0.01};

    std::uint64_t seed{1};
    std::uint32_t runs{1};
    std::vector<double> sweep_distances_m; // empty = scenario default grid
};

/// Per-scenario default sweep grid (bounded by the pathloss validity range).
std::vector<double> default_sweep_distances(Scenario scenario);

/// Default BS/UT heights used when positions are not given explicitly
/// (TR simulation assumptions: RMa 35/1.5, UMa 25/1.5, UMi 10/1.5, InH 3/1).
void apply_default_heights(SimulationConfig& config);

/// Two-node link simulated at regular intervals; columns
/// `time_s,pathloss_db,snr_db`. Beams are steered at the peer and re-steered
/// when the geometry changes.
std::string run_snr_trace(std::shared_ptr<const ParameterCatalog> catalog,
                          const SimulationConfig& config);

/// Averaged propagation loss over distance, per condition, with the analytic
/// mean pathloss as a reference column; columns
/// `distance_m,condition,mean_loss_db,analytic_loss_db,runs`. The condition
/// is forced per curve, and each run owns isolated model state seeded from an
/// independent substream.
std::string run_loss_sweep(std::shared_ptr<const ParameterCatalog> catalog,
                           const SimulationConfig& config);

} // namespace scm901
