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

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "sim.hpp"

#include <cmath>

using namespace scm901;
using Catch::Approx;

namespace
{
constexpr const char* kTraceHeader = "time_s,pathloss_db,snr_db";
constexpr const char* kSweepHeader = "distance_m,condition,mean_loss_db,analytic_loss_db,runs";
} // namespace

TEST_CASE("frozen link: constant trace columns")
{
    SimulationConfig cfg;
    cfg.scenario = Scenario::UMa;
    cfg.trace_duration_s = 0.2;
    cfg.trace_step_s = 0.01;
    const auto rows = test::parse_csv(run_snr_trace(test::catalog(), cfg), kTraceHeader);
    REQUIRE(rows.size() == 21);
    for (const auto& row : rows)
    {
        REQUIRE(row.size() == 3);
        REQUIRE(row[1] == rows.front()[1]);
        REQUIRE(row[2] == rows.front()[2]);
    }
}

TEST_CASE("trace is byte-identical under the same seed")
{
    SimulationConfig cfg;
    cfg.scenario = Scenario::UMiStreetCanyon;
    cfg.pos_a = {0, 0, 10};
    cfg.seed = 17;
    cfg.trace_duration_s = 0.1;
    const std::string a = run_snr_trace(test::catalog(), cfg);
    const std::string b = run_snr_trace(test::catalog(), cfg);
    REQUIRE(a == b);
    cfg.seed = 18;
    REQUIRE(run_snr_trace(test::catalog(), cfg) != a);
}

TEST_CASE("receding receiver gives a non-decreasing pathloss column")
{
    SimulationConfig cfg;
    cfg.scenario = Scenario::UMa;
    cfg.shadowing_enabled = false;
    cfg.vel_b = {1.0, 0.0, 0.0}; // away from the transmitter
    cfg.trace_duration_s = 2.0;
    cfg.trace_step_s = 0.1;
    const auto rows = test::parse_csv(run_snr_trace(test::catalog(), cfg), kTraceHeader);
    double prev = -1e9;
    for (const auto& row : rows)
    {
        const double loss = std::stod(row[1]);
        REQUIRE(loss >= prev - 1e-9);
        prev = loss;
    }
}

TEST_CASE("sweep without shadowing reproduces the analytic curve exactly")
{
    SimulationConfig cfg;
    cfg.scenario = Scenario::UMa;
    cfg.shadowing_enabled = false;
    cfg.runs = 3;
    cfg.sweep_distances_m = {10, 100, 1000};
    const auto rows = test::parse_csv(run_loss_sweep(test::catalog(), cfg), kSweepHeader);
    REQUIRE(rows.size() == 6); // |distances| x 2 conditions
    for (const auto& row : rows)
    {
        REQUIRE(row.size() == 5);
        REQUIRE(row[2] == row[3]); // measured equals analytic, formatted identically
        REQUIRE(row[4] == "3");
    }
}

TEST_CASE("averaged shadowed sweep stays within 1.5 dB of the analytic curve")
{
    SimulationConfig cfg;
    cfg.scenario = Scenario::UMa;
    cfg.runs = 100;
    cfg.sweep_distances_m = {10, 50, 200, 1000};
    const auto rows = test::parse_csv(run_loss_sweep(test::catalog(), cfg), kSweepHeader);
    for (const auto& row : rows)
    {
        REQUIRE(std::abs(std::stod(row[2]) - std::stod(row[3])) <= 1.5);
    }
}

TEST_CASE("sweep ordering and default distances")
{
    SimulationConfig cfg;
    cfg.scenario = Scenario::InHOfficeMixed;
    apply_default_heights(cfg);
    REQUIRE(cfg.pos_a.z == 3.0);
    REQUIRE(cfg.pos_b.z == 1.0);
    cfg.runs = 2;
    const auto rows = test::parse_csv(run_loss_sweep(test::catalog(), cfg), kSweepHeader);
    REQUIRE(rows.size() == default_sweep_distances(Scenario::InHOfficeMixed).size() * 2);
    // alternating LOS/NLOS rows per distance, NLOS never below LOS
    for (std::size_t i = 0; i < rows.size(); i += 2)
    {
        REQUIRE(rows[i][1] == "LOS");
        REQUIRE(rows[i + 1][1] == "NLOS");
        REQUIRE(std::stod(rows[i + 1][3]) >= std::stod(rows[i][3]) - 1e-9);
    }
}

TEST_CASE("config validation names the field")
{
    SimulationConfig cfg;
    cfg.runs = 0;
    REQUIRE_THROWS_WITH(run_loss_sweep(test::catalog(), cfg),
                        Catch::Matchers::ContainsSubstring("runs"));
    cfg = SimulationConfig{};
    cfg.fc_hz = 0.2e9;
    REQUIRE_THROWS_WITH(run_snr_trace(test::catalog(), cfg),
                        Catch::Matchers::ContainsSubstring("fc_hz"));
    cfg = SimulationConfig{};
    cfg.trace_step_s = 0.0;
    REQUIRE_THROWS_WITH(run_snr_trace(test::catalog(), cfg),
                        Catch::Matchers::ContainsSubstring("trace_step_s"));
}

TEST_CASE("mobile fading trace varies over time")
{
    SimulationConfig cfg;
    cfg.scenario = Scenario::UMa;
    cfg.shadowing_enabled = false;
    cfg.vel_b = {0.0, 3.0, 0.0};
    cfg.trace_duration_s = 0.5;
    cfg.trace_step_s = 0.05;
    cfg.array_a = ArraySimConfig{2, 2, 0.5, 0.5, 0.0, 0.0, 0.0, true};
    const auto rows = test::parse_csv(run_snr_trace(test::catalog(), cfg), kTraceHeader);
    bool snr_changes = false;
    for (const auto& row : rows)
    {
        if (row[2] != rows.front()[2])
        {
            snr_changes = true;
        }
    }
    REQUIRE(snr_changes);
}
