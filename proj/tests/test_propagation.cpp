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
#include "pathloss_points.hpp"
#include "propagation.hpp"

#include <cmath>

using namespace scm901;
using Catch::Approx;

namespace
{

double pl(Scenario sc, Condition cond, double hbs, double hut, double d2d, double fc)
{
    return PropagationLossModel::mean_pathloss(
        *test::catalog(), sc, cond, {0, 0, hbs}, {d2d, 0, hut}, fc);
}

} // namespace

TEST_CASE("breakpoint distance rules")
{
    const auto cat = test::catalog();
    REQUIRE(PropagationLossModel::breakpoint_distance(*cat, Scenario::UMa, 25, 1.5, 2.1e9) ==
            Approx(336.0)); // 4 * 24 * 0.5 * 2.1e9 / 3e8
    // linear in frequency
    REQUIRE(PropagationLossModel::breakpoint_distance(*cat, Scenario::UMa, 25, 1.5, 4.2e9) ==
            Approx(672.0));
    // degenerate effective height
    REQUIRE(PropagationLossModel::breakpoint_distance(*cat, Scenario::UMiStreetCanyon, 10, 1.0, 2.1e9) == 0.0);
    // RMa rule
    REQUIRE(PropagationLossModel::breakpoint_distance(*cat, Scenario::RMa, 35, 1.5, 2.1e9) ==
            Approx(2.0 * kPi * 35.0 * 1.5 * 2.1e9 / 3e8));
    // invalid heights
    REQUIRE_THROWS_AS(
        PropagationLossModel::breakpoint_distance(*cat, Scenario::UMa, 25, 0.5, 2.1e9),
        std::invalid_argument);
    REQUIRE_THROWS_AS(
        PropagationLossModel::breakpoint_distance(*cat, Scenario::RMa, -1, 1.5, 2.1e9),
        std::invalid_argument);
    // InH has no breakpoint rule
    REQUIRE_THROWS_AS(
        PropagationLossModel::breakpoint_distance(*cat, Scenario::InHOfficeMixed, 3, 1, 2.1e9),
        std::invalid_argument);
}

TEST_CASE("pathloss reference points match the independent evaluation")
{
    for (const auto& p : test::kPathlossPoints)
    {
        const double got = pl(p.scenario, p.condition, p.hbs_m, p.hut_m, p.d2d_m, p.fc_hz);
        INFO(to_string(p.scenario) << "/" << to_string(p.condition) << " d2d=" << p.d2d_m
                                   << " fc=" << p.fc_hz);
        REQUIRE(got == Approx(p.expected_db).margin(0.01));
    }
}

TEST_CASE("log-distance slope on a single branch")
{
    // equal heights make d3D == d2D, and InH LOS has no extra X term:
    // a decade of distance adds exactly A = 17.3 dB
    const double l1 = pl(Scenario::InHOfficeMixed, Condition::LOS, 2.0, 2.0, 2.0, 2.1e9);
    const double l2 = pl(Scenario::InHOfficeMixed, Condition::LOS, 2.0, 2.0, 20.0, 2.1e9);
    REQUIRE(l2 - l1 == Approx(17.3).margin(1e-9));
}

TEST_CASE("frequency slope on a single branch")
{
    const double f1 = pl(Scenario::InHOfficeMixed, Condition::LOS, 3.0, 1.0, 20.0, 2.0e9);
    const double f2 = pl(Scenario::InHOfficeMixed, Condition::LOS, 3.0, 1.0, 20.0, 8.0e9);
    REQUIRE(f2 - f1 == Approx(20.0 * std::log10(4.0)).margin(1e-9));
}

TEST_CASE("dual-slope continuity at the breakpoint")
{
    const double below = pl(Scenario::UMa, Condition::LOS, 25, 1.5, 336.0 - 1e-6, 2.1e9);
    const double above = pl(Scenario::UMa, Condition::LOS, 25, 1.5, 336.0 + 1e-6, 2.1e9);
    REQUIRE(std::abs(below - above) < 0.01);

    const double bp_umi =
        PropagationLossModel::breakpoint_distance(*test::catalog(), Scenario::UMiStreetCanyon, 10, 1.5, 2.1e9);
    REQUIRE(std::abs(pl(Scenario::UMiStreetCanyon, Condition::LOS, 10, 1.5, bp_umi - 1e-6, 2.1e9) -
                     pl(Scenario::UMiStreetCanyon, Condition::LOS, 10, 1.5, bp_umi + 1e-6, 2.1e9)) <
            0.01);
}

TEST_CASE("NLOS dominates LOS everywhere")
{
    Rng rng(77);
    for (const Scenario sc : kAllScenarios)
    {
        const bool indoor = sc == Scenario::InHOfficeMixed || sc == Scenario::InHOfficeOpen;
        const double hbs = indoor ? 3.0 : 25.0;
        for (int i = 0; i < 1000; ++i)
        {
            const double d = rng.uniform(indoor ? 1.0 : 10.0, indoor ? 150.0 : 5000.0);
            const double hut = rng.uniform(1.0, indoor ? 2.5 : 10.0);
            const double fc = rng.uniform(0.6e9, 90e9);
            REQUIRE(pl(sc, Condition::NLOS, hbs, hut, d, fc) >=
                    pl(sc, Condition::LOS, hbs, hut, d, fc) - 1e-12);
        }
    }
}

TEST_CASE("pathloss is non-decreasing in distance on each branch")
{
    for (const Scenario sc : kAllScenarios)
    {
        const bool indoor = sc == Scenario::InHOfficeMixed || sc == Scenario::InHOfficeOpen;
        const double hbs = indoor ? 3.0 : 25.0;
        const double hut = 1.5;
        for (const Condition cond : {Condition::LOS, Condition::NLOS})
        {
            double prev = -1e9;
            for (double d = indoor ? 1.0 : 10.0; d <= (indoor ? 150.0 : 5000.0); d *= 1.03)
            {
                const double v = pl(sc, cond, hbs, hut, d, 2.1e9);
                REQUIRE(v >= prev - 1e-9);
                prev = v;
            }
        }
    }
}

TEST_CASE("out-of-range distances clamp with a warning record")
{
    auto cond = ChannelConditionModel::fixed(test::catalog(), Scenario::UMa, Condition::LOS);
    PropagationLossModel model(test::catalog(), Scenario::UMa, 2.1e9, cond, false, 1);
    const double at5 = model.mean_pathloss(Condition::LOS, {0, 0, 25}, {5, 0, 1.5});
    const double at10 = model.mean_pathloss(Condition::LOS, {0, 0, 25}, {10, 0, 1.5});
    REQUIRE(at5 == Approx(at10)); // clamped to the validity minimum
    REQUIRE(model.warnings().size() == 1);
    REQUIRE(model.warnings().front().message.find("clamped") != std::string::npos);
}

TEST_CASE("shadowing cache is exact at zero displacement")
{
    auto cond = ChannelConditionModel::fixed(test::catalog(), Scenario::UMa, Condition::NLOS);
    PropagationLossModel model(test::catalog(), Scenario::UMa, 2.1e9, cond, true, 5);
    const Position a{0, 0, 25};
    const Position b{100, 0, 1.5};
    const double s1 = model.shadowing_sample(1, 2, a, b, Condition::NLOS);
    const double s2 = model.shadowing_sample(1, 2, a, b, Condition::NLOS);
    REQUIRE(s1 == s2);
    // symmetric pair key
    REQUIRE(model.shadowing_sample(2, 1, b, a, Condition::NLOS) == s1);
}

TEST_CASE("shadowing AR correlation is exponential in displacement")
{
    // three-point consistency of the correlation coefficient itself
    const double r1 = PropagationLossModel::shadowing_correlation(12.0, 37.0);
    const double r2 = PropagationLossModel::shadowing_correlation(30.0, 37.0);
    const double r12 = PropagationLossModel::shadowing_correlation(42.0, 37.0);
    REQUIRE(r12 == Approx(r1 * r2).margin(1e-12));

    // distant re-samples decorrelate: empirical correlation below 0.05
    std::vector<double> first;
    std::vector<double> second;
    for (int i = 0; i < 10000; ++i)
    {
        auto cond = ChannelConditionModel::fixed(test::catalog(), Scenario::UMa, Condition::LOS);
        PropagationLossModel model(test::catalog(), Scenario::UMa, 2.1e9, cond, true, 9000 + i);
        first.push_back(model.shadowing_sample(1, 2, {0, 0, 25}, {50, 0, 1.5}, Condition::LOS));
        second.push_back(
            model.shadowing_sample(1, 2, {0, 0, 25}, {5000, 0, 1.5}, Condition::LOS));
    }
    REQUIRE(std::abs(test::correlation(first, second)) < 0.05);

    // short-distance re-samples stay strongly correlated (rho = e^{-5/37})
    std::vector<double> near1;
    std::vector<double> near2;
    for (int i = 0; i < 10000; ++i)
    {
        auto cond = ChannelConditionModel::fixed(test::catalog(), Scenario::UMa, Condition::LOS);
        PropagationLossModel model(test::catalog(), Scenario::UMa, 2.1e9, cond, true, 40000 + i);
        near1.push_back(model.shadowing_sample(1, 2, {0, 0, 25}, {50, 0, 1.5}, Condition::LOS));
        near2.push_back(model.shadowing_sample(1, 2, {0, 0, 25}, {55, 0, 1.5}, Condition::LOS));
    }
    const double rho = std::exp(-5.0 / 37.0);
    REQUIRE(test::correlation(near1, near2) == Approx(rho).margin(0.05));
}

TEST_CASE("shadowing marginal std matches the table sigma")
{
    // UMa NLOS sigma = 6 dB; 1e5 first draws across distinct pairs
    auto cond = ChannelConditionModel::fixed(test::catalog(), Scenario::UMa, Condition::NLOS);
    PropagationLossModel model(test::catalog(), Scenario::UMa, 2.1e9, cond, true, 31);
    const int n = 100000;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double v =
            model.shadowing_sample(2 * i, 2 * i + 1, {0, 0, 25}, {100, 0, 1.5}, Condition::NLOS);
        s2 += v * v;
    }
    REQUIRE(std::sqrt(s2 / n) == Approx(6.0).epsilon(0.02));
}

TEST_CASE("shadowing regenerates on a condition transition")
{
    auto cond = ChannelConditionModel::fixed(test::catalog(), Scenario::UMa, Condition::LOS);
    PropagationLossModel model(test::catalog(), Scenario::UMa, 2.1e9, cond, true, 8);
    const Position a{0, 0, 25};
    const Position b{100, 0, 1.5};
    const double los = model.shadowing_sample(1, 2, a, b, Condition::LOS);
    const double nlos = model.shadowing_sample(1, 2, a, b, Condition::NLOS);
    REQUIRE(los != nlos); // fresh draw, not the AR continuation
    REQUIRE(model.shadowing_sample(1, 2, a, b, Condition::NLOS) == nlos);
}

TEST_CASE("rx power composes pathloss and shadowing")
{
    auto cond = ChannelConditionModel::fixed(test::catalog(), Scenario::UMa, Condition::LOS);
    PropagationLossModel model(test::catalog(), Scenario::UMa, 2.1e9, cond, false, 1);
    const Position a{0, 0, 25};
    const Position b{100, 0, 1.5};
    const double rx = model.rx_power_dbm(30.0, 1, 2, a, b, 0.0);
    REQUIRE(rx == Approx(30.0 - 78.7012).margin(0.01));
    // additivity in dB
    REQUIRE(model.rx_power_dbm(33.0, 1, 2, a, b, 0.0) == Approx(rx + 3.0));
}

TEST_CASE("averaged shadowed rx power approaches the mean pathloss")
{
    const Position a{0, 0, 25};
    const Position b{100, 0, 1.5};
    double sum = 0.0;
    for (int run = 0; run < 100; ++run)
    {
        auto cond = ChannelConditionModel::fixed(test::catalog(), Scenario::UMa, Condition::LOS);
        PropagationLossModel model(test::catalog(), Scenario::UMa, 2.1e9, cond, true, 500 + run);
        sum += model.rx_power_dbm(30.0, 1, 2, a, b, 0.0);
    }
    REQUIRE(sum / 100.0 == Approx(30.0 - 78.7012).margin(1.5));
}

TEST_CASE("unsupported frequency is rejected")
{
    REQUIRE_THROWS_AS(pl(Scenario::UMa, Condition::LOS, 25, 1.5, 100, 0.1e9),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(pl(Scenario::UMa, Condition::LOS, 25, 1.5, 100, 200e9),
                      std::invalid_argument);
}
