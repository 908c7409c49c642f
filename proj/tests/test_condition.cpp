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

#include "condition.hpp"
#include "helpers.hpp"

#include <cmath>

using namespace scm901;
using Catch::Approx;

namespace
{

Position bs_at(Scenario sc)
{
    switch (sc)
    {
    case Scenario::RMa:
        return {0, 0, 35};
    case Scenario::UMa:
        return {0, 0, 25};
    case Scenario::UMiStreetCanyon:
        return {0, 0, 10};
    default:
        return {0, 0, 3};
    }
}

Position ut_at(Scenario sc, double d2d)
{
    const double h = (sc == Scenario::InHOfficeMixed || sc == Scenario::InHOfficeOpen) ? 1.0 : 1.5;
    return {d2d, 0, h};
}

double plos(Scenario sc, double d2d)
{
    return ChannelConditionModel::los_probability(*test::catalog(), sc, bs_at(sc), ut_at(sc, d2d));
}

} // namespace

TEST_CASE("LOS probability near and far limits")
{
    REQUIRE(plos(Scenario::UMa, 10.0) == 1.0);
    REQUIRE(plos(Scenario::UMa, 18.0) == 1.0);
    for (const Scenario sc : kAllScenarios)
    {
        REQUIRE(plos(sc, 100e3) < 0.05);
    }
    // UMi is continuous at the 18 m threshold: the far branch evaluates to 1
    REQUIRE(plos(Scenario::UMiStreetCanyon, 18.0 + 1e-9) == Approx(1.0).margin(1e-6));
    // hand-evaluated UMi far branch at 50 m: 18/50 + exp(-50/36)*(1 - 18/50)
    REQUIRE(plos(Scenario::UMiStreetCanyon, 50.0) ==
            Approx(18.0 / 50.0 + std::exp(-50.0 / 36.0) * (1.0 - 18.0 / 50.0)));
    // RMa at 1010 m: exp(-1)
    REQUIRE(plos(Scenario::RMa, 1010.0) == Approx(std::exp(-1.0)));
    // InH mixed, both branches
    REQUIRE(plos(Scenario::InHOfficeMixed, 1.0) == 1.0);
    REQUIRE(plos(Scenario::InHOfficeMixed, 3.0) == Approx(std::exp(-(3.0 - 1.2) / 4.7)));
    REQUIRE(plos(Scenario::InHOfficeMixed, 10.0) ==
            Approx(std::exp(-(10.0 - 6.5) / 32.9) * 0.32));
    REQUIRE(plos(Scenario::InHOfficeOpen, 30.0) == Approx(std::exp(-(30.0 - 5.0) / 70.8)));
    REQUIRE(plos(Scenario::InHOfficeOpen, 60.0) ==
            Approx(std::exp(-(60.0 - 49.0) / 211.7) * 0.54));
}

TEST_CASE("LOS probability is non-increasing in distance")
{
    for (const Scenario sc : kAllScenarios)
    {
        double prev = 1.0;
        for (double d = 1.0; d < 5000.0; d *= 1.07)
        {
            const double p = plos(sc, d);
            REQUIRE(p <= prev + 1e-12);
            REQUIRE(p >= 0.0);
            REQUIRE(p <= 1.0);
            prev = p;
        }
    }
}

TEST_CASE("condition caching honors the update period")
{
    auto model = std::make_shared<ChannelConditionModel>(test::catalog(), Scenario::UMa, 1.0, 42);
    const Position a = bs_at(Scenario::UMa);
    const Position b = ut_at(Scenario::UMa, 120.0);

    const ChannelCondition c0 = model->get(1, 2, a, b, 0.0);
    const ChannelCondition c1 = model->get(1, 2, a, b, 0.5);
    REQUIRE(c0.state == c1.state);
    REQUIRE(c0.generated_at_s == c1.generated_at_s); // cache hit

    // symmetric under node swap
    const ChannelCondition swapped = model->get(2, 1, b, a, 0.6);
    REQUIRE(swapped.state == c0.state);

    // queried every update period over horizon T: floor(T / period) refreshes
    int regenerations = 0;
    double last = c0.generated_at_s;
    for (double t = 1.0; t <= 10.0 + 1e-9; t += 1.0)
    {
        const ChannelCondition c = model->get(1, 2, a, b, t);
        if (c.generated_at_s != last)
        {
            ++regenerations;
            last = c.generated_at_s;
        }
    }
    REQUIRE(regenerations == 10);
}

TEST_CASE("zero update period freezes the state forever")
{
    // geometry with p(LOS) ~ 0.5 so a flip would be likely if drawn again
    auto model = std::make_shared<ChannelConditionModel>(test::catalog(), Scenario::UMa, 0.0, 7);
    const Position a = bs_at(Scenario::UMa);
    const Position b = ut_at(Scenario::UMa, 60.0);
    const Condition first = model->get(1, 2, a, b, 0.0).state;
    for (double t = 1.0; t < 1000.0; t *= 1.7)
    {
        REQUIRE(model->get(1, 2, a, b, t).state == first);
    }
}

TEST_CASE("probability-1 geometry always draws LOS")
{
    for (std::uint64_t seed = 0; seed < 32; ++seed)
    {
        ChannelConditionModel model(test::catalog(), Scenario::UMa, 0.0, seed);
        REQUIRE(model.get(1, 2, bs_at(Scenario::UMa), ut_at(Scenario::UMa, 10.0), 0.0).state ==
                Condition::LOS);
    }
}

TEST_CASE("empirical LOS frequency matches the model probability")
{
    // 10 geometries per scenario, 1e5 draws each via per-pair first queries
    Rng geo(123);
    for (const Scenario sc : kAllScenarios)
    {
        const double dmax = (sc == Scenario::InHOfficeMixed || sc == Scenario::InHOfficeOpen)
                                ? 100.0
                                : 2000.0;
        for (int g = 0; g < 10; ++g)
        {
            const double d = geo.uniform(5.0, dmax);
            const Position a = bs_at(sc);
            const Position b = ut_at(sc, d);
            const double p = ChannelConditionModel::los_probability(*test::catalog(), sc, a, b);

            ChannelConditionModel model(test::catalog(), sc, 0.0, 1000 + g);
            const int n = 100000;
            int los = 0;
            for (int i = 0; i < n; ++i)
            {
                // distinct pair ids so each query is an independent first draw
                if (model.get(2 * i, 2 * i + 1, a, b, 0.0).state == Condition::LOS)
                {
                    ++los;
                }
            }
            const double freq = static_cast<double>(los) / n;
            const double se = std::sqrt(std::max(p * (1.0 - p), 1e-12) / n);
            REQUIRE(std::abs(freq - p) <= 3.0 * se + 1e-9);
        }
    }
}

TEST_CASE("forced-condition model reports the fixed state")
{
    auto model = ChannelConditionModel::fixed(test::catalog(), Scenario::UMa, Condition::NLOS);
    REQUIRE(model->get(1, 2, bs_at(Scenario::UMa), ut_at(Scenario::UMa, 10.0), 0.0).state ==
            Condition::NLOS);
}
