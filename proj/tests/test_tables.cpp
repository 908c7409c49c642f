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
#include "tables.hpp"

#include <regex>

using namespace scm901;

namespace
{

// Patch one record line of the canonical catalog text.
std::string patch_line(const std::string& text,
                       const std::string& needle,
                       const std::string& from,
                       const std::string& to)
{
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    bool done = false;
    while (std::getline(in, line))
    {
        if (!done && line.find(needle) != std::string::npos)
        {
            const auto pos = line.find(from);
            REQUIRE(pos != std::string::npos);
            line = line.substr(0, pos) + to + line.substr(pos + from.size());
            done = true;
        }
        out << line << "\n";
    }
    REQUIRE(done);
    return out.str();
}

} // namespace

TEST_CASE("the shipped catalog loads with all five scenarios")
{
    const auto cat = test::catalog();
    for (const Scenario sc : kAllScenarios)
    {
        for (const Condition cond : {Condition::LOS, Condition::NLOS})
        {
            REQUIRE(cat->pathloss(sc, cond).branches.size() >= 1);
            const FastFadingEntry& ff = cat->fast_fading(sc, cond);
            REQUIRE(ff.num_clusters >= 1);
            REQUIRE(ff.rays_per_cluster == 20);
            REQUIRE(ff.r_tau > 1.0);
        }
        REQUIRE_FALSE(cat->los_prob(sc).tr_table_ref.empty());
    }
    REQUIRE(cat->ray_offsets().size() == 20);
    REQUIRE(cat->version() == 1);
    REQUIRE(cat->checksum() != 0);
}

TEST_CASE("every record carries a TR citation")
{
    const auto cat = test::catalog();
    for (const Scenario sc : kAllScenarios)
    {
        for (const Condition cond : {Condition::LOS, Condition::NLOS})
        {
            for (const PathlossBranch& br : cat->pathloss(sc, cond).branches)
            {
                REQUIRE_FALSE(br.tr_table_ref.empty());
            }
            REQUIRE_FALSE(cat->fast_fading(sc, cond).tr_table_ref.empty());
            REQUIRE_FALSE(cat->fast_fading(sc, cond).corr_tr_table_ref.empty());
        }
    }
    REQUIRE_FALSE(cat->blockage().tr_table_ref.empty());
    REQUIRE_FALSE(cat->blockage().indoor.tr_table_ref.empty());
    REQUIRE_FALSE(cat->blockage().outdoor.tr_table_ref.empty());
}

TEST_CASE("canonical format round trip is byte-stable")
{
    const auto cat = test::catalog();
    const std::string once = cat->canonical_format();
    const auto reloaded = ParameterCatalog::load_text(once, "roundtrip");
    REQUIRE(reloaded->canonical_format() == once);
}

TEST_CASE("negative shadowing sigma is rejected naming the field")
{
    const std::string bad = patch_line(test::catalog()->canonical_format(),
                                       "pathloss scenario=UMa condition=LOS branch=1",
                                       "sigma_sf=4",
                                       "sigma_sf=-1");
    try
    {
        ParameterCatalog::load_text(bad, "bad");
        FAIL("expected a validation error");
    }
    catch (const std::runtime_error& e)
    {
        REQUIRE(std::string(e.what()).find("sigma_sf") != std::string::npos);
    }
}

TEST_CASE("non-PSD correlation matrix is rejected naming the record")
{
    // sf_k = 1.3 makes the UMa LOS matrix indefinite
    const std::string bad = patch_line(test::catalog()->canonical_format(),
                                       "lsp_corr scenario=UMa condition=LOS",
                                       "sf_k=0",
                                       "sf_k=1.3");
    try
    {
        ParameterCatalog::load_text(bad, "bad");
        FAIL("expected a PSD error");
    }
    catch (const std::runtime_error& e)
    {
        const std::string what = e.what();
        REQUIRE(what.find("positive semi-definite") != std::string::npos);
        REQUIRE(what.find("UMa/LOS") != std::string::npos);
    }
}

TEST_CASE("symmetric_sqrt flags a small negative eigenvalue")
{
    // diag(1,...,1,-0.01) has eigenvalue -0.01
    std::array<std::array<double, kNumLsp>, kNumLsp> c{};
    for (int i = 0; i < kNumLsp; ++i)
    {
        c[i][i] = 1.0;
    }
    c[kNumLsp - 1][kNumLsp - 1] = -0.01;
    REQUIRE_THROWS_WITH(symmetric_sqrt(c, "probe"),
                        Catch::Matchers::ContainsSubstring("positive semi-definite"));

    // and the square root of a valid matrix squares back to it
    const auto cat = test::catalog();
    const auto& ff = cat->fast_fading(Scenario::UMa, Condition::LOS);
    for (int i = 0; i < kNumLsp; ++i)
    {
        for (int j = 0; j < kNumLsp; ++j)
        {
            double s = 0.0;
            for (int k = 0; k < kNumLsp; ++k)
            {
                s += ff.lsp_corr_sqrt[i][k] * ff.lsp_corr_sqrt[k][j];
            }
            REQUIRE(s == Catch::Approx(ff.lsp_corr[i][j]).margin(1e-9));
        }
    }
}

TEST_CASE("unknown fields and missing scenarios are rejected")
{
    const std::string unknown = patch_line(test::catalog()->canonical_format(),
                                           "losprob scenario=RMa",
                                           "near_m=10",
                                           "near_m=10 bogus=1");
    REQUIRE_THROWS_WITH(ParameterCatalog::load_text(unknown, "bad"),
                        Catch::Matchers::ContainsSubstring("bogus"));

    // drop every InH-OfficeOpen record
    std::istringstream in(test::catalog()->canonical_format());
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
    {
        if (line.find("InH-OfficeOpen") == std::string::npos)
        {
            out << line << "\n";
        }
    }
    REQUIRE_THROWS_WITH(ParameterCatalog::load_text(out.str(), "bad"),
                        Catch::Matchers::ContainsSubstring("InH-OfficeOpen"));
}

TEST_CASE("catalog file loading from disk")
{
    REQUIRE_THROWS_WITH(ParameterCatalog::load("/nonexistent/catalog.params"),
                        Catch::Matchers::ContainsSubstring("cannot open"));
}
