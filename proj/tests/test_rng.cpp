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

#include "rng.hpp"

#include <cmath>

using namespace scm901;

TEST_CASE("same seed reproduces the stream")
{
    Rng a(42);
    Rng b(42);
    for (int i = 0; i < 100; ++i)
    {
        REQUIRE(a.uniform() == b.uniform());
        REQUIRE(a.normal() == b.normal());
    }
}

TEST_CASE("substreams are independent of sibling consumption")
{
    Rng root(7);
    Rng a1 = root.substream("alpha");
    Rng b1 = root.substream("beta");
    (void)b1.normal(); // consuming beta must not affect alpha
    Rng a2 = Rng(7).substream("alpha");
    for (int i = 0; i < 10; ++i)
    {
        REQUIRE(a1.uniform() == a2.uniform());
    }
    REQUIRE(root.substream("alpha").uniform() != root.substream("beta").uniform());
    REQUIRE(root.substream(0).uniform() != root.substream(1).uniform());
}

TEST_CASE("uniform and normal moments")
{
    Rng rng(11);
    const int n = 200000;
    double su = 0.0;
    double sn = 0.0;
    double sn2 = 0.0;
    for (int i = 0; i < n; ++i)
    {
        su += rng.uniform();
        const double z = rng.normal();
        sn += z;
        sn2 += z * z;
    }
    REQUIRE(su / n == Catch::Approx(0.5).margin(0.005));
    REQUIRE(sn / n == Catch::Approx(0.0).margin(0.01));
    REQUIRE(sn2 / n == Catch::Approx(1.0).margin(0.02));
}

TEST_CASE("uniform_pos never returns zero")
{
    Rng rng(3);
    for (int i = 0; i < 100000; ++i)
    {
        REQUIRE(rng.uniform_pos() > 0.0);
    }
}
