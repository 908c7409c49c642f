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

#include "geometry.hpp"
#include "rng.hpp"

#include <cmath>

using namespace scm901;
using Catch::Approx;

TEST_CASE("relative geometry of a downward-looking link")
{
    const RelativeGeometry g = relative_geometry({0, 0, 10}, {100, 0, 1.5});
    REQUIRE(g.d2d_m == Approx(100.0));
    REQUIRE(g.d3d_m == Approx(std::sqrt(100.0 * 100.0 + 8.5 * 8.5)));
    REQUIRE(rad2deg(g.aod.azimuth()) == Approx(0.0).margin(1e-12));
    REQUIRE(rad2deg(g.aod.zenith()) == Approx(90.0 + rad2deg(std::atan(8.5 / 100.0))));
    // arrival is the reciprocal direction
    REQUIRE(rad2deg(g.aoa.azimuth()) == Approx(180.0));
    REQUIRE(rad2deg(g.aoa.zenith()) == Approx(180.0 - rad2deg(g.aod.zenith())));
}

TEST_CASE("vertical and horizontal alignments")
{
    const RelativeGeometry down = relative_geometry({0, 0, 10}, {0, 0, 1.5});
    REQUIRE(down.d2d_m == 0.0);
    REQUIRE(down.d3d_m == Approx(8.5));
    REQUIRE(rad2deg(down.aod.zenith()) == Approx(180.0));
    REQUIRE(down.aod.azimuth() == 0.0); // canonical azimuth at the pole

    const RelativeGeometry east = relative_geometry({0, 0, 1}, {0, 50, 1});
    REQUIRE(rad2deg(east.aod.azimuth()) == Approx(90.0));
    REQUIRE(rad2deg(east.aod.zenith()) == Approx(90.0));
}

TEST_CASE("coincident positions are rejected")
{
    REQUIRE_THROWS_AS(relative_geometry({1, 2, 3}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("relative geometry antisymmetry")
{
    Rng rng(5);
    for (int i = 0; i < 200; ++i)
    {
        const Position a{rng.uniform(-100, 100), rng.uniform(-100, 100), rng.uniform(0, 50)};
        const Position b{rng.uniform(-100, 100), rng.uniform(-100, 100), rng.uniform(0, 50)};
        if ((a - b).norm() < 1e-6)
        {
            continue;
        }
        const RelativeGeometry fwd = relative_geometry(a, b);
        const RelativeGeometry rev = relative_geometry(b, a);
        REQUIRE(std::abs(wrap_pi(rev.aod.azimuth() - fwd.aod.azimuth() - kPi)) < 1e-12);
        REQUIRE(rev.aod.zenith() == Approx(kPi - fwd.aod.zenith()).margin(1e-12));
    }
}

TEST_CASE("spherical unit vector components and norm")
{
    REQUIRE(spherical_unit_vector(AngularPair(deg2rad(90), 0)).x == Approx(1.0));
    const Vec3 pole = spherical_unit_vector(AngularPair(0.0, deg2rad(123)));
    REQUIRE(pole.z == Approx(1.0));
    REQUIRE(pole.x == Approx(0.0).margin(1e-15));
    const Vec3 y = spherical_unit_vector(AngularPair(deg2rad(90), deg2rad(90)));
    REQUIRE(y.y == Approx(1.0));

    Rng rng(9);
    for (int i = 0; i < 1000; ++i)
    {
        const AngularPair p(rng.uniform(0, kPi), rng.uniform(-kPi, kPi));
        REQUIRE(spherical_unit_vector(p).norm() == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("gcs/lcs transform special cases")
{
    // identity orientation leaves angles unchanged
    const AngularPair in(deg2rad(72), deg2rad(-41));
    const AngularPair out = gcs_to_lcs(in, Orientation{});
    REQUIRE(out.zenith() == Approx(in.zenith()));
    REQUIRE(out.azimuth() == Approx(in.azimuth()));

    // a bearing is a plain z-rotation
    const AngularPair r = gcs_to_lcs(AngularPair(deg2rad(90), deg2rad(30)),
                                     Orientation{deg2rad(30), 0, 0});
    REQUIRE(rad2deg(r.zenith()) == Approx(90.0));
    REQUIRE(rad2deg(r.azimuth()) == Approx(0.0).margin(1e-12));

    // a downtilt moves the pole by the tilt angle
    const AngularPair t = gcs_to_lcs(AngularPair(0.0, deg2rad(55)),
                                     Orientation{0, deg2rad(10), 0});
    REQUIRE(rad2deg(t.zenith()) == Approx(10.0));
}

TEST_CASE("gcs/lcs round trip is the identity")
{
    Rng rng(17);
    for (int i = 0; i < 1000; ++i)
    {
        const AngularPair in(rng.uniform(0.01, kPi - 0.01), rng.uniform(-kPi, kPi));
        const Orientation o{rng.uniform(-kPi, kPi), rng.uniform(-kPi / 2, kPi / 2), 0.0};
        const AngularPair back = lcs_to_gcs(gcs_to_lcs(in, o), o);
        REQUIRE(back.zenith() == Approx(in.zenith()).margin(1e-12));
        REQUIRE(std::abs(wrap_pi(back.azimuth() - in.azimuth())) < 1e-12);
    }
}

TEST_CASE("angular pair normalization")
{
    // zenith wrap-around reflects back into [0, pi]
    const AngularPair over(deg2rad(200), deg2rad(10));
    REQUIRE(rad2deg(over.zenith()) == Approx(160.0));
    // azimuth wraps into (-pi, pi]
    const AngularPair wrap(deg2rad(90), deg2rad(540));
    REQUIRE(rad2deg(wrap.azimuth()) == Approx(180.0));
}
