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

#include "geometry.hpp"

#include <stdexcept>

namespace scm901
{

namespace
{
constexpr double kPoleEps = 1e-14;
}

double wrap_pi(double rad)
{
    double a = std::fmod(rad, 2.0 * kPi);
    if (a <= -kPi)
    {
        a += 2.0 * kPi;
    }
    else if (a > kPi)
    {
        a -= 2.0 * kPi;
    }
    return a;
}

AngularPair::AngularPair(double zenith_rad, double azimuth_rad)
{
    // Fold the zenith into [0, pi]; values in (pi, 2pi) are reflected back,
    // which is the convention the TR uses for out-of-range zenith angles.
    double t = std::fmod(zenith_rad, 2.0 * kPi);
    if (t < 0.0)
    {
        t += 2.0 * kPi;
    }
    if (t > kPi)
    {
        t = 2.0 * kPi - t;
    }
    m_zenith = t;
    m_azimuth = wrap_pi(azimuth_rad);
    if (std::abs(std::sin(m_zenith)) < kPoleEps)
    {
        m_azimuth = 0.0;
    }
}

Vec3 Mat3::apply(const Vec3& v) const
{
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

Vec3 Mat3::apply_transposed(const Vec3& v) const
{
    return {m[0][0] * v.x + m[1][0] * v.y + m[2][0] * v.z,
            m[0][1] * v.x + m[1][1] * v.y + m[2][1] * v.z,
            m[0][2] * v.x + m[1][2] * v.y + m[2][2] * v.z};
}

Mat3 Mat3::multiply(const Mat3& a, const Mat3& b)
{
    Mat3 r;
    for (int i = 0; i < 3; ++i)
    {
        for (int j = 0; j < 3; ++j)
        {
            double s = 0.0;
            for (int k = 0; k < 3; ++k)
            {
                s += a.m[i][k] * b.m[k][j];
            }
            r.m[i][j] = s;
        }
    }
    return r;
}

Mat3 rotation_matrix(const Orientation& o)
{
    const double ca = std::cos(o.bearing_rad);
    const double sa = std::sin(o.bearing_rad);
    const double cb = std::cos(o.downtilt_rad);
    const double sb = std::sin(o.downtilt_rad);
    const double cg = std::cos(o.slant_rad);
    const double sg = std::sin(o.slant_rad);

    const Mat3 rz{{{{ca, -sa, 0.0}, {sa, ca, 0.0}, {0.0, 0.0, 1.0}}}};
    const Mat3 ry{{{{cb, 0.0, sb}, {0.0, 1.0, 0.0}, {-sb, 0.0, cb}}}};
    const Mat3 rx{{{{1.0, 0.0, 0.0}, {0.0, cg, -sg}, {0.0, sg, cg}}}};
    return Mat3::multiply(rz, Mat3::multiply(ry, rx));
}

Vec3 spherical_unit_vector(const AngularPair& a)
{
    const double st = std::sin(a.zenith());
    return {st * std::cos(a.azimuth()), st * std::sin(a.azimuth()), std::cos(a.zenith())};
}

Vec3 zenith_basis_vector(const AngularPair& a)
{
    const double ct = std::cos(a.zenith());
    return {ct * std::cos(a.azimuth()), ct * std::sin(a.azimuth()), -std::sin(a.zenith())};
}

Vec3 azimuth_basis_vector(const AngularPair& a)
{
    return {-std::sin(a.azimuth()), std::cos(a.azimuth()), 0.0};
}

AngularPair angles_of(const Vec3& v)
{
    const double n = v.norm();
    if (n == 0.0)
    {
        throw std::invalid_argument("direction of a zero vector is undefined");
    }
    double c = v.z / n;
    c = std::max(-1.0, std::min(1.0, c));
    return AngularPair(std::acos(c), std::atan2(v.y, v.x));
}

RelativeGeometry relative_geometry(const Position& a, const Position& b)
{
    const Vec3 d = b - a;
    if (d.norm() == 0.0)
    {
        throw std::invalid_argument("relative_geometry: coincident positions");
    }
    RelativeGeometry g;
    g.d2d_m = std::sqrt(d.x * d.x + d.y * d.y);
    g.d3d_m = d.norm();
    g.aod = angles_of(d);
    g.aoa = angles_of(a - b);
    return g;
}

AngularPair gcs_to_lcs(const AngularPair& gcs, const Orientation& o)
{
    const Mat3 r = rotation_matrix(o);
    return angles_of(r.apply_transposed(spherical_unit_vector(gcs)));
}

AngularPair lcs_to_gcs(const AngularPair& lcs, const Orientation& o)
{
    const Mat3 r = rotation_matrix(o);
    return angles_of(r.apply(spherical_unit_vector(lcs)));
}

} // namespace scm901
