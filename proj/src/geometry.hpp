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

#pragma once

#include <array>
#include <cmath>

namespace scm901
{

inline constexpr double kSpeedOfLight = 3.0e8; // m/s, as used by the TR formulas
inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

struct Vec3
{
    double x{0.0};
    double y{0.0};
    double z{0.0};

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
};

/// Global Cartesian position, meters; z is the height above ground.
using Position = Vec3;
/// Velocity, meters/second.
using Velocity = Vec3;

/// Antenna orientation. The slant angle is carried for completeness but the
/// array model requires it to be zero.
struct Orientation
{
    double bearing_rad{0.0};
    double downtilt_rad{0.0};
    double slant_rad{0.0};
};

/// Direction in the GCS convention: zenith measured from +z, azimuth from +x
/// toward +y. Wrap-around is normalized on construction; at the poles the
/// azimuth is canonicalized to 0 so outputs are deterministic.
class AngularPair
{
  public:
    AngularPair() = default;
    AngularPair(double zenith_rad, double azimuth_rad);

    double zenith() const { return m_zenith; }
    double azimuth() const { return m_azimuth; }

  private:
    double m_zenith{0.0};  // [0, pi]
    double m_azimuth{0.0}; // (-pi, pi]
};

/// Wrap an angle into (-pi, pi].
double wrap_pi(double rad);

/// Row-major 3x3 matrix; enough linear algebra for the coordinate transforms.
struct Mat3
{
    std::array<std::array<double, 3>, 3> m{};

    Vec3 apply(const Vec3& v) const;
    Vec3 apply_transposed(const Vec3& v) const;
    static Mat3 multiply(const Mat3& a, const Mat3& b);
};

/// Composite rotation R = Rz(bearing) * Ry(downtilt) * Rx(slant) mapping
/// antenna-local coordinates into the GCS.
Mat3 rotation_matrix(const Orientation& o);

/// Unit direction vector (sin t cos p, sin t sin p, cos t).
Vec3 spherical_unit_vector(const AngularPair& a);

/// Spherical basis vectors at a given direction.
Vec3 zenith_basis_vector(const AngularPair& a);
Vec3 azimuth_basis_vector(const AngularPair& a);

/// Direction angles of a (non-zero) vector.
AngularPair angles_of(const Vec3& v);

struct RelativeGeometry
{
    double d2d_m{0.0};
    double d3d_m{0.0};
    AngularPair aod; // direction a -> b
    AngularPair aoa; // direction b -> a
};

/// Distances and departure/arrival directions of the link a -> b.
/// Throws std::invalid_argument for coincident positions.
RelativeGeometry relative_geometry(const Position& a, const Position& b);

/// Express GCS angles in the antenna-local system defined by `o` (and back).
AngularPair gcs_to_lcs(const AngularPair& gcs, const Orientation& o);
AngularPair lcs_to_gcs(const AngularPair& lcs, const Orientation& o);

} // namespace scm901
