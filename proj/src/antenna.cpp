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

#include "antenna.hpp"

#include <cmath>
#include <stdexcept>

namespace scm901
{

namespace
{
constexpr double kBeamwidthDeg = 65.0; // theta_3dB and phi_3dB
constexpr double kSlaVDb = 30.0;       // side-lobe level limit
constexpr double kAMaxDb = 30.0;       // front-back ratio
} // namespace

AntennaArray::AntennaArray(const Config& config)
    : m_config(config)
{
    if (config.rows == 0 || config.cols == 0)
    {
        throw std::invalid_argument("antenna array must have at least one element");
    }
    if (config.spacing_v_wl <= 0.0 || config.spacing_h_wl <= 0.0)
    {
        throw std::invalid_argument("element spacing must be positive");
    }
    if (config.orientation.slant_rad != 0.0)
    {
        throw std::invalid_argument("slant angle must be zero (vertical polarization only)");
    }
}

double AntennaArray::radiation_pattern_db(double zenith_lcs_rad,
                                          double azimuth_lcs_rad,
                                          double element_gain_db)
{
    const double theta_deg = rad2deg(zenith_lcs_rad);
    const double phi_deg = rad2deg(wrap_pi(azimuth_lcs_rad));
    const double av =
        std::min(12.0 * std::pow((theta_deg - 90.0) / kBeamwidthDeg, 2.0), kSlaVDb);
    const double ah = std::min(12.0 * std::pow(phi_deg / kBeamwidthDeg, 2.0), kAMaxDb);
    return element_gain_db - std::min(av + ah, kAMaxDb);
}

FieldPattern AntennaArray::element_field_pattern(const AngularPair& gcs_angles) const
{
    if (m_config.isotropic)
    {
        return {1.0, 0.0};
    }

    const AngularPair lcs = gcs_to_lcs(gcs_angles, m_config.orientation);
    const double a_db = radiation_pattern_db(lcs.zenith(), lcs.azimuth(), m_config.element_gain_db);
    const double f_theta_prime = std::sqrt(std::pow(10.0, a_db / 10.0));
    // vertical polarization: F'_phi' = 0

    // The local field vector is tangent to the sphere; rotating it to the GCS
    // and projecting on the GCS basis preserves its power exactly.
    const Mat3 r = rotation_matrix(m_config.orientation);
    const Vec3 field_global = r.apply(zenith_basis_vector(lcs) * f_theta_prime);
    return {zenith_basis_vector(gcs_angles).dot(field_global),
            azimuth_basis_vector(gcs_angles).dot(field_global)};
}

Vec3 AntennaArray::element_location(std::size_t index, double wavelength_m) const
{
    if (index >= num_elements())
    {
        throw std::out_of_range("element index out of range");
    }
    const std::size_t row = index / m_config.cols;
    const std::size_t col = index % m_config.cols;
    const Vec3 local{0.0,
                     static_cast<double>(col) * m_config.spacing_h_wl * wavelength_m,
                     static_cast<double>(row) * m_config.spacing_v_wl * wavelength_m};
    return rotation_matrix(m_config.orientation).apply(local);
}

std::vector<std::complex<double>> AntennaArray::steering_vector(const AngularPair& direction,
                                                                double wavelength_m) const
{
    const Vec3 k = spherical_unit_vector(direction);
    const double scale = 1.0 / std::sqrt(static_cast<double>(num_elements()));
    std::vector<std::complex<double>> w(num_elements());
    for (std::size_t i = 0; i < w.size(); ++i)
    {
        const double phase = -2.0 * kPi / wavelength_m * k.dot(element_location(i, wavelength_m));
        w[i] = std::polar(scale, phase);
    }
    return w;
}

void AntennaArray::set_beamforming_vector(std::vector<std::complex<double>> w)
{
    if (w.size() != num_elements())
    {
        throw std::invalid_argument("beamforming vector length must match the element count");
    }
    double norm2 = 0.0;
    for (const auto& c : w)
    {
        norm2 += std::norm(c);
    }
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-6)
    {
        throw std::invalid_argument("beamforming vector must have unit norm");
    }
    m_beam = std::move(w);
    ++m_beam_version;
}

const std::vector<std::complex<double>>& AntennaArray::beamforming_vector() const
{
    if (m_beam.empty())
    {
        throw std::runtime_error("beamforming vector has not been set");
    }
    return m_beam;
}

} // namespace scm901
