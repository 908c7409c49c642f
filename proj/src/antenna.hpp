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

#include "geometry.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace scm901
{

/// Azimuth/zenith field components in the GCS, linear amplitude. With
/// vertically polarized elements the local azimuth component is zero; a
/// non-zero f_phi arises only from the coordinate rotation.
struct FieldPattern
{
    double f_theta{0.0};
    double f_phi{0.0};
};

/// Uniform rectangular array, single panel, vertically polarized elements.
/// Elements are indexed row-major with columns along the local y axis and
/// rows along the local z axis; index 0 sits at the local origin (the
/// bottom-left corner of the panel).
///
/// Pattern, location and steering computations are pure; setting the
/// beamforming vector mutates the array and must be serialized with respect
/// to readers.
class AntennaArray
{
  public:
    struct Config
    {
        std::uint32_t rows{1};
        std::uint32_t cols{1};
        double spacing_v_wl{0.5}; // wavelengths
        double spacing_h_wl{0.5};
        Orientation orientation{};
        double element_gain_db{0.0};
        bool isotropic{false};
    };

    explicit AntennaArray(const Config& config);

    std::size_t num_elements() const { return m_config.rows * m_config.cols; }
    const Config& config() const { return m_config; }

    /// Element radiation power pattern of TR 38.901 Table 7.3-1, local
    /// coordinates: the vertical and horizontal 65-degree-beamwidth cuts are
    /// each limited by the 30 dB side-lobe level and their sum is capped by
    /// the 30 dB front-back ratio.
    static double radiation_pattern_db(double zenith_lcs_rad,
                                       double azimuth_lcs_rad,
                                       double element_gain_db);

    /// Field pattern for a GCS direction: transform to the local system,
    /// take sqrt of the linear power pattern as the local zenith component,
    /// and rotate the components back to the GCS. Isotropic arrays
    /// short-circuit to (1, 0).
    FieldPattern element_field_pattern(const AngularPair& gcs_angles) const;

    /// Location vector of an element in meters, rotated into the GCS.
    /// Throws std::out_of_range for a bad index.
    Vec3 element_location(std::size_t index, double wavelength_m) const;

    /// Unit-norm conjugate steering weights for the given GCS direction:
    /// w_i = exp(-j 2 pi / lambda * k.d_i) / sqrt(N). Applied as the
    /// beamforming vector, the array factor toward that direction is sqrt(N).
    std::vector<std::complex<double>> steering_vector(const AngularPair& direction,
                                                      double wavelength_m) const;

    /// Stores the beamforming vector; it must have one weight per element
    /// and unit L2 norm. Bumps the beam version.
    void set_beamforming_vector(std::vector<std::complex<double>> w);
    const std::vector<std::complex<double>>& beamforming_vector() const;
    bool has_beamforming_vector() const { return !m_beam.empty(); }

    /// Monotonic counter identifying the current beamforming vector; used by
    /// the long-term cache to detect beam changes.
    std::uint64_t beam_version() const { return m_beam_version; }

  private:
    Config m_config;
    std::vector<std::complex<double>> m_beam;
    std::uint64_t m_beam_version{0};
};

} // namespace scm901
