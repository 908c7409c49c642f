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

#include "fading.hpp"

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace scm901
{

struct Subband
{
    double center_hz{0.0}; // baseband offset from the carrier
    double width_hz{0.0};
};

/// Frequency grid of a transmission. Subband centers are baseband offsets
/// from the carrier; subbands must be ordered and non-overlapping.
class BandModel
{
  public:
    explicit BandModel(std::vector<Subband> subbands);

    /// Evenly spaced subbands spanning `bandwidth_hz` around the carrier.
    static std::shared_ptr<const BandModel> uniform(double bandwidth_hz, std::size_t num_subbands);

    const std::vector<Subband>& subbands() const { return m_subbands; }
    std::size_t size() const { return m_subbands.size(); }
    double total_bandwidth_hz() const;

  private:
    std::vector<Subband> m_subbands;
};

/// Per-subband signal power density over a band model, W/Hz.
struct PowerSpectralDensity
{
    std::shared_ptr<const BandModel> band;
    std::vector<double> values_w_hz;

    static PowerSpectralDensity flat(std::shared_ptr<const BandModel> band, double value_w_hz);
    double total_power_w() const;
};

/// Frequency-domain received PSD through the fading channel: per-cluster
/// long-term components contracted with both beamforming vectors, cached per
/// pair and recomputed only when the channel realization or either beam
/// changed, then combined with the per-cluster Doppler and delay phase ramps.
/// The static computations are pure; calc_rx_psd mutates the per-pair cache
/// and must be serialized per instance.
class SpectrumModel
{
  public:
    explicit SpectrumModel(std::shared_ptr<FadingModel> fading);

    /// L_n = sum_s sum_u w_rx[u] H[u,s,n] w_tx[s] (plain transpose, no
    /// conjugation, as in the PSD equation).
    static std::vector<std::complex<double>> compute_long_term(
        const ChannelMatrix& channel,
        std::span<const std::complex<double>> w_tx,
        std::span<const std::complex<double>> w_rx);

    /// gain(f_k) = |sum_n L_n e^{j 2 pi nu_n t} e^{j 2 pi tau_n f_k}|^2 at
    /// each subband center.
    static std::vector<double> beamforming_gain(std::span<const std::complex<double>> long_term,
                                                std::span<const double> delays_s,
                                                std::span<const double> doppler_hz,
                                                const BandModel& band,
                                                double t_s);

    /// Received PSD for the link a -> b at time `now_s`. Both nodes must be
    /// registered with the fading model and carry beamforming vectors.
    PowerSpectralDensity calc_rx_psd(const PowerSpectralDensity& tx_psd,
                                     NodeId a,
                                     const Position& pa,
                                     const Velocity& va,
                                     NodeId b,
                                     const Position& pb,
                                     const Velocity& vb,
                                     double now_s);

    /// Total received power over thermal noise (k_B T B) raised by the noise
    /// figure, in dB.
    static double snr_db(const PowerSpectralDensity& rx_psd,
                         double noise_figure_db,
                         double temperature_k);

    /// Number of long-term recomputations so far (cache observability).
    std::size_t long_term_computations() const { return m_long_term_computations; }

    FadingModel& fading() { return *m_fading; }

  private:
    struct LongTermEntry
    {
        std::vector<std::complex<double>> values;
        std::shared_ptr<const ChannelMatrix> channel; // realization identity
        std::uint64_t tx_beam_version{0};             // of the stored-orientation tx node
        std::uint64_t rx_beam_version{0};
    };

    std::shared_ptr<FadingModel> m_fading;
    std::map<PairKey, LongTermEntry> m_long_term;
    std::size_t m_long_term_computations{0};
};

inline constexpr double kBoltzmann = 1.380649e-23; // J/K

} // namespace scm901
