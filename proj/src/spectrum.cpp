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

#include "spectrum.hpp"

#include <cmath>
#include <stdexcept>

namespace scm901
{

BandModel::BandModel(std::vector<Subband> subbands)
    : m_subbands(std::move(subbands))
{
    if (m_subbands.empty())
    {
        throw std::invalid_argument("band model must have at least one subband");
    }
    for (std::size_t i = 0; i < m_subbands.size(); ++i)
    {
        if (m_subbands[i].width_hz <= 0.0)
        {
            throw std::invalid_argument("subband width must be positive");
        }
        if (i > 0)
        {
            const double prev_hi =
                m_subbands[i - 1].center_hz + m_subbands[i - 1].width_hz / 2.0;
            const double lo = m_subbands[i].center_hz - m_subbands[i].width_hz / 2.0;
            if (lo < prev_hi - 1e-6 * m_subbands[i].width_hz)
            {
                throw std::invalid_argument("subbands must be ordered and non-overlapping");
            }
        }
    }
}

std::shared_ptr<const BandModel> BandModel::uniform(double bandwidth_hz, std::size_t num_subbands)
{
    if (bandwidth_hz <= 0.0 || num_subbands == 0)
    {
        throw std::invalid_argument("bad band parameters");
    }
    const double width = bandwidth_hz / static_cast<double>(num_subbands);
    std::vector<Subband> sb(num_subbands);
    for (std::size_t i = 0; i < num_subbands; ++i)
    {
        sb[i].center_hz = -bandwidth_hz / 2.0 + (static_cast<double>(i) + 0.5) * width;
        sb[i].width_hz = width;
    }
    return std::make_shared<const BandModel>(std::move(sb));
}

double BandModel::total_bandwidth_hz() const
{
    double bw = 0.0;
    for (const Subband& s : m_subbands)
    {
        bw += s.width_hz;
    }
    return bw;
}

PowerSpectralDensity PowerSpectralDensity::flat(std::shared_ptr<const BandModel> band,
                                                double value_w_hz)
{
    PowerSpectralDensity psd;
    psd.values_w_hz.assign(band->size(), value_w_hz);
    psd.band = std::move(band);
    return psd;
}

double PowerSpectralDensity::total_power_w() const
{
    double p = 0.0;
    for (std::size_t i = 0; i < values_w_hz.size(); ++i)
    {
        p += values_w_hz[i] * band->subbands()[i].width_hz;
    }
    return p;
}

SpectrumModel::SpectrumModel(std::shared_ptr<FadingModel> fading)
    : m_fading(std::move(fading))
{
    if (!m_fading)
    {
        throw std::invalid_argument("fading model must not be null");
    }
}

std::vector<std::complex<double>> SpectrumModel::compute_long_term(
    const ChannelMatrix& channel,
    std::span<const std::complex<double>> w_tx,
    std::span<const std::complex<double>> w_rx)
{
    if (w_tx.size() != channel.s_size || w_rx.size() != channel.u_size)
    {
        throw std::invalid_argument("beamforming vector length does not match the channel");
    }
    std::vector<std::complex<double>> lt(channel.num_clusters);
    for (std::size_t n = 0; n < channel.num_clusters; ++n)
    {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t s = 0; s < channel.s_size; ++s)
        {
            std::complex<double> rx_sum{0.0, 0.0};
            for (std::size_t u = 0; u < channel.u_size; ++u)
            {
                rx_sum += w_rx[u] * channel.coeff(u, s, n);
            }
            acc += rx_sum * w_tx[s];
        }
        lt[n] = acc;
    }
    return lt;
}

std::vector<double> SpectrumModel::beamforming_gain(
    std::span<const std::complex<double>> long_term,
    std::span<const double> delays_s,
    std::span<const double> doppler_hz,
    const BandModel& band,
    double t_s)
{
    if (long_term.size() != delays_s.size() || long_term.size() != doppler_hz.size())
    {
        throw std::invalid_argument("cluster container sizes differ");
    }
    std::vector<std::complex<double>> rotated(long_term.size());
    for (std::size_t n = 0; n < long_term.size(); ++n)
    {
        const double doppler_phase = 2.0 * kPi * doppler_hz[n] * t_s;
        rotated[n] = long_term[n] * std::complex<double>(std::cos(doppler_phase),
                                                         std::sin(doppler_phase));
    }
    std::vector<double> gain(band.size());
    for (std::size_t k = 0; k < band.size(); ++k)
    {
        const double f = band.subbands()[k].center_hz;
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t n = 0; n < long_term.size(); ++n)
        {
            const double phase = 2.0 * kPi * delays_s[n] * f;
            acc += rotated[n] * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        gain[k] = std::norm(acc);
    }
    return gain;
}

PowerSpectralDensity SpectrumModel::calc_rx_psd(const PowerSpectralDensity& tx_psd,
                                                NodeId a,
                                                const Position& pa,
                                                const Velocity& va,
                                                NodeId b,
                                                const Position& pb,
                                                const Velocity& vb,
                                                double now_s)
{
    const std::shared_ptr<AntennaArray> tx_array = m_fading->array_of(a);
    const std::shared_ptr<AntennaArray> rx_array = m_fading->array_of(b);
    if (!tx_array->has_beamforming_vector() || !rx_array->has_beamforming_vector())
    {
        throw std::runtime_error("both endpoints need a beamforming vector");
    }

    const std::shared_ptr<const ChannelMatrix> channel =
        m_fading->get_channel(a, pa, va, b, pb, vb, now_s);

    // The cached realization serves both directions; when queried against the
    // stored orientation the matrix acts transposed, which for the plain
    // bilinear contraction just swaps the roles of the two weight vectors.
    const bool same_direction = channel->tx_node == a;
    const auto& w_tx = tx_array->beamforming_vector();
    const auto& w_rx = rx_array->beamforming_vector();

    LongTermEntry& entry = m_long_term[PairKey(a, b)];
    const std::uint64_t tx_ver = tx_array->beam_version();
    const std::uint64_t rx_ver = rx_array->beam_version();
    const bool valid = entry.channel == channel &&
                       entry.tx_beam_version == (same_direction ? tx_ver : rx_ver) &&
                       entry.rx_beam_version == (same_direction ? rx_ver : tx_ver);
    if (!valid)
    {
        if (same_direction)
        {
            entry.values = compute_long_term(*channel, w_tx, w_rx);
            entry.tx_beam_version = tx_ver;
            entry.rx_beam_version = rx_ver;
        }
        else
        {
            entry.values = compute_long_term(*channel, w_rx, w_tx);
            entry.tx_beam_version = rx_ver;
            entry.rx_beam_version = tx_ver;
        }
        entry.channel = channel;
        ++m_long_term_computations;
    }

    PowerSpectralDensity rx = tx_psd;
    const std::vector<double> gain =
        beamforming_gain(entry.values, channel->delays_s, channel->doppler_hz, *tx_psd.band, now_s);
    for (std::size_t k = 0; k < rx.values_w_hz.size(); ++k)
    {
        rx.values_w_hz[k] *= gain[k];
    }
    return rx;
}

double SpectrumModel::snr_db(const PowerSpectralDensity& rx_psd,
                             double noise_figure_db,
                             double temperature_k)
{
    if (!rx_psd.band || rx_psd.band->size() == 0)
    {
        throw std::invalid_argument("empty band");
    }
    const double rx_w = rx_psd.total_power_w();
    const double noise_w = kBoltzmann * temperature_k * rx_psd.band->total_bandwidth_hz() *
                           std::pow(10.0, noise_figure_db / 10.0);
    return 10.0 * std::log10(rx_w / noise_w);
}

} // namespace scm901
