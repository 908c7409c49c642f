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

#include "fading.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace scm901
{

namespace
{

// LSP slot indices in the draw order [SF, K, DS, ASD, ASA, ZSD, ZSA].
enum LspIndex
{
    kSf = 0,
    kK = 1,
    kDs = 2,
    kAsd = 3,
    kAsa = 4,
    kZsd = 5,
    kZsa = 6
};

constexpr double kPruneThreshold = 0.0031622776601683794; // 10^(-2.5), -25 dB

double wrap_deg_180(double deg)
{
    double a = std::fmod(deg, 360.0);
    if (a <= -180.0)
    {
        a += 360.0;
    }
    else if (a > 180.0)
    {
        a -= 360.0;
    }
    return a;
}

double wrap_deg_360(double deg)
{
    double a = std::fmod(deg, 360.0);
    if (a < 0.0)
    {
        a += 360.0;
    }
    return a;
}

// Fold a zenith angle into [0, 180]; azimuth is unaffected by the reflection.
double fold_zenith_deg(double deg)
{
    double t = wrap_deg_360(deg);
    if (t > 180.0)
    {
        t = 360.0 - t;
    }
    return t;
}

std::complex<double> unit_phasor(double phase_rad)
{
    return {std::cos(phase_rad), std::sin(phase_rad)};
}

// Sub-cluster ray partition of TR step 11, defined for 20 rays per cluster
// (0-indexed ray ids).
int subcluster_of_ray(std::size_t m)
{
    if (m >= 8 && m <= 11)
    {
        return 1;
    }
    if (m >= 16 && m <= 17)
    {
        return 1;
    }
    if (m >= 12 && m <= 15)
    {
        return 2;
    }
    return 0;
}

} // namespace

FadingModel::FadingModel(std::shared_ptr<const ParameterCatalog> catalog,
                         const FadingConfig& config,
                         std::shared_ptr<ChannelConditionModel> condition_model,
                         std::uint64_t seed)
    : m_catalog(std::move(catalog)),
      m_config(config),
      m_condition_model(std::move(condition_model)),
      m_rng_lsp(Rng(seed).substream("fading-lsp")),
      m_rng_delay(Rng(seed).substream("fading-delay")),
      m_rng_power(Rng(seed).substream("fading-power")),
      m_rng_angle(Rng(seed).substream("fading-angle")),
      m_rng_coupling(Rng(seed).substream("fading-coupling")),
      m_rng_polar(Rng(seed).substream("fading-polar")),
      m_rng_blockage(Rng(seed).substream("fading-blockage"))
{
    if (config.fc_hz < 0.5e9 || config.fc_hz > 100e9)
    {
        throw std::invalid_argument("carrier frequency must be within 0.5-100 GHz");
    }
    if (config.update_period_s < 0.0)
    {
        throw std::invalid_argument("update period must be >= 0");
    }
    if (config.num_nonself_blockers < 0)
    {
        throw std::invalid_argument("number of non-self blockers must be >= 0");
    }
    if (!m_condition_model)
    {
        throw std::invalid_argument("condition model must not be null");
    }
}

void FadingModel::register_node(NodeId node, std::shared_ptr<AntennaArray> array)
{
    if (!array)
    {
        throw std::invalid_argument("antenna array must not be null");
    }
    m_arrays[node] = std::move(array);
}

std::shared_ptr<AntennaArray> FadingModel::array_of(NodeId node) const
{
    const auto it = m_arrays.find(node);
    if (it == m_arrays.end())
    {
        throw std::invalid_argument("node " + std::to_string(node) +
                                    " has no registered antenna array");
    }
    return it->second;
}

LargeScaleParams FadingModel::draw_large_scale_params(const FastFadingEntry& entry,
                                                      const EvalCtx& ctx,
                                                      Condition condition,
                                                      Rng& rng)
{
    std::array<double, kNumLsp> z{};
    for (double& v : z)
    {
        v = rng.normal();
    }
    std::array<double, kNumLsp> y{};
    for (int i = 0; i < kNumLsp; ++i)
    {
        double s = 0.0;
        for (int j = 0; j < kNumLsp; ++j)
        {
            s += entry.lsp_corr_sqrt[i][j] * z[j];
        }
        y[i] = s;
    }

    LargeScaleParams lsp;
    lsp.ds_s = std::pow(10.0, y[kDs] * entry.sigma_lg_ds.eval(ctx) + entry.mu_lg_ds.eval(ctx));
    lsp.asd_deg = std::min(
        std::pow(10.0, y[kAsd] * entry.sigma_lg_asd.eval(ctx) + entry.mu_lg_asd.eval(ctx)), 104.0);
    lsp.asa_deg = std::min(
        std::pow(10.0, y[kAsa] * entry.sigma_lg_asa.eval(ctx) + entry.mu_lg_asa.eval(ctx)), 104.0);
    lsp.mu_lg_zsd = entry.mu_lg_zsd.eval(ctx);
    lsp.zsd_deg =
        std::min(std::pow(10.0, y[kZsd] * entry.sigma_lg_zsd.eval(ctx) + lsp.mu_lg_zsd), 52.0);
    lsp.zsa_deg = std::min(
        std::pow(10.0, y[kZsa] * entry.sigma_lg_zsa.eval(ctx) + entry.mu_lg_zsa.eval(ctx)), 52.0);
    lsp.k_db = condition == Condition::LOS
                   ? y[kK] * entry.sigma_k_db.eval(ctx) + entry.mu_k_db.eval(ctx)
                   : 0.0;
    return lsp;
}

ClusterDelays FadingModel::generate_cluster_delays(double ds_s,
                                                   double r_tau,
                                                   double k_db,
                                                   Condition condition,
                                                   int num_clusters,
                                                   Rng& rng)
{
    if (num_clusters < 1 || ds_s <= 0.0 || r_tau <= 1.0)
    {
        throw std::invalid_argument("bad delay-generation parameters");
    }
    ClusterDelays d;
    d.for_power.resize(num_clusters);
    double min_tau = std::numeric_limits<double>::infinity();
    for (double& tau : d.for_power)
    {
        tau = -r_tau * ds_s * std::log(rng.uniform_pos()); // (7.5-1)
        min_tau = std::min(min_tau, tau);
    }
    for (double& tau : d.for_power)
    {
        tau -= min_tau; // (7.5-2)
    }
    std::sort(d.for_power.begin(), d.for_power.end());

    d.for_matrix = d.for_power;
    if (condition == Condition::LOS)
    {
        // Ricean rescaling (7.5-3)/(7.5-4); the scaled delays feed only the
        // coefficient generation, never the power profile.
        const double c_tau =
            0.7705 - 0.0433 * k_db + 2e-4 * k_db * k_db + 17e-6 * k_db * k_db * k_db;
        for (double& tau : d.for_matrix)
        {
            tau /= c_tau;
        }
    }
    return d;
}

ClusterPowers FadingModel::generate_cluster_powers(const ClusterDelays& delays,
                                                   double ds_s,
                                                   double r_tau,
                                                   double per_cluster_shadowing_db,
                                                   double k_db,
                                                   Condition condition,
                                                   Rng& rng)
{
    const std::size_t n = delays.for_power.size();
    ClusterPowers p;
    p.scattered.resize(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double shadow = rng.normal(0.0, per_cluster_shadowing_db);
        p.scattered[i] = std::exp(-delays.for_power[i] * (r_tau - 1.0) / (r_tau * ds_s)) *
                         std::pow(10.0, -shadow / 10.0); // (7.5-5)
        sum += p.scattered[i];
    }
    if (sum <= 0.0)
    {
        throw std::runtime_error("degenerate cluster power draw");
    }
    for (double& v : p.scattered)
    {
        v /= sum; // (7.5-6)
    }

    p.with_los = p.scattered;
    if (condition == Condition::LOS)
    {
        const double k_lin = std::pow(10.0, k_db / 10.0);
        for (std::size_t i = 0; i < n; ++i)
        {
            p.with_los[i] /= 1.0 + k_lin; // (7.5-8)
        }
        p.with_los[0] += k_lin / (1.0 + k_lin);
    }

    const double p_max = *std::max_element(p.with_los.begin(), p.with_los.end());
    for (std::size_t i = 0; i < n; ++i)
    {
        if (p.with_los[i] >= kPruneThreshold * p_max)
        {
            p.kept.push_back(i);
        }
    }
    if (p.kept.empty())
    {
        throw std::runtime_error("all clusters pruned (corrupted power profile)");
    }
    return p;
}

double FadingModel::zod_offset_deg(const FastFadingEntry& entry, const EvalCtx& ctx)
{
    switch (entry.zod_offset)
    {
    case ZodOffsetRule::None:
        return 0.0;
    case ZodOffsetRule::RmaNlos:
        // Table 7.5-7 (RMa): arctan terms around the default 35 m / 1.5 m
        // reference heights, output in degrees.
        return rad2deg(std::atan((35.0 - 3.5) / ctx.d2d_m) - std::atan((35.0 - 1.5) / ctx.d2d_m));
    case ZodOffsetRule::UmaNlos:
    {
        const double lgfc = std::log10(ctx.fc_ghz);
        const double a = 0.208 * lgfc - 0.782;
        const double b = 25.0;
        const double c = -0.13 * lgfc + 2.03;
        const double e = 7.66 * lgfc - 5.96;
        return e - std::pow(10.0, a * std::log10(std::max(b, ctx.d2d_m)) + c);
    }
    case ZodOffsetRule::UmiNlos:
        return -std::pow(10.0, -1.5 * std::log10(std::max(10.0, ctx.d2d_m)) + 3.3);
    }
    throw std::logic_error("unreachable");
}

RayParams FadingModel::generate_ray_angles(const LargeScaleParams& lsp,
                                           const std::vector<double>& angle_powers,
                                           const ParameterCatalog& catalog,
                                           const FastFadingEntry& entry,
                                           Condition condition,
                                           const AngularPair& aod_los,
                                           const AngularPair& aoa_los,
                                           double zod_offset_deg_value,
                                           Rng& angle_rng,
                                           Rng& coupling_rng)
{
    const std::size_t n = angle_powers.size();
    const std::size_t m = static_cast<std::size_t>(entry.rays_per_cluster);
    const double p_max = *std::max_element(angle_powers.begin(), angle_powers.end());

    // scaling factors keyed by the table's cluster count, with the Ricean
    // correction in LOS ((7.5-10), (7.5-15))
    double c_phi = catalog.cphi_nlos(entry.num_clusters);
    double c_theta = catalog.ctheta_nlos(entry.num_clusters);
    if (condition == Condition::LOS)
    {
        const double k = lsp.k_db;
        c_phi *= 1.1035 - 0.028 * k - 2e-3 * k * k + 1e-4 * k * k * k;
        c_theta *= 1.3086 + 0.0339 * k - 0.0077 * k * k + 2e-4 * k * k * k;
    }

    const double aod_los_deg = rad2deg(aod_los.azimuth());
    const double aoa_los_deg = rad2deg(aoa_los.azimuth());
    const double zod_los_deg = rad2deg(aod_los.zenith());
    const double zoa_los_deg = rad2deg(aoa_los.zenith());

    RayParams rays;
    rays.cluster_aoa_deg.resize(n);
    rays.cluster_aod_deg.resize(n);
    rays.cluster_zoa_deg.resize(n);
    rays.cluster_zod_deg.resize(n);

    for (std::size_t i = 0; i < n; ++i)
    {
        const double log_term = -std::log(angle_powers[i] / p_max);
        const double az = 2.0 * std::sqrt(log_term) / 1.4 / c_phi; // (7.5-9)
        const double zen = log_term / c_theta;                     // (7.5-14)

        // independent sign and perturbation per angle dimension
        const double aoa = lsp.asa_deg * az * angle_rng.sign() +
                           angle_rng.normal(0.0, lsp.asa_deg / 7.0) + aoa_los_deg; // (7.5-11)
        const double aod = lsp.asd_deg * az * angle_rng.sign() +
                           angle_rng.normal(0.0, lsp.asd_deg / 7.0) + aod_los_deg;
        const double zoa = lsp.zsa_deg * zen * angle_rng.sign() +
                           angle_rng.normal(0.0, lsp.zsa_deg / 7.0) + zoa_los_deg; // (7.5-16)
        const double zod = lsp.zsd_deg * zen * angle_rng.sign() +
                           angle_rng.normal(0.0, lsp.zsd_deg / 7.0) + zod_los_deg +
                           zod_offset_deg_value; // (7.5-19)

        rays.cluster_aoa_deg[i] = aoa;
        rays.cluster_aod_deg[i] = aod;
        rays.cluster_zoa_deg[i] = zoa;
        rays.cluster_zod_deg[i] = zod;
    }

    if (condition == Condition::LOS)
    {
        // re-center so that cluster 1 coincides with the geometric direction
        // ((7.5-12), (7.5-17))
        const double d_aoa = rays.cluster_aoa_deg[0] - aoa_los_deg;
        const double d_aod = rays.cluster_aod_deg[0] - aod_los_deg;
        const double d_zoa = rays.cluster_zoa_deg[0] - zoa_los_deg;
        const double d_zod = rays.cluster_zod_deg[0] - zod_los_deg;
        for (std::size_t i = 0; i < n; ++i)
        {
            rays.cluster_aoa_deg[i] -= d_aoa;
            rays.cluster_aod_deg[i] -= d_aod;
            rays.cluster_zoa_deg[i] -= d_zoa;
            rays.cluster_zod_deg[i] -= d_zod;
        }
    }

    for (std::size_t i = 0; i < n; ++i)
    {
        rays.cluster_aoa_deg[i] = wrap_deg_180(rays.cluster_aoa_deg[i]);
        rays.cluster_aod_deg[i] = wrap_deg_180(rays.cluster_aod_deg[i]);
        rays.cluster_zoa_deg[i] = fold_zenith_deg(rays.cluster_zoa_deg[i]);
        rays.cluster_zod_deg[i] = fold_zenith_deg(rays.cluster_zod_deg[i]);
    }

    // per-ray offsets scaled by the per-cluster spreads ((7.5-13), (7.5-18),
    // (7.5-20)); the ZOD spread is 3/8 * 10^mu_lgZSD
    const auto& offsets = catalog.ray_offsets();
    const double c_asa = entry.c_asa_deg.eval(EvalCtx{}); // constants in the shipped tables
    const double c_asd = entry.c_asd_deg.eval(EvalCtx{});
    const double c_zsa = entry.c_zsa_deg.eval(EvalCtx{});
    const double c_zsd = 0.375 * std::pow(10.0, lsp.mu_lg_zsd);

    rays.ray_aoa_rad.assign(n, std::vector<double>(m));
    rays.ray_aod_rad.assign(n, std::vector<double>(m));
    rays.ray_zoa_rad.assign(n, std::vector<double>(m));
    rays.ray_zod_rad.assign(n, std::vector<double>(m));
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = 0; j < m; ++j)
        {
            const double off = offsets[j % offsets.size()];
            rays.ray_aoa_rad[i][j] =
                deg2rad(wrap_deg_180(rays.cluster_aoa_deg[i] + c_asa * off));
            rays.ray_aod_rad[i][j] =
                deg2rad(wrap_deg_180(rays.cluster_aod_deg[i] + c_asd * off));
            rays.ray_zoa_rad[i][j] =
                deg2rad(fold_zenith_deg(rays.cluster_zoa_deg[i] + c_zsa * off));
            rays.ray_zod_rad[i][j] =
                deg2rad(fold_zenith_deg(rays.cluster_zod_deg[i] + c_zsd * off));
        }
    }

    // step 8: random coupling within each cluster
    for (std::size_t i = 0; i < n; ++i)
    {
        coupling_rng.shuffle(rays.ray_aod_rad[i].begin(), rays.ray_aod_rad[i].end());
        coupling_rng.shuffle(rays.ray_aoa_rad[i].begin(), rays.ray_aoa_rad[i].end());
        coupling_rng.shuffle(rays.ray_zod_rad[i].begin(), rays.ray_zod_rad[i].end());
        coupling_rng.shuffle(rays.ray_zoa_rad[i].begin(), rays.ray_zoa_rad[i].end());
    }
    return rays;
}

void FadingModel::draw_polarization(const FastFadingEntry& entry,
                                    std::size_t num_clusters,
                                    std::size_t rays_per_cluster,
                                    RayParams& rays,
                                    Rng& rng)
{
    rays.xpr_linear.assign(num_clusters, std::vector<double>(rays_per_cluster));
    rays.phases_rad.assign(num_clusters,
                           std::vector<std::array<double, 4>>(rays_per_cluster));
    for (std::size_t i = 0; i < num_clusters; ++i)
    {
        for (std::size_t j = 0; j < rays_per_cluster; ++j)
        {
            // (7.5-21): XPR log-normal in dB
            rays.xpr_linear[i][j] =
                std::pow(10.0, rng.normal(entry.mu_xpr_db, entry.sigma_xpr_db) / 10.0);
            for (double& phase : rays.phases_rad[i][j])
            {
                phase = rng.uniform(-kPi, kPi);
            }
        }
    }
}

double FadingModel::cluster_doppler_hz(double aoa_deg,
                                       double zoa_deg,
                                       double aod_deg,
                                       double zod_deg,
                                       const Velocity& v_rx,
                                       const Velocity& v_tx,
                                       double fc_hz)
{
    const Vec3 k_rx = spherical_unit_vector(AngularPair(deg2rad(zoa_deg), deg2rad(aoa_deg)));
    const Vec3 k_tx = spherical_unit_vector(AngularPair(deg2rad(zod_deg), deg2rad(aod_deg)));
    return (k_rx.dot(v_rx) + k_tx.dot(v_tx)) * fc_hz / kSpeedOfLight;
}

ChannelMatrix FadingModel::assemble_channel_matrix(const RayParams& rays,
                                                   const std::vector<double>& scattered_powers,
                                                   const std::vector<double>& delays_s,
                                                   double k_db,
                                                   double c_ds_s,
                                                   const AntennaArray& tx_array,
                                                   const AntennaArray& rx_array,
                                                   const Velocity& v_tx,
                                                   const Velocity& v_rx,
                                                   const RelativeGeometry& geom,
                                                   double fc_hz,
                                                   Condition condition,
                                                   const std::vector<double>& blockage_att_db)
{
    const std::size_t n = scattered_powers.size();
    if (n == 0 || rays.cluster_aoa_deg.size() != n || delays_s.size() != n)
    {
        throw std::invalid_argument("inconsistent cluster containers");
    }
    const std::size_t m = rays.ray_aoa_rad.front().size();
    if (rays.xpr_linear.size() != n || rays.phases_rad.size() != n)
    {
        throw std::invalid_argument("polarization draws missing");
    }
    if (!blockage_att_db.empty() && blockage_att_db.size() != n)
    {
        throw std::invalid_argument("blockage attenuation size mismatch");
    }

    const double lambda = kSpeedOfLight / fc_hz;
    const std::size_t u_size = rx_array.num_elements();
    const std::size_t s_size = tx_array.num_elements();

    // The TR sub-cluster partition exists only for the 20-ray table.
    const bool split = m == 20;
    std::size_t first = 0;
    std::size_t second = 0;
    if (split)
    {
        for (std::size_t i = 1; i < n; ++i)
        {
            if (scattered_powers[i] > scattered_powers[first])
            {
                first = i;
            }
        }
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            if (i != first && scattered_powers[i] > best)
            {
                best = scattered_powers[i];
                second = i;
            }
        }
        if (n == 1)
        {
            second = first;
        }
    }
    const std::size_t extra = split ? (first == second ? 2 : 4) : 0;
    const std::size_t pages = n + extra;

    ChannelMatrix cm;
    cm.u_size = u_size;
    cm.s_size = s_size;
    cm.num_clusters = pages;
    cm.h.assign(u_size * s_size * pages, {0.0, 0.0});
    cm.delays_s = delays_s;
    cm.cluster_aoa_deg = rays.cluster_aoa_deg;
    cm.cluster_zoa_deg = rays.cluster_zoa_deg;
    cm.cluster_aod_deg = rays.cluster_aod_deg;
    cm.cluster_zod_deg = rays.cluster_zod_deg;
    cm.condition = condition;

    // sub-cluster bookkeeping: delays and copied center angles
    std::array<std::size_t, 2> split_parents{};
    std::size_t num_split = 0;
    if (split)
    {
        split_parents[num_split++] = std::min(first, second);
        if (second != first)
        {
            split_parents[num_split++] = std::max(first, second);
        }
        for (std::size_t si = 0; si < num_split; ++si)
        {
            const std::size_t parent = split_parents[si];
            for (const double mult : {1.28, 2.56})
            {
                cm.delays_s.push_back(delays_s[parent] + mult * c_ds_s);
                cm.cluster_aoa_deg.push_back(rays.cluster_aoa_deg[parent]);
                cm.cluster_zoa_deg.push_back(rays.cluster_zoa_deg[parent]);
                cm.cluster_aod_deg.push_back(rays.cluster_aod_deg[parent]);
                cm.cluster_zod_deg.push_back(rays.cluster_zod_deg[parent]);
            }
        }
    }

    // per-ray polarization factor, cached over (u, s)
    std::vector<std::vector<std::complex<double>>> pol(n, std::vector<std::complex<double>>(m));
    std::vector<std::vector<Vec3>> k_rx(n, std::vector<Vec3>(m));
    std::vector<std::vector<Vec3>> k_tx(n, std::vector<Vec3>(m));
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = 0; j < m; ++j)
        {
            const AngularPair arr(rays.ray_zoa_rad[i][j], rays.ray_aoa_rad[i][j]);
            const AngularPair dep(rays.ray_zod_rad[i][j], rays.ray_aod_rad[i][j]);
            const FieldPattern frx = rx_array.element_field_pattern(arr);
            const FieldPattern ftx = tx_array.element_field_pattern(dep);
            const auto& ph = rays.phases_rad[i][j];
            const double inv_sqrt_xpr = std::sqrt(1.0 / rays.xpr_linear[i][j]);
            pol[i][j] = unit_phasor(ph[0]) * frx.f_theta * ftx.f_theta +
                        unit_phasor(ph[1]) * inv_sqrt_xpr * frx.f_theta * ftx.f_phi +
                        unit_phasor(ph[2]) * inv_sqrt_xpr * frx.f_phi * ftx.f_theta +
                        unit_phasor(ph[3]) * frx.f_phi * ftx.f_phi;
            k_rx[i][j] = spherical_unit_vector(arr);
            k_tx[i][j] = spherical_unit_vector(dep);
        }
    }

    const double two_pi_over_lambda = 2.0 * kPi / lambda;
    for (std::size_t u = 0; u < u_size; ++u)
    {
        const Vec3 d_u = rx_array.element_location(u, lambda);
        for (std::size_t s = 0; s < s_size; ++s)
        {
            const Vec3 d_s = tx_array.element_location(s, lambda);
            for (std::size_t i = 0; i < n; ++i)
            {
                const double scale = std::sqrt(scattered_powers[i] / static_cast<double>(m));
                const bool is_split = split && (i == first || i == second);
                std::complex<double> sum[3] = {};
                for (std::size_t j = 0; j < m; ++j)
                {
                    const std::complex<double> term =
                        pol[i][j] *
                        unit_phasor(two_pi_over_lambda * k_rx[i][j].dot(d_u)) *
                        unit_phasor(two_pi_over_lambda * k_tx[i][j].dot(d_s));
                    sum[is_split ? subcluster_of_ray(j) : 0] += term;
                }
                cm.coeff(u, s, i) = sum[0] * scale; // (7.5-22)/(7.5-28)
                if (is_split)
                {
                    // appended pages follow the delay layout built above:
                    // two pages per split cluster, lower parent index first
                    const std::size_t base =
                        (num_split == 2 && i == split_parents[1]) ? n + 2 : n;
                    cm.coeff(u, s, base) = sum[1] * scale;
                    cm.coeff(u, s, base + 1) = sum[2] * scale;
                }
            }
        }
    }

    if (condition == Condition::LOS)
    {
        // direct-path term (7.5-29) combined per (7.5-30)
        const double k_lin = std::pow(10.0, k_db / 10.0);
        const double scatter_scale = std::sqrt(1.0 / (k_lin + 1.0));
        const double los_scale = std::sqrt(k_lin / (k_lin + 1.0));
        const FieldPattern frx = rx_array.element_field_pattern(geom.aoa);
        const FieldPattern ftx = tx_array.element_field_pattern(geom.aod);
        const std::complex<double> pol_los{frx.f_theta * ftx.f_theta - frx.f_phi * ftx.f_phi, 0.0};
        const std::complex<double> dist_phase = unit_phasor(-2.0 * kPi * geom.d3d_m / lambda);
        const Vec3 k_rx_los = spherical_unit_vector(geom.aoa);
        const Vec3 k_tx_los = spherical_unit_vector(geom.aod);
        const double los_att =
            blockage_att_db.empty() ? 0.0 : std::pow(10.0, blockage_att_db.front() / 20.0);

        for (std::size_t page = 0; page < pages; ++page)
        {
            for (std::size_t u = 0; u < u_size; ++u)
            {
                for (std::size_t s = 0; s < s_size; ++s)
                {
                    cm.coeff(u, s, page) *= scatter_scale;
                }
            }
        }
        for (std::size_t u = 0; u < u_size; ++u)
        {
            const Vec3 d_u = rx_array.element_location(u, lambda);
            const std::complex<double> rx_ph =
                unit_phasor(2.0 * kPi / lambda * k_rx_los.dot(d_u));
            for (std::size_t s = 0; s < s_size; ++s)
            {
                const Vec3 d_s = tx_array.element_location(s, lambda);
                std::complex<double> ray = pol_los * dist_phase * rx_ph *
                                           unit_phasor(2.0 * kPi / lambda * k_tx_los.dot(d_s));
                if (los_att > 0.0)
                {
                    ray /= los_att;
                }
                cm.coeff(u, s, 0) += los_scale * ray;
            }
        }
    }

    // Doppler of the central ray per page
    cm.doppler_hz.resize(pages);
    for (std::size_t page = 0; page < pages; ++page)
    {
        cm.doppler_hz[page] = cluster_doppler_hz(cm.cluster_aoa_deg[page],
                                                 cm.cluster_zoa_deg[page],
                                                 cm.cluster_aod_deg[page],
                                                 cm.cluster_zod_deg[page],
                                                 v_rx,
                                                 v_tx,
                                                 fc_hz);
    }

    // restore the sorted-delay invariant across appended sub-cluster pages
    std::vector<std::size_t> order(pages);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        return cm.delays_s[l] < cm.delays_s[r];
    });
    ChannelMatrix sorted = cm;
    for (std::size_t page = 0; page < pages; ++page)
    {
        const std::size_t src = order[page];
        sorted.delays_s[page] = cm.delays_s[src];
        sorted.doppler_hz[page] = cm.doppler_hz[src];
        sorted.cluster_aoa_deg[page] = cm.cluster_aoa_deg[src];
        sorted.cluster_zoa_deg[page] = cm.cluster_zoa_deg[src];
        sorted.cluster_aod_deg[page] = cm.cluster_aod_deg[src];
        sorted.cluster_zod_deg[page] = cm.cluster_zod_deg[src];
        std::copy(cm.h.begin() + src * u_size * s_size,
                  cm.h.begin() + (src + 1) * u_size * s_size,
                  sorted.h.begin() + page * u_size * s_size);
    }
    return sorted;
}

std::vector<double> FadingModel::blockage_attenuation_db(
    const ParameterCatalog& catalog,
    const FadingConfig& config,
    const std::vector<std::array<double, 5>>& regions,
    const std::vector<double>& cluster_aoa_deg,
    const std::vector<double>& cluster_zoa_deg)
{
    const std::size_t n = cluster_aoa_deg.size();
    std::vector<double> att(n, 0.0);
    if (!config.blockage_enabled)
    {
        return att;
    }
    const BlockageConstants& bc = catalog.blockage();
    const double phi_sb = config.portrait_mode ? bc.port_phi : bc.land_phi;
    const double x_sb = config.portrait_mode ? bc.port_x : bc.land_x;
    const double theta_sb = config.portrait_mode ? bc.port_theta : bc.land_theta;
    const double y_sb = config.portrait_mode ? bc.port_y : bc.land_y;
    const double lambda = kSpeedOfLight / config.fc_hz;

    for (std::size_t i = 0; i < n; ++i)
    {
        const double aoa = wrap_deg_360(cluster_aoa_deg[i]);
        const double zoa = cluster_zoa_deg[i];

        // self-blocking region: flat 30 dB
        if (std::abs(wrap_deg_180(aoa - phi_sb)) < x_sb / 2.0 &&
            std::abs(zoa - theta_sb) < y_sb / 2.0)
        {
            att[i] += 30.0;
        }

        for (const auto& region : regions)
        {
            // the stored phi is a standard normal; map it to uniform(0,360)
            const double phi_k = 0.5 * std::erfc(-region[0] / std::sqrt(2.0)) * 360.0;
            const double x_k = region[1];
            const double theta_k = region[2];
            const double y_k = region[3];
            const double r = region[4];

            const double da = wrap_deg_180(aoa - phi_k);
            const double dz = zoa - theta_k;
            if (std::abs(da) >= x_k || std::abs(dz) >= y_k)
            {
                continue;
            }
            // knife-edge attenuation (7.6-22)..(7.6-27)
            const double a1 = da - x_k / 2.0;
            const double a2 = da + x_k / 2.0;
            const double z1 = dz - y_k / 2.0;
            const double z2 = dz + y_k / 2.0;
            const double sign_a1 = (x_k / 2.0 < da && da <= x_k) ? -1.0 : 1.0;
            const double sign_a2 = (-x_k < da && da <= -x_k / 2.0) ? -1.0 : 1.0;
            const double sign_z1 = (y_k / 2.0 < dz && dz <= y_k) ? -1.0 : 1.0;
            const double sign_z2 = (-y_k < dz && dz <= -y_k / 2.0) ? -1.0 : 1.0;
            const auto knife = [&](double sign, double angle_deg) {
                const double sec = 1.0 / std::cos(deg2rad(angle_deg)) - 1.0;
                return std::atan(sign * kPi / 2.0 * std::sqrt(kPi / lambda * r * sec)) / kPi;
            };
            const double fa1 = knife(sign_a1, a1);
            const double fa2 = knife(sign_a2, a2);
            const double fz1 = knife(sign_z1, z1);
            const double fz2 = knife(sign_z2, z2);
            att[i] += -20.0 * std::log10(1.0 - (fa1 + fa2) * (fz1 + fz2));
        }
    }
    return att;
}

void FadingModel::update_blocker_regions(BlockerState& state,
                                         const Position& ut_pos,
                                         double now_s)
{
    const bool indoor = m_config.scenario == Scenario::InHOfficeMixed ||
                        m_config.scenario == Scenario::InHOfficeOpen;
    const BlockageRegionParams& rp =
        indoor ? m_catalog->blockage().indoor : m_catalog->blockage().outdoor;

    if (state.regions.empty())
    {
        for (int k = 0; k < m_config.num_nonself_blockers; ++k)
        {
            std::array<double, 5> region{};
            region[0] = m_rng_blockage.normal(); // mapped to uniform azimuth on use
            region[1] = rp.x_min_deg == rp.x_max_deg
                            ? rp.x_min_deg
                            : m_rng_blockage.uniform(rp.x_min_deg, rp.x_max_deg);
            region[2] = rp.theta_deg;
            region[3] = rp.y_min_deg == rp.y_max_deg
                            ? rp.y_min_deg
                            : m_rng_blockage.uniform(rp.y_min_deg, rp.y_max_deg);
            region[4] = rp.r_m;
            state.regions.push_back(region);
        }
        state.last_ut_pos = ut_pos;
        state.last_time_s = now_s;
        return;
    }

    const double dx = ut_pos.x - state.last_ut_pos.x;
    const double dy = ut_pos.y - state.last_ut_pos.y;
    const double delta = std::sqrt(dx * dx + dy * dy);
    if (delta > 1e-6 || m_config.blocker_speed_ms > 1e-6)
    {
        double rho;
        if (m_config.blocker_speed_ms > 1e-6)
        {
            const double corr_t = rp.corr_dist_m / m_config.blocker_speed_ms;
            rho = std::exp(-(delta / rp.corr_dist_m + (now_s - state.last_time_s) / corr_t));
        }
        else
        {
            rho = std::exp(-delta / rp.corr_dist_m);
        }
        // compensate the normal->uniform correlation distortion
        if (rho * rho * (-0.069) + rho * 1.074 - 0.002 < 1.0)
        {
            rho = rho * rho * (-0.069) + rho * 1.074 - 0.002;
        }
        for (auto& region : state.regions)
        {
            region[0] = rho * region[0] + std::sqrt(1.0 - rho * rho) * m_rng_blockage.normal();
        }
    }
    state.last_ut_pos = ut_pos;
    state.last_time_s = now_s;
}

std::shared_ptr<const ChannelMatrix> FadingModel::get_channel(NodeId a,
                                                              const Position& pa,
                                                              const Velocity& va,
                                                              NodeId b,
                                                              const Position& pb,
                                                              const Velocity& vb,
                                                              double now_s)
{
    const std::shared_ptr<AntennaArray> tx_array = array_of(a);
    const std::shared_ptr<AntennaArray> rx_array = array_of(b);
    const RelativeGeometry geom = relative_geometry(pa, pb); // rejects zero distance

    const ChannelCondition cond = m_condition_model->get(a, b, pa, pb, now_s);

    const PairKey key(a, b);
    auto it = m_cache.find(key);
    if (it != m_cache.end())
    {
        const bool expired = m_config.update_period_s > 0.0 &&
                             now_s - it->second.matrix->generated_at_s >= m_config.update_period_s;
        const bool flipped = it->second.matrix->condition != cond.state;
        if (!expired && !flipped)
        {
            return it->second.matrix;
        }
    }

    const FastFadingEntry& entry = m_catalog->fast_fading(m_config.scenario, cond.state);
    EvalCtx ctx;
    ctx.fc_ghz = m_config.fc_hz / 1e9;
    ctx.d2d_m = geom.d2d_m;
    ctx.hut_m = std::min(pa.z, pb.z);
    ctx.hbs_m = std::max(pa.z, pb.z);

    const LargeScaleParams lsp = draw_large_scale_params(entry, ctx, cond.state, m_rng_lsp);
    const ClusterDelays all_delays = generate_cluster_delays(
        lsp.ds_s, entry.r_tau, lsp.k_db, cond.state, entry.num_clusters, m_rng_delay);
    const ClusterPowers all_powers = generate_cluster_powers(all_delays,
                                                             lsp.ds_s,
                                                             entry.r_tau,
                                                             entry.per_cluster_shadowing_db,
                                                             lsp.k_db,
                                                             cond.state,
                                                             m_rng_power);

    std::vector<double> delays;
    std::vector<double> scattered;
    std::vector<double> angle_powers;
    for (const std::size_t idx : all_powers.kept)
    {
        delays.push_back(all_delays.for_matrix[idx]);
        scattered.push_back(all_powers.scattered[idx]);
        angle_powers.push_back(all_powers.with_los[idx]);
    }

    RayParams rays = generate_ray_angles(lsp,
                                         angle_powers,
                                         *m_catalog,
                                         entry,
                                         cond.state,
                                         geom.aod,
                                         geom.aoa,
                                         zod_offset_deg(entry, ctx),
                                         m_rng_angle,
                                         m_rng_coupling);
    draw_polarization(entry, scattered.size(), entry.rays_per_cluster, rays, m_rng_polar);

    std::vector<double> blockage_att;
    CacheEntry& slot = m_cache[key];
    if (m_config.blockage_enabled)
    {
        const Position ut_pos = pa.z <= pb.z ? pa : pb;
        update_blocker_regions(slot.blockers, ut_pos, now_s);
        blockage_att = blockage_attenuation_db(*m_catalog,
                                               m_config,
                                               slot.blockers.regions,
                                               rays.cluster_aoa_deg,
                                               rays.cluster_zoa_deg);
        for (std::size_t i = 0; i < scattered.size(); ++i)
        {
            scattered[i] /= std::pow(10.0, blockage_att[i] / 10.0);
        }
    }

    const double c_ds_s = entry.c_ds_ns.eval(ctx) * 1e-9;
    ChannelMatrix cm = assemble_channel_matrix(rays,
                                               scattered,
                                               delays,
                                               lsp.k_db,
                                               c_ds_s,
                                               *tx_array,
                                               *rx_array,
                                               va,
                                               vb,
                                               geom,
                                               m_config.fc_hz,
                                               cond.state,
                                               blockage_att);
    cm.generated_at_s = now_s;
    cm.tx_node = a;
    cm.rx_node = b;
    slot.matrix = std::make_shared<const ChannelMatrix>(std::move(cm));
    return slot.matrix;
}

} // namespace scm901
