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
//
// Cluster-level fast-fading channel generation following the TR 38.901
// section 7.5 pipeline: correlated large-scale parameters, exponential
// cluster delays, power profile with -25 dB pruning, cluster/ray angles with
// random coupling, per-ray polarization draws, optional stochastic blockage
// (Model A), and the element-pairwise coefficient assembly. The Doppler
// factor is not baked into the coefficients; each cluster's central-ray
// Doppler shift is stored alongside the matrix.

#pragma once

#include "antenna.hpp"
#include "condition.hpp"
#include "geometry.hpp"
#include "rng.hpp"
#include "tables.hpp"

#include <array>
#include <complex>
#include <map>
#include <memory>
#include <vector>

namespace scm901
{

/// Per-link large-scale fading parameters (TR step 4). The shadow-fading
/// slot participates in the correlated draw but its value is owned by the
/// propagation module.
struct LargeScaleParams
{
    double ds_s{0.0};
    double asd_deg{0.0};
    double asa_deg{0.0};
    double zsd_deg{0.0};
    double zsa_deg{0.0};
    double k_db{0.0};
    double mu_lg_zsd{0.0}; // table mean; sets the ray ZOD offset in step 7
};

/// Cluster delays (TR step 5). The power profile of step 6 uses the unscaled
/// delays; in LOS the coefficients use the Ricean-rescaled ones.
struct ClusterDelays
{
    std::vector<double> for_power;  // sorted, min-subtracted, seconds
    std::vector<double> for_matrix; // LOS: for_power / c_tau; otherwise equal
};

/// Cluster powers (TR step 6).
struct ClusterPowers
{
    /// Normalized to unit sum; scales the scattered rays in step 11.
    std::vector<double> scattered;
    /// LOS: direct-path power K/(K+1) added to cluster 1 and the rest scaled
    /// by 1/(K+1); used for angle generation and pruning. NLOS: == scattered.
    std::vector<double> with_los;
    /// Indices surviving the -25 dB relative-power pruning.
    std::vector<std::size_t> kept;
};

/// Cluster/ray angles and per-ray polarization draws (TR steps 7-10).
/// Angles are stored per kept cluster; ray angles are coupled (randomly
/// permuted within each cluster).
struct RayParams
{
    std::vector<double> cluster_aoa_deg, cluster_zoa_deg, cluster_aod_deg, cluster_zod_deg;
    std::vector<std::vector<double>> ray_aoa_rad, ray_zoa_rad, ray_aod_rad, ray_zod_rad;
    // initial phases [theta-theta, theta-phi, phi-theta, phi-phi]
    std::vector<std::vector<std::array<double, 4>>> phases_rad;
    std::vector<std::vector<double>> xpr_linear;
};

/// Cluster-level channel realization between two antenna arrays, oriented
/// tx_node -> rx_node as generated. Coefficients exclude the Doppler factor
/// and the delay delta; delays are sorted ascending with the first equal to
/// zero, and in LOS the first cluster carries the direct path.
///
/// One realization serves both link directions: a consumer transmitting from
/// rx_node reads the matrix transposed, H'[u][s][n] = H[s][u][n] (plain
/// transpose, matching the PSD equation's transpose-only combining), with
/// departure and arrival angles swapped. Delays and Doppler shifts are
/// direction-independent.
struct ChannelMatrix
{
    std::size_t u_size{0}; // rx elements
    std::size_t s_size{0}; // tx elements
    std::size_t num_clusters{0};
    std::vector<std::complex<double>> h; // dense, u fastest
    std::vector<double> delays_s;
    std::vector<double> doppler_hz;
    std::vector<double> cluster_aoa_deg, cluster_zoa_deg, cluster_aod_deg, cluster_zod_deg;
    double generated_at_s{0.0};
    NodeId tx_node{0};
    NodeId rx_node{0};
    Condition condition{Condition::LOS};

    const std::complex<double>& coeff(std::size_t u, std::size_t s, std::size_t n) const
    {
        return h[u + s * u_size + n * u_size * s_size];
    }
    std::complex<double>& coeff(std::size_t u, std::size_t s, std::size_t n)
    {
        return h[u + s * u_size + n * u_size * s_size];
    }
};

struct FadingConfig
{
    Scenario scenario{Scenario::UMa};
    double fc_hz{2.1e9};
    double update_period_s{0.0};
    bool blockage_enabled{false};
    int num_nonself_blockers{4};
    double blocker_speed_ms{0.0};
    bool portrait_mode{false};
};

/// Generates and caches per-pair channel matrices. Matrix generation and
/// cache mutation must be serialized per node pair; returned matrices are
/// immutable and safe to read concurrently.
class FadingModel
{
  public:
    FadingModel(std::shared_ptr<const ParameterCatalog> catalog,
                const FadingConfig& config,
                std::shared_ptr<ChannelConditionModel> condition_model,
                std::uint64_t seed);

    void register_node(NodeId node, std::shared_ptr<AntennaArray> array);
    std::shared_ptr<AntennaArray> array_of(NodeId node) const;

    /// Cached per unordered pair. Regenerates when the update period expired
    /// or the LOS/NLOS condition flipped since generation, re-running the
    /// whole pipeline.
    std::shared_ptr<const ChannelMatrix> get_channel(NodeId a,
                                                     const Position& pa,
                                                     const Velocity& va,
                                                     NodeId b,
                                                     const Position& pb,
                                                     const Velocity& vb,
                                                     double now_s);

    const FadingConfig& config() const { return m_config; }

    // ---- pipeline stages, exposed for direct verification ----

    static LargeScaleParams draw_large_scale_params(const FastFadingEntry& entry,
                                                    const EvalCtx& ctx,
                                                    Condition condition,
                                                    Rng& rng);

    static ClusterDelays generate_cluster_delays(double ds_s,
                                                 double r_tau,
                                                 double k_db,
                                                 Condition condition,
                                                 int num_clusters,
                                                 Rng& rng);

    static ClusterPowers generate_cluster_powers(const ClusterDelays& delays,
                                                 double ds_s,
                                                 double r_tau,
                                                 double per_cluster_shadowing_db,
                                                 double k_db,
                                                 Condition condition,
                                                 Rng& rng);

    static RayParams generate_ray_angles(const LargeScaleParams& lsp,
                                         const std::vector<double>& angle_powers,
                                         const ParameterCatalog& catalog,
                                         const FastFadingEntry& entry,
                                         Condition condition,
                                         const AngularPair& aod_los,
                                         const AngularPair& aoa_los,
                                         double zod_offset_deg,
                                         Rng& angle_rng,
                                         Rng& coupling_rng);

    /// TR steps 9-10: per-ray XPR and initial phases.
    static void draw_polarization(const FastFadingEntry& entry,
                                  std::size_t num_clusters,
                                  std::size_t rays_per_cluster,
                                  RayParams& rays,
                                  Rng& rng);

    /// ZOD offset mu_offset of TR step 7 for the entry's rule, degrees.
    static double zod_offset_deg(const FastFadingEntry& entry, const EvalCtx& ctx);

    /// TR step 11. `blockage_att_db` holds one value per kept cluster (empty
    /// means no blockage). Sub-cluster splitting of the two strongest
    /// clusters applies when rays_per_cluster == 20, the only ray count the
    /// TR partition is defined for. Cluster pages are sorted by delay.
    static ChannelMatrix assemble_channel_matrix(const RayParams& rays,
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
                                                 const std::vector<double>& blockage_att_db);

    /// Central-ray Doppler shift of a cluster, Hz.
    static double cluster_doppler_hz(double aoa_deg,
                                     double zoa_deg,
                                     double aod_deg,
                                     double zod_deg,
                                     const Velocity& v_rx,
                                     const Velocity& v_tx,
                                     double fc_hz);

    /// Blockage Model A attenuation per cluster, dB (>= 0). Self-blocking
    /// uses the portrait/landscape region; non-self blocking regions are
    /// taken from `regions` (rows of [phi_normal, x, theta, y, r]).
    static std::vector<double> blockage_attenuation_db(
        const ParameterCatalog& catalog,
        const FadingConfig& config,
        const std::vector<std::array<double, 5>>& regions,
        const std::vector<double>& cluster_aoa_deg,
        const std::vector<double>& cluster_zoa_deg);

  private:
    struct BlockerState
    {
        std::vector<std::array<double, 5>> regions; // phi (normal domain), x, theta, y, r
        Position last_ut_pos;
        double last_time_s{0.0};
    };

    struct CacheEntry
    {
        std::shared_ptr<const ChannelMatrix> matrix;
        BlockerState blockers;
    };

    void update_blocker_regions(BlockerState& state, const Position& ut_pos, double now_s);

    std::shared_ptr<const ParameterCatalog> m_catalog;
    FadingConfig m_config;
    std::shared_ptr<ChannelConditionModel> m_condition_model;
    std::map<NodeId, std::shared_ptr<AntennaArray>> m_arrays;
    std::map<PairKey, CacheEntry> m_cache;

    // named substreams so that toggling one feature leaves the others' draws
    // untouched
    Rng m_rng_lsp;
    Rng m_rng_delay;
    Rng m_rng_power;
    Rng m_rng_angle;
    Rng m_rng_coupling;
    Rng m_rng_polar;
    Rng m_rng_blockage;
};

} // namespace scm901
