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
// Scenario parameter catalog: pathloss coefficients, LOS-probability models,
// fast-fading (LSP/cluster) tables and blockage constants, all transcribed
// from the public TR 38.901 tables. Every record carries the table it was
// transcribed from, and the file format is line-oriented text so the numbers
// stay reviewable. Parsing is strict: unknown fields are rejected.

#pragma once

#include "linexpr.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace scm901
{

enum class Scenario
{
    RMa,
    UMa,
    UMiStreetCanyon,
    InHOfficeMixed,
    InHOfficeOpen
};

enum class Condition
{
    LOS,
    NLOS
};

const char* to_string(Scenario s);
const char* to_string(Condition c);
Scenario scenario_from_string(const std::string& s);
Condition condition_from_string(const std::string& s);

/// All five scenarios shipped by the default catalog.
inline constexpr std::array<Scenario, 5> kAllScenarios = {Scenario::RMa,
                                                          Scenario::UMa,
                                                          Scenario::UMiStreetCanyon,
                                                          Scenario::InHOfficeMixed,
                                                          Scenario::InHOfficeOpen};

/// Breakpoint-distance rule of a pathloss entry.
enum class BpRule
{
    None,
    EffectiveHeight4x, // d'BP = 4 (hBS-1)(hUT-1) fc / c
    Rma2Pi             // dBP  = 2 pi hBS hUT fc / c
};

/// How the A/B coefficients of a branch are obtained.
enum class CoefRule
{
    Constant,
    RmaNlosA, // 43.42 - 3.1 log10(hBS)
    RmaNlosB  // RMa NLOS offset with W = 20 m, h = 5 m defaults
};

struct Coef
{
    CoefRule rule{CoefRule::Constant};
    double value{0.0};
};

/// Optional extra loss term X of a branch.
enum class XRule
{
    None,
    Constant,
    HutLinear,   // coef * (hUT - 1.5)
    D3dLinear,   // coef * d3D
    BpHeightLog, // coef * log10(d'BP^2 + (hBS - hUT)^2)
    RmaPl2       // PL1(dBP) - 40 log10(dBP); dual-slope continuation branch
};

struct XTerm
{
    XRule rule{XRule::None};
    double coef{0.0};
};

/// One slope branch of PL = A log10(d3D) + B + C log10(fc_GHz) + X.
struct PathlossBranch
{
    int branch{1};
    Coef a;
    Coef b;
    double c{0.0};
    XTerm x;
    double sigma_sf_db{0.0};
    double corr_dist_m{0.0};
    double validity_min_m{0.0};
    double validity_max_m{0.0};
    std::string tr_table_ref;
};

struct PathlossEntry
{
    BpRule bp_rule{BpRule::None};
    std::vector<PathlossBranch> branches; // ordered by branch number
};

enum class LosProbForm
{
    Rma, // exp decay beyond a near threshold
    Uma, // UMi form plus the high-UT correction
    Umi, // 18/d + exp(-d/decay)(1 - 18/d)
    Inh  // two-segment exp decay with a far-branch scale
};

struct LosProbEntry
{
    LosProbForm form{LosProbForm::Rma};
    double near_m{0.0};
    double decay_m{0.0};
    double far_m{0.0};       // Inh only
    double far_decay_m{0.0}; // Inh only
    double far_scale{0.0};   // Inh only
    std::string tr_table_ref;
};

/// Rule for the ZOD offset mu_offset applied in TR step 7.
enum class ZodOffsetRule
{
    None,
    RmaNlos,
    UmaNlos,
    UmiNlos
};

/// LSP draw order used throughout: [SF, K, DS, ASD, ASA, ZSD, ZSA].
inline constexpr int kNumLsp = 7;

struct FastFadingEntry
{
    int num_clusters{0};
    int rays_per_cluster{0};
    double r_tau{0.0};
    double per_cluster_shadowing_db{0.0};
    LinExpr mu_lg_ds, sigma_lg_ds;
    LinExpr mu_lg_asd, sigma_lg_asd;
    LinExpr mu_lg_asa, sigma_lg_asa;
    LinExpr mu_lg_zsa, sigma_lg_zsa;
    LinExpr mu_lg_zsd, sigma_lg_zsd;
    LinExpr mu_k_db, sigma_k_db;
    LinExpr c_ds_ns;
    LinExpr c_asd_deg, c_asa_deg, c_zsa_deg;
    double mu_xpr_db{0.0};
    double sigma_xpr_db{0.0};
    ZodOffsetRule zod_offset{ZodOffsetRule::None};
    std::string tr_table_ref;

    std::array<std::array<double, kNumLsp>, kNumLsp> lsp_corr{};      // symmetric, unit diagonal
    std::array<std::array<double, kNumLsp>, kNumLsp> lsp_corr_sqrt{}; // symmetric square root
    std::string corr_tr_table_ref;
};

struct BlockageRegionParams
{
    double x_min_deg{0.0}, x_max_deg{0.0};
    double theta_deg{0.0};
    double y_min_deg{0.0}, y_max_deg{0.0};
    double r_m{0.0};
    double corr_dist_m{0.0};
    std::string tr_table_ref;
};

struct BlockageConstants
{
    // self-blocking region {phi, x, theta, y} in degrees, per device mode
    double land_phi{0.0}, land_x{0.0}, land_theta{0.0}, land_y{0.0};
    double port_phi{0.0}, port_x{0.0}, port_theta{0.0}, port_y{0.0};
    std::string tr_table_ref;
    BlockageRegionParams indoor;
    BlockageRegionParams outdoor;
};

struct ScenarioParams
{
    Scenario scenario{Scenario::RMa};
    LosProbEntry los_prob;
    std::map<Condition, PathlossEntry> pathloss;
    std::map<Condition, FastFadingEntry> fast_fading;
};

/// Immutable after load; freely shared between models.
class ParameterCatalog
{
  public:
    /// Load and strictly validate a catalog file. Throws std::runtime_error
    /// naming the offending record on any validation failure.
    static std::shared_ptr<const ParameterCatalog> load(const std::string& path);

    /// Same, from in-memory text; `name` is used in error messages.
    static std::shared_ptr<const ParameterCatalog> load_text(const std::string& text,
                                                             const std::string& name = "<memory>");

    /// The catalog embedded at build time.
    static std::shared_ptr<const ParameterCatalog> embedded_default();

    const ScenarioParams& scenario(Scenario s) const;
    const PathlossEntry& pathloss(Scenario s, Condition c) const;
    const FastFadingEntry& fast_fading(Scenario s, Condition c) const;
    const LosProbEntry& los_prob(Scenario s) const;

    const std::vector<double>& ray_offsets() const { return m_ray_offsets; }
    /// Azimuth / zenith scaling factors keyed by cluster count (TR step 7).
    double cphi_nlos(int num_clusters) const;
    double ctheta_nlos(int num_clusters) const;
    const BlockageConstants& blockage() const { return m_blockage; }

    int version() const { return m_version; }
    /// FNV-1a hash of the source text; a provenance fingerprint, not a MAC.
    std::uint64_t checksum() const { return m_checksum; }

    /// Canonical text form; load_text(canonical_format()) reproduces the
    /// catalog and re-formatting is byte-stable.
    std::string canonical_format() const;

  private:
    ParameterCatalog() = default;
    void validate(const std::string& name);

    std::map<Scenario, ScenarioParams> m_scenarios;
    std::vector<double> m_ray_offsets;
    std::string m_ray_offsets_ref;
    std::map<int, double> m_cphi;
    std::string m_cphi_ref;
    std::map<int, double> m_ctheta;
    std::string m_ctheta_ref;
    BlockageConstants m_blockage;
    int m_version{0};
    std::uint64_t m_checksum{0};

    friend class CatalogParser;
};

/// Symmetric square root of a PSD matrix via Jacobi eigendecomposition.
/// Throws std::runtime_error (tagged with `what`) if an eigenvalue is below
/// -1e-9; tiny negative eigenvalues are clamped to zero.
std::array<std::array<double, kNumLsp>, kNumLsp> symmetric_sqrt(
    const std::array<std::array<double, kNumLsp>, kNumLsp>& c,
    const std::string& what);

} // namespace scm901
