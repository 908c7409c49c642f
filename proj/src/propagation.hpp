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

#include "condition.hpp"
#include "geometry.hpp"
#include "rng.hpp"
#include "tables.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace scm901
{

/// Record emitted when an input had to be coerced (e.g. an out-of-validity
/// distance clamped) instead of rejected.
struct Warning
{
    std::string message;
};

using WarningSink = std::function<void(const Warning&)>;

/// Mean pathloss per scenario/condition plus spatially correlated log-normal
/// shadowing. mean_pathloss and breakpoint_distance are pure; the shadowing
/// cache and rx_power mutate per-pair state and must be externally serialized
/// per instance.
class PropagationLossModel
{
  public:
    PropagationLossModel(std::shared_ptr<const ParameterCatalog> catalog,
                         Scenario scenario,
                         double fc_hz,
                         std::shared_ptr<ChannelConditionModel> condition_model,
                         bool shadowing_enabled,
                         std::uint64_t seed);

    /// Breakpoint distance of the scenario's LOS model.
    /// Throws std::invalid_argument when the heights are incompatible with
    /// the scenario's breakpoint rule (effective height below zero, or
    /// non-positive heights for the RMa rule).
    static double breakpoint_distance(const ParameterCatalog& catalog,
                                      Scenario scenario,
                                      double hbs_m,
                                      double hut_m,
                                      double fc_hz);

    /// PL = A log10(d3D) + B + C log10(fc) + X for the matching slope branch;
    /// NLOS is lower-bounded by the LOS value at the same geometry.
    /// Out-of-validity 2D distances are clamped to the nearest valid distance
    /// and reported through `warn`.
    static double mean_pathloss(const ParameterCatalog& catalog,
                                Scenario scenario,
                                Condition condition,
                                const Position& a,
                                const Position& b,
                                double fc_hz,
                                const WarningSink& warn = {});

    double mean_pathloss(Condition condition, const Position& a, const Position& b);

    /// Spatially correlated shadowing sample, dB. Marginally N(0, sigma^2);
    /// consecutive samples of a pair follow new = rho*old +
    /// sqrt(1-rho^2)*N(0,sigma^2) with rho = exp(-Δd/corr_dist), where Δd is
    /// the change of the relative position since the last sample. A LOS/NLOS
    /// transition regenerates the value independently.
    double shadowing_sample(NodeId a,
                            NodeId b,
                            const Position& pa,
                            const Position& pb,
                            Condition condition);

    /// rx = tx - mean_pathloss - shadowing (shadowing omitted when disabled).
    double rx_power_dbm(double tx_power_dbm,
                        NodeId a,
                        NodeId b,
                        const Position& pa,
                        const Position& pb,
                        double now_s);

    /// AR(1) displacement correlation coefficient.
    static double shadowing_correlation(double displacement_m, double corr_dist_m);

    bool shadowing_enabled() const { return m_shadowing_enabled; }
    double frequency_hz() const { return m_fc_hz; }
    Scenario scenario() const { return m_scenario; }
    const std::vector<Warning>& warnings() const { return m_warnings; }
    void clear_warnings() { m_warnings.clear(); }

  private:
    struct ShadowingEntry
    {
        double value_db{0.0};
        Vec3 relative_pos;
        Condition condition{Condition::LOS};
    };

    /// Shadowing sigma and correlation distance of the branch that applies at
    /// this geometry.
    static const PathlossBranch& active_branch(const ParameterCatalog& catalog,
                                               Scenario scenario,
                                               Condition condition,
                                               double d2d_m,
                                               double hbs_m,
                                               double hut_m,
                                               double fc_hz);

    std::shared_ptr<const ParameterCatalog> m_catalog;
    Scenario m_scenario;
    double m_fc_hz;
    std::shared_ptr<ChannelConditionModel> m_condition_model;
    bool m_shadowing_enabled;
    Rng m_rng;
    std::map<PairKey, ShadowingEntry> m_shadowing;
    std::vector<Warning> m_warnings;
};

} // namespace scm901
