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

#include "propagation.hpp"

#include <cmath>
#include <stdexcept>

namespace scm901
{

namespace
{

// RMa environment defaults of TR 38.901 Table 7.4.1-1: average street width
// and average building height.
constexpr double kRmaStreetWidthM = 20.0;
constexpr double kRmaBuildingHeightM = 5.0;

double coef_value(const Coef& c, double hbs, double hut)
{
    switch (c.rule)
    {
    case CoefRule::Constant:
        return c.value;
    case CoefRule::RmaNlosA:
        return 43.42 - 3.1 * std::log10(hbs);
    case CoefRule::RmaNlosB:
    {
        const double w = kRmaStreetWidthM;
        const double h = kRmaBuildingHeightM;
        const double a = 43.42 - 3.1 * std::log10(hbs);
        return 161.04 - 7.1 * std::log10(w) + 7.5 * std::log10(h) -
               (24.37 - 3.7 * (h / hbs) * (h / hbs)) * std::log10(hbs) - 3.0 * a -
               (3.2 * std::pow(std::log10(11.75 * hut), 2.0) - 4.97);
    }
    }
    throw std::logic_error("unreachable");
}

struct PlGeometry
{
    double d2d;
    double d3d;
    double hbs;
    double hut;
};

double eval_branch(const ParameterCatalog& catalog,
                   Scenario scenario,
                   const PathlossEntry& entry,
                   const PathlossBranch& br,
                   const PlGeometry& g,
                   double fc_hz,
                   double d_bp);

double eval_x(const ParameterCatalog& catalog,
              Scenario scenario,
              const PathlossEntry& entry,
              const PathlossBranch& br,
              const PlGeometry& g,
              double fc_hz,
              double d_bp)
{
    switch (br.x.rule)
    {
    case XRule::None:
        return 0.0;
    case XRule::Constant:
        return br.x.coef;
    case XRule::HutLinear:
        return br.x.coef * (g.hut - 1.5);
    case XRule::D3dLinear:
        return br.x.coef * g.d3d;
    case XRule::BpHeightLog:
        return br.x.coef * std::log10(d_bp * d_bp + (g.hbs - g.hut) * (g.hbs - g.hut));
    case XRule::RmaPl2:
    {
        // PL2(d) = PL1(dBP) + 40 log10(d3D / dBP), evaluated via branch 1
        // with d3D substituted by dBP.
        const PathlossBranch& b1 = entry.branches.front();
        const PlGeometry gbp{d_bp, d_bp, g.hbs, g.hut};
        return eval_branch(catalog, scenario, entry, b1, gbp, fc_hz, d_bp) -
               40.0 * std::log10(d_bp);
    }
    }
    throw std::logic_error("unreachable");
}

double eval_branch(const ParameterCatalog& catalog,
                   Scenario scenario,
                   const PathlossEntry& entry,
                   const PathlossBranch& br,
                   const PlGeometry& g,
                   double fc_hz,
                   double d_bp)
{
    const double a = coef_value(br.a, g.hbs, g.hut);
    const double b = coef_value(br.b, g.hbs, g.hut);
    const double fc_ghz = fc_hz / 1e9;
    return a * std::log10(g.d3d) + b + br.c * std::log10(fc_ghz) +
           eval_x(catalog, scenario, entry, br, g, fc_hz, d_bp);
}

} // namespace

PropagationLossModel::PropagationLossModel(std::shared_ptr<const ParameterCatalog> catalog,
                                           Scenario scenario,
                                           double fc_hz,
                                           std::shared_ptr<ChannelConditionModel> condition_model,
                                           bool shadowing_enabled,
                                           std::uint64_t seed)
    : m_catalog(std::move(catalog)),
      m_scenario(scenario),
      m_fc_hz(fc_hz),
      m_condition_model(std::move(condition_model)),
      m_shadowing_enabled(shadowing_enabled),
      m_rng(Rng(seed).substream("shadowing"))
{
    if (fc_hz < 0.5e9 || fc_hz > 100e9)
    {
        throw std::invalid_argument("carrier frequency must be within 0.5-100 GHz");
    }
    if (!m_condition_model)
    {
        throw std::invalid_argument("condition model must not be null");
    }
}

double PropagationLossModel::breakpoint_distance(const ParameterCatalog& catalog,
                                                 Scenario scenario,
                                                 double hbs_m,
                                                 double hut_m,
                                                 double fc_hz)
{
    const PathlossEntry& entry = catalog.pathloss(scenario, Condition::LOS);
    switch (entry.bp_rule)
    {
    case BpRule::None:
        throw std::invalid_argument(std::string("scenario ") + to_string(scenario) +
                                    " has no breakpoint rule");
    case BpRule::EffectiveHeight4x:
    {
        // effective environment height hE = 1 m; heights below it are invalid
        const double hb = hbs_m - 1.0;
        const double hu = hut_m - 1.0;
        if (hb < 0.0 || hu < 0.0)
        {
            throw std::invalid_argument("effective antenna height is negative");
        }
        return 4.0 * hb * hu * fc_hz / kSpeedOfLight;
    }
    case BpRule::Rma2Pi:
        if (hbs_m <= 0.0 || hut_m <= 0.0)
        {
            throw std::invalid_argument("antenna heights must be positive");
        }
        return 2.0 * kPi * hbs_m * hut_m * fc_hz / kSpeedOfLight;
    }
    throw std::logic_error("unreachable");
}

const PathlossBranch& PropagationLossModel::active_branch(const ParameterCatalog& catalog,
                                                          Scenario scenario,
                                                          Condition condition,
                                                          double d2d_m,
                                                          double hbs_m,
                                                          double hut_m,
                                                          double fc_hz)
{
    const PathlossEntry& entry = catalog.pathloss(scenario, condition);
    if (entry.branches.size() == 1)
    {
        return entry.branches.front();
    }
    const double d_bp = breakpoint_distance(catalog, scenario, hbs_m, hut_m, fc_hz);
    return d2d_m <= d_bp ? entry.branches.front() : entry.branches.back();
}

double PropagationLossModel::mean_pathloss(const ParameterCatalog& catalog,
                                           Scenario scenario,
                                           Condition condition,
                                           const Position& a,
                                           const Position& b,
                                           double fc_hz,
                                           const WarningSink& warn)
{
    if (fc_hz < 0.5e9 || fc_hz > 100e9)
    {
        throw std::invalid_argument("carrier frequency must be within 0.5-100 GHz");
    }
    const PathlossEntry& entry = catalog.pathloss(scenario, condition);

    PlGeometry g;
    g.hbs = std::max(a.z, b.z);
    g.hut = std::min(a.z, b.z);
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    g.d2d = std::sqrt(dx * dx + dy * dy);

    const double vmin = entry.branches.front().validity_min_m;
    const double vmax = entry.branches.front().validity_max_m;
    if (g.d2d < vmin || g.d2d > vmax)
    {
        const double clamped = std::min(std::max(g.d2d, vmin), vmax);
        if (warn)
        {
            warn(Warning{std::string("2D distance ") + std::to_string(g.d2d) + " m outside [" +
                         std::to_string(vmin) + ", " + std::to_string(vmax) + "] m for " +
                         to_string(scenario) + "/" + to_string(condition) + "; clamped to " +
                         std::to_string(clamped) + " m"});
        }
        g.d2d = clamped;
    }
    const double dz = g.hbs - g.hut;
    g.d3d = std::sqrt(g.d2d * g.d2d + dz * dz);

    double d_bp = 0.0;
    if (entry.bp_rule != BpRule::None)
    {
        d_bp = breakpoint_distance(catalog, scenario, g.hbs, g.hut, fc_hz);
    }

    const PathlossBranch& br = entry.branches.size() > 1 && g.d2d > d_bp ? entry.branches.back()
                                                                         : entry.branches.front();
    double loss = eval_branch(catalog, scenario, entry, br, g, fc_hz, d_bp);

    if (condition == Condition::NLOS)
    {
        // TR convention: PL_NLOS = max(PL_LOS, PL'_NLOS)
        const double los = mean_pathloss(catalog, scenario, Condition::LOS, a, b, fc_hz);
        loss = std::max(loss, los);
    }
    return loss;
}

double PropagationLossModel::mean_pathloss(Condition condition, const Position& a, const Position& b)
{
    return mean_pathloss(*m_catalog, m_scenario, condition, a, b, m_fc_hz,
                         [this](const Warning& w) { m_warnings.push_back(w); });
}

double PropagationLossModel::shadowing_correlation(double displacement_m, double corr_dist_m)
{
    return std::exp(-displacement_m / corr_dist_m);
}

double PropagationLossModel::shadowing_sample(NodeId a,
                                              NodeId b,
                                              const Position& pa,
                                              const Position& pb,
                                              Condition condition)
{
    const double hbs = std::max(pa.z, pb.z);
    const double hut = std::min(pa.z, pb.z);
    const double dx = pa.x - pb.x;
    const double dy = pa.y - pb.y;
    const double d2d = std::sqrt(dx * dx + dy * dy);
    const PathlossBranch& br =
        active_branch(*m_catalog, m_scenario, condition, d2d, hbs, hut, m_fc_hz);
    const double sigma = br.sigma_sf_db;

    const PairKey key(a, b);
    // canonical orientation so that (a,b) and (b,a) queries share the state
    const Vec3 rel = a < b ? pb - pa : pa - pb;
    const auto it = m_shadowing.find(key);
    if (it == m_shadowing.end() || it->second.condition != condition)
    {
        const double v = m_rng.normal(0.0, sigma);
        m_shadowing[key] = {v, rel, condition};
        return v;
    }
    ShadowingEntry& e = it->second;
    const double delta = (rel - e.relative_pos).norm();
    if (delta == 0.0)
    {
        return e.value_db;
    }
    const double rho = shadowing_correlation(delta, br.corr_dist_m);
    const double v = rho * e.value_db + std::sqrt(1.0 - rho * rho) * m_rng.normal(0.0, sigma);
    e.value_db = v;
    e.relative_pos = rel;
    return v;
}

double PropagationLossModel::rx_power_dbm(double tx_power_dbm,
                                          NodeId a,
                                          NodeId b,
                                          const Position& pa,
                                          const Position& pb,
                                          double now_s)
{
    const ChannelCondition cond = m_condition_model->get(a, b, pa, pb, now_s);
    double rx = tx_power_dbm - mean_pathloss(cond.state, pa, pb);
    if (m_shadowing_enabled)
    {
        rx -= shadowing_sample(a, b, pa, pb, cond.state);
    }
    return rx;
}

} // namespace scm901
