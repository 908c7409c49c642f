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

#include "condition.hpp"

#include <cmath>
#include <stdexcept>

namespace scm901
{

ChannelConditionModel::ChannelConditionModel(std::shared_ptr<const ParameterCatalog> catalog,
                                             Scenario scenario,
                                             double update_period_s,
                                             std::uint64_t seed)
    : m_catalog(std::move(catalog)),
      m_scenario(scenario),
      m_update_period_s(update_period_s),
      m_rng(Rng(seed).substream("channel-condition"))
{
    if (update_period_s < 0.0)
    {
        throw std::invalid_argument("update period must be >= 0");
    }
    m_catalog->los_prob(scenario); // fail early on unsupported scenario
}

std::shared_ptr<ChannelConditionModel> ChannelConditionModel::fixed(
    std::shared_ptr<const ParameterCatalog> catalog,
    Scenario scenario,
    Condition forced)
{
    auto m = std::make_shared<ChannelConditionModel>(std::move(catalog), scenario, 0.0, 0);
    m->m_forced = forced;
    return m;
}

double ChannelConditionModel::los_probability(const ParameterCatalog& catalog,
                                              Scenario scenario,
                                              const Position& a,
                                              const Position& b)
{
    const LosProbEntry& e = catalog.los_prob(scenario);
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double d = std::sqrt(dx * dx + dy * dy);
    if (d <= e.near_m)
    {
        return 1.0;
    }
    switch (e.form)
    {
    case LosProbForm::Rma:
        return std::exp(-(d - e.near_m) / e.decay_m);
    case LosProbForm::Umi:
        return e.near_m / d + std::exp(-d / e.decay_m) * (1.0 - e.near_m / d);
    case LosProbForm::Uma:
    {
        const double base = e.near_m / d + std::exp(-d / e.decay_m) * (1.0 - e.near_m / d);
        const double hut = std::min(a.z, b.z);
        // high-UT correction C'(hUT) of Table 7.4.2-1, zero below 13 m
        double chut = 0.0;
        if (hut > 13.0)
        {
            chut = std::pow((hut - 13.0) / 10.0, 1.5);
        }
        const double g = 1.25 * std::pow(d / 100.0, 3.0) * std::exp(-d / 150.0);
        return std::min(1.0, base * (1.0 + chut * g));
    }
    case LosProbForm::Inh:
        if (d < e.far_m)
        {
            return std::exp(-(d - e.near_m) / e.decay_m);
        }
        return std::exp(-(d - e.far_m) / e.far_decay_m) * e.far_scale;
    }
    throw std::logic_error("unreachable");
}

ChannelCondition ChannelConditionModel::get(NodeId a,
                                            NodeId b,
                                            const Position& pa,
                                            const Position& pb,
                                            double now_s)
{
    if (m_forced)
    {
        return {*m_forced, 0.0};
    }
    const PairKey key(a, b);
    const auto it = m_cache.find(key);
    if (it != m_cache.end())
    {
        const bool expired =
            m_update_period_s > 0.0 && now_s - it->second.generated_at_s >= m_update_period_s;
        if (!expired)
        {
            return it->second;
        }
    }
    const double p = los_probability(*m_catalog, m_scenario, pa, pb);
    const ChannelCondition cond{m_rng.uniform() < p ? Condition::LOS : Condition::NLOS, now_s};
    m_cache[key] = cond;
    return cond;
}

} // namespace scm901
