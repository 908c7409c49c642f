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
#include "rng.hpp"
#include "tables.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>

namespace scm901
{

using NodeId = std::uint32_t;

/// Unordered node pair; the cache key for condition, shadowing and channel
/// state (the condition of a link is reciprocal).
struct PairKey
{
    NodeId lo{0};
    NodeId hi{0};

    PairKey() = default;
    PairKey(NodeId a, NodeId b)
        : lo(a < b ? a : b),
          hi(a < b ? b : a)
    {
    }
    auto operator<=>(const PairKey&) const = default;
};

/// LOS/NLOS state of a node pair plus the time it was drawn.
struct ChannelCondition
{
    Condition state{Condition::LOS};
    double generated_at_s{0.0};
};

/// Per-scenario stochastic LOS/NLOS model with per-pair caching.
///
/// The first query draws the state from the scenario's distance-dependent LOS
/// probability; later queries return the cached state until it is older than
/// the update period, at which point a fresh state is drawn independently
/// (no temporal correlation). An update period of zero means the state is
/// never refreshed. Queries must be externally serialized per instance.
class ChannelConditionModel
{
  public:
    /// update_period_s = 0 disables updates.
    ChannelConditionModel(std::shared_ptr<const ParameterCatalog> catalog,
                          Scenario scenario,
                          double update_period_s,
                          std::uint64_t seed);

    /// Model that always reports `forced`, for experiments that plot the two
    /// conditions separately.
    static std::shared_ptr<ChannelConditionModel> fixed(
        std::shared_ptr<const ParameterCatalog> catalog,
        Scenario scenario,
        Condition forced);

    /// LOS probability of the link geometry, deterministic in its inputs.
    static double los_probability(const ParameterCatalog& catalog,
                                  Scenario scenario,
                                  const Position& a,
                                  const Position& b);

    ChannelCondition get(NodeId a,
                         NodeId b,
                         const Position& pa,
                         const Position& pb,
                         double now_s);

    Scenario scenario() const { return m_scenario; }
    double update_period_s() const { return m_update_period_s; }

  private:
    std::shared_ptr<const ParameterCatalog> m_catalog;
    Scenario m_scenario;
    double m_update_period_s;
    std::optional<Condition> m_forced;
    Rng m_rng;
    std::map<PairKey, ChannelCondition> m_cache;
};

} // namespace scm901
