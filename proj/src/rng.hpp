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

#include <cstdint>
#include <random>
#include <string_view>

namespace scm901
{

/// Deterministic random stream. Wraps std::mt19937_64 (fully specified by the
/// standard) with hand-rolled variate transforms, so seeded runs are
/// bit-stable across platforms and standard-library versions.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed);

    /// Independent child stream derived from this stream's seed and a purpose
    /// label. Streams for different pipeline stages are kept separate so that
    /// enabling one feature does not perturb the draws of another.
    Rng substream(std::string_view label) const;

    /// Child stream indexed by an integer (per-run / per-pair streams).
    Rng substream(std::uint64_t index) const;

    std::uint64_t seed() const { return m_seed; }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform();

    /// Uniform on [a, b).
    double uniform(double a, double b);

    /// Uniform on (0, 1]; safe as a log() argument.
    double uniform_pos();

    /// Standard normal via the Box-Muller transform; consumes exactly two
    /// uniform draws (no cached spare, to keep stream accounting simple).
    double normal();

    double normal(double mu, double sigma);

    /// Uniformly chosen +1 or -1.
    int sign();

    /// Fisher-Yates shuffle driven by this stream.
    template <typename It>
    void shuffle(It first, It last)
    {
        const auto n = static_cast<std::uint64_t>(last - first);
        for (std::uint64_t i = n; i > 1; --i)
        {
            const auto j = static_cast<std::uint64_t>(uniform() * static_cast<double>(i));
            std::swap(first[i - 1], first[j < i ? j : i - 1]);
        }
    }

  private:
    std::uint64_t m_seed;
    std::mt19937_64 m_engine;
};

/// SplitMix64 step; used for seed derivation.
std::uint64_t splitmix64(std::uint64_t x);

} // namespace scm901
