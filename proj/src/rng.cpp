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

#include "rng.hpp"

#include <cmath>
#include <numbers>

namespace scm901
{

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace
{

std::uint64_t fnv1a64(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : s)
    {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

Rng::Rng(std::uint64_t seed)
    : m_seed(seed),
      m_engine(splitmix64(seed))
{
}

Rng Rng::substream(std::string_view label) const
{
    return Rng(splitmix64(m_seed ^ fnv1a64(label)));
}

Rng Rng::substream(std::uint64_t index) const
{
    return Rng(splitmix64(m_seed ^ splitmix64(index + 0x51ed2701a9b5d1e3ULL)));
}

double Rng::uniform()
{
    return static_cast<double>(m_engine() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b)
{
    return a + (b - a) * uniform();
}

double Rng::uniform_pos()
{
    return 1.0 - uniform();
}

double Rng::normal()
{
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    return r * std::cos(phi);
}

double Rng::normal(double mu, double sigma)
{
    return mu + sigma * normal();
}

int Rng::sign()
{
    return uniform() < 0.5 ? -1 : 1;
}

} // namespace scm901
