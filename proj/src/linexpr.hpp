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

#include <array>
#include <string>

namespace scm901
{

/// Inputs of the parameter-table expressions.
struct EvalCtx
{
    double fc_ghz{0.0};
    double d2d_m{0.0};
    double hut_m{0.0};
    double hbs_m{0.0};
};

/// Linear expression over the fixed basis used by the TR 38.901 parameter
/// tables:
///
///   lgfc  = log10(fc_GHz)         lg1fc = log10(1 + fc_GHz)
///   dkm   = d2D / 1000            hut15 = hUT - 1.5
///   dh    = hBS - hUT             dhup  = max(hUT - hBS, 0)
///
/// optionally wrapped in a one-sided clamp, e.g.
///   "max(-0.5, 0.75 - 2.1*dkm - 0.01*hut15)".
/// Parsing is strict; format() emits a canonical form whose re-parse is
/// bit-identical.
class LinExpr
{
  public:
    LinExpr() = default;

    /// Constant expression.
    static LinExpr constant(double v);

    /// Throws std::invalid_argument with a description on malformed input.
    static LinExpr parse(const std::string& text);

    double eval(const EvalCtx& ctx) const;
    std::string format() const;
    bool is_constant() const;

    bool operator==(const LinExpr& o) const = default;

    static constexpr int kNumVars = 6;

  private:
    // coefficient order: [const, lgfc, lg1fc, dkm, hut15, dh, dhup]
    std::array<double, kNumVars + 1> m_coef{};
    enum class Clamp
    {
        None,
        Floor,
        Ceil
    };
    Clamp m_clamp{Clamp::None};
    double m_bound{0.0};
};

} // namespace scm901
