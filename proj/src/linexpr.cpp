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

#include "linexpr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace scm901
{

namespace
{

const char* const kVarNames[LinExpr::kNumVars] = {"lgfc", "lg1fc", "dkm", "hut15", "dh", "dhup"};

int var_index(const std::string& name)
{
    for (int i = 0; i < LinExpr::kNumVars; ++i)
    {
        if (name == kVarNames[i])
        {
            return i;
        }
    }
    return -1;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos)
    {
        return {};
    }
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& tok, const std::string& full)
{
    std::size_t pos = 0;
    double v = 0.0;
    try
    {
        v = std::stod(tok, &pos);
    }
    catch (const std::exception&)
    {
        throw std::invalid_argument("bad numeric literal '" + tok + "' in expression '" + full + "'");
    }
    if (pos != tok.size())
    {
        throw std::invalid_argument("bad numeric literal '" + tok + "' in expression '" + full + "'");
    }
    return v;
}

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // "%.17g" round-trips doubles exactly, so parse(format()) is bit-stable.
    return buf;
}

} // namespace

LinExpr LinExpr::constant(double v)
{
    LinExpr e;
    e.m_coef[0] = v;
    return e;
}

LinExpr LinExpr::parse(const std::string& text)
{
    std::string body = trim(text);
    LinExpr out;

    if (body.rfind("max(", 0) == 0 || body.rfind("min(", 0) == 0)
    {
        out.m_clamp = body[1] == 'a' ? Clamp::Floor : Clamp::Ceil;
        if (body.back() != ')')
        {
            throw std::invalid_argument("unterminated clamp in expression '" + text + "'");
        }
        body = body.substr(4, body.size() - 5);
        const auto comma = body.find(',');
        if (comma == std::string::npos)
        {
            throw std::invalid_argument("clamp needs two arguments in expression '" + text + "'");
        }
        out.m_bound = parse_number(trim(body.substr(0, comma)), text);
        body = trim(body.substr(comma + 1));
    }

    // Split into signed terms.
    std::size_t i = 0;
    while (i < body.size())
    {
        double sign = 1.0;
        while (i < body.size() && (body[i] == '+' || body[i] == '-' || body[i] == ' '))
        {
            if (body[i] == '-')
            {
                sign = -sign;
            }
            ++i;
        }
        if (i >= body.size())
        {
            break;
        }
        std::size_t j = i;
        while (j < body.size() && body[j] != '+' && body[j] != '-')
        {
            ++j;
        }
        // keep a leading exponent sign together with its mantissa (e.g. 1e-9)
        while (j < body.size() && j > i && (body[j - 1] == 'e' || body[j - 1] == 'E'))
        {
            ++j;
            while (j < body.size() && body[j] != '+' && body[j] != '-')
            {
                ++j;
            }
        }
        const std::string term = trim(body.substr(i, j - i));
        i = j;
        if (term.empty())
        {
            throw std::invalid_argument("empty term in expression '" + text + "'");
        }
        const auto star = term.find('*');
        if (star == std::string::npos)
        {
            const int vi = var_index(term);
            if (vi >= 0)
            {
                out.m_coef[vi + 1] += sign;
            }
            else
            {
                out.m_coef[0] += sign * parse_number(term, text);
            }
        }
        else
        {
            const double c = parse_number(trim(term.substr(0, star)), text);
            const std::string var = trim(term.substr(star + 1));
            const int vi = var_index(var);
            if (vi < 0)
            {
                throw std::invalid_argument("unknown variable '" + var + "' in expression '" + text + "'");
            }
            out.m_coef[vi + 1] += sign * c;
        }
    }
    return out;
}

double LinExpr::eval(const EvalCtx& ctx) const
{
    const double vars[kNumVars] = {std::log10(ctx.fc_ghz),
                                   std::log10(1.0 + ctx.fc_ghz),
                                   ctx.d2d_m / 1000.0,
                                   ctx.hut_m - 1.5,
                                   ctx.hbs_m - ctx.hut_m,
                                   std::max(ctx.hut_m - ctx.hbs_m, 0.0)};
    double v = m_coef[0];
    for (int i = 0; i < kNumVars; ++i)
    {
        if (m_coef[i + 1] != 0.0)
        {
            v += m_coef[i + 1] * vars[i];
        }
    }
    switch (m_clamp)
    {
    case Clamp::Floor:
        return std::max(m_bound, v);
    case Clamp::Ceil:
        return std::min(m_bound, v);
    default:
        return v;
    }
}

bool LinExpr::is_constant() const
{
    return std::all_of(m_coef.begin() + 1, m_coef.end(), [](double c) { return c == 0.0; });
}

std::string LinExpr::format() const
{
    std::string body = format_double(m_coef[0]);
    for (int i = 0; i < kNumVars; ++i)
    {
        const double c = m_coef[i + 1];
        if (c == 0.0)
        {
            continue;
        }
        body += c < 0.0 ? " - " : " + ";
        body += format_double(std::abs(c));
        body += "*";
        body += kVarNames[i];
    }
    if (m_clamp == Clamp::None)
    {
        return body;
    }
    const std::string fn = m_clamp == Clamp::Floor ? "max" : "min";
    return fn + "(" + format_double(m_bound) + ", " + body + ")";
}

} // namespace scm901
