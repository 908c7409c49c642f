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

#include "tables.hpp"

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace scm901::test
{

inline std::shared_ptr<const ParameterCatalog> catalog()
{
    return ParameterCatalog::embedded_default();
}

/// Strict CSV reader: skips `#` metadata lines, checks the header verbatim,
/// returns rows of string cells.
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text,
                                                       const std::string& expected_header)
{
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line))
    {
        if (line.empty() || line[0] == '#')
        {
            continue;
        }
        if (!header_seen)
        {
            if (line != expected_header)
            {
                throw std::runtime_error("unexpected CSV header: " + line);
            }
            header_seen = true;
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
        {
            cells.push_back(cell);
        }
        rows.push_back(std::move(cells));
    }
    if (!header_seen)
    {
        throw std::runtime_error("CSV has no header");
    }
    return rows;
}

/// Replace `from` with `to` on the first catalog line containing `needle`.
inline std::string patch_catalog_line(const std::string& text,
                                      const std::string& needle,
                                      const std::string& from,
                                      const std::string& to)
{
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    bool done = false;
    while (std::getline(in, line))
    {
        if (!done && line.find(needle) != std::string::npos)
        {
            const auto pos = line.find(from);
            if (pos == std::string::npos)
            {
                throw std::runtime_error("patch_catalog_line: '" + from + "' not found");
            }
            line = line.substr(0, pos) + to + line.substr(pos + from.size());
            done = true;
        }
        out << line << "\n";
    }
    if (!done)
    {
        throw std::runtime_error("patch_catalog_line: '" + needle + "' not found");
    }
    return out.str();
}

/// Pearson correlation.
inline double correlation(const std::vector<double>& x, const std::vector<double>& y)
{
    const std::size_t n = x.size();
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace scm901::test
