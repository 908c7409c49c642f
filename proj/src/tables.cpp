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

#include "tables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scm901
{

namespace
{

const char* const kEmbeddedCatalog =
#include "default_catalog.inc"
    ;

std::uint64_t fnv1a64_text(const std::string& s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : s)
    {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fmt_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void fail(const std::string& where, const std::string& msg)
{
    throw std::runtime_error("catalog " + where + ": " + msg);
}

} // namespace

const char* to_string(Scenario s)
{
    switch (s)
    {
    case Scenario::RMa:
        return "RMa";
    case Scenario::UMa:
        return "UMa";
    case Scenario::UMiStreetCanyon:
        return "UMi-StreetCanyon";
    case Scenario::InHOfficeMixed:
        return "InH-OfficeMixed";
    case Scenario::InHOfficeOpen:
        return "InH-OfficeOpen";
    }
    return "?";
}

const char* to_string(Condition c)
{
    return c == Condition::LOS ? "LOS" : "NLOS";
}

Scenario scenario_from_string(const std::string& s)
{
    for (const Scenario sc : kAllScenarios)
    {
        if (s == to_string(sc))
        {
            return sc;
        }
    }
    throw std::invalid_argument("unknown scenario '" + s + "'");
}

Condition condition_from_string(const std::string& s)
{
    if (s == "LOS")
    {
        return Condition::LOS;
    }
    if (s == "NLOS")
    {
        return Condition::NLOS;
    }
    throw std::invalid_argument("unknown condition '" + s + "'");
}

// --------------------------------------------------------------------------
// symmetric 7x7 eigen-decomposition (cyclic Jacobi) and matrix square root
// --------------------------------------------------------------------------

std::array<std::array<double, kNumLsp>, kNumLsp> symmetric_sqrt(
    const std::array<std::array<double, kNumLsp>, kNumLsp>& c,
    const std::string& what)
{
    constexpr int n = kNumLsp;
    double a[n][n];
    double v[n][n];
    for (int i = 0; i < n; ++i)
    {
        for (int j = 0; j < n; ++j)
        {
            a[i][j] = c[i][j];
            v[i][j] = i == j ? 1.0 : 0.0;
        }
    }

    for (int sweep = 0; sweep < 64; ++sweep)
    {
        double off = 0.0;
        for (int p = 0; p < n - 1; ++p)
        {
            for (int q = p + 1; q < n; ++q)
            {
                off += a[p][q] * a[p][q];
            }
        }
        if (off < 1e-26)
        {
            break;
        }
        for (int p = 0; p < n - 1; ++p)
        {
            for (int q = p + 1; q < n; ++q)
            {
                if (std::abs(a[p][q]) < 1e-300)
                {
                    continue;
                }
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cs = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * cs;
                for (int k = 0; k < n; ++k)
                {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for (int k = 0; k < n; ++k)
                {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
                for (int k = 0; k < n; ++k)
                {
                    const double vkp = v[k][p];
                    const double vkq = v[k][q];
                    v[k][p] = cs * vkp - sn * vkq;
                    v[k][q] = sn * vkp + cs * vkq;
                }
            }
        }
    }

    double lam[n];
    for (int i = 0; i < n; ++i)
    {
        lam[i] = a[i][i];
        if (lam[i] < -1e-9)
        {
            throw std::runtime_error(what + ": correlation matrix is not positive semi-definite "
                                            "(eigenvalue " +
                                     fmt_double(lam[i]) + ")");
        }
        lam[i] = std::sqrt(std::max(lam[i], 0.0));
    }

    std::array<std::array<double, kNumLsp>, kNumLsp> r{};
    for (int i = 0; i < n; ++i)
    {
        for (int j = 0; j < n; ++j)
        {
            double s = 0.0;
            for (int k = 0; k < n; ++k)
            {
                s += v[i][k] * lam[k] * v[j][k];
            }
            r[i][j] = s;
        }
    }
    return r;
}

// --------------------------------------------------------------------------
// parser
// --------------------------------------------------------------------------

namespace
{

struct Field
{
    std::string key;
    std::string value;
    bool quoted{false};
    bool used{false};
};

struct Record
{
    std::string kind;
    std::vector<Field> fields;
    std::string where; // "<name>:<line>"

    Field* find(const std::string& key)
    {
        for (auto& f : fields)
        {
            if (f.key == key)
            {
                return &f;
            }
        }
        return nullptr;
    }

    std::string get(const std::string& key)
    {
        Field* f = find(key);
        if (!f)
        {
            fail(where, kind + ": missing field '" + key + "'");
        }
        f->used = true;
        return f->value;
    }

    std::string get_or(const std::string& key, const std::string& def)
    {
        Field* f = find(key);
        if (!f)
        {
            return def;
        }
        f->used = true;
        return f->value;
    }

    double get_num(const std::string& key)
    {
        const std::string v = get(key);
        std::size_t pos = 0;
        double d = 0.0;
        try
        {
            d = std::stod(v, &pos);
        }
        catch (const std::exception&)
        {
            fail(where, kind + ": field '" + key + "' is not a number ('" + v + "')");
        }
        if (pos != v.size())
        {
            fail(where, kind + ": field '" + key + "' is not a number ('" + v + "')");
        }
        return d;
    }

    int get_int(const std::string& key)
    {
        const double d = get_num(key);
        const int i = static_cast<int>(d);
        if (static_cast<double>(i) != d)
        {
            fail(where, kind + ": field '" + key + "' is not an integer");
        }
        return i;
    }

    LinExpr get_expr(const std::string& key)
    {
        const std::string v = get(key);
        try
        {
            return LinExpr::parse(v);
        }
        catch (const std::exception& e)
        {
            fail(where, kind + ": field '" + key + "': " + e.what());
        }
    }

    void reject_unused()
    {
        for (const auto& f : fields)
        {
            if (!f.used)
            {
                fail(where, kind + ": unknown field '" + f.key + "'");
            }
        }
    }
};

std::vector<Record> tokenize(const std::string& text, const std::string& name)
{
    std::vector<Record> records;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        const std::string where = name + ":" + std::to_string(lineno);
        std::size_t i = line.find_first_not_of(" \t\r");
        if (i == std::string::npos || line[i] == '#')
        {
            continue;
        }
        Record rec;
        rec.where = where;
        // record kind
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
        {
            ++j;
        }
        rec.kind = line.substr(i, j - i);
        i = j;
        // key=value fields; values may be double-quoted
        while (i < line.size())
        {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            {
                ++i;
            }
            if (i >= line.size())
            {
                break;
            }
            const std::size_t eq = line.find('=', i);
            if (eq == std::string::npos)
            {
                fail(where, "expected key=value, got '" + line.substr(i) + "'");
            }
            Field f;
            f.key = line.substr(i, eq - i);
            i = eq + 1;
            if (i < line.size() && line[i] == '"')
            {
                const std::size_t close = line.find('"', i + 1);
                if (close == std::string::npos)
                {
                    fail(where, "unterminated quoted value for '" + f.key + "'");
                }
                f.value = line.substr(i + 1, close - i - 1);
                f.quoted = true;
                i = close + 1;
            }
            else
            {
                j = i;
                while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
                {
                    ++j;
                }
                f.value = line.substr(i, j - i);
                i = j;
            }
            rec.fields.push_back(std::move(f));
        }
        records.push_back(std::move(rec));
    }
    return records;
}

Coef parse_coef(Record& rec, const std::string& key)
{
    const std::string v = rec.get(key);
    if (v == "rma_nlos_A")
    {
        return {CoefRule::RmaNlosA, 0.0};
    }
    if (v == "rma_nlos_B")
    {
        return {CoefRule::RmaNlosB, 0.0};
    }
    std::size_t pos = 0;
    double d = 0.0;
    try
    {
        d = std::stod(v, &pos);
    }
    catch (const std::exception&)
    {
        pos = std::string::npos;
    }
    if (pos != v.size())
    {
        fail(rec.where, "field '" + key + "': expected number or coefficient rule, got '" + v + "'");
    }
    return {CoefRule::Constant, d};
}

XTerm parse_x(Record& rec)
{
    const std::string v = rec.get("X");
    if (v == "none")
    {
        return {XRule::None, 0.0};
    }
    if (v == "rma_pl2")
    {
        return {XRule::RmaPl2, 0.0};
    }
    auto with_coef = [&](XRule rule, const std::string& prefix) -> XTerm {
        const std::string num = v.substr(prefix.size());
        try
        {
            std::size_t pos = 0;
            const double d = std::stod(num, &pos);
            if (pos == num.size())
            {
                return {rule, d};
            }
        }
        catch (const std::exception&)
        {
        }
        fail(rec.where, "field 'X': bad coefficient in '" + v + "'");
    };
    if (v.rfind("hut_lin:", 0) == 0)
    {
        return with_coef(XRule::HutLinear, "hut_lin:");
    }
    if (v.rfind("d3d_lin:", 0) == 0)
    {
        return with_coef(XRule::D3dLinear, "d3d_lin:");
    }
    if (v.rfind("bp_height_log:", 0) == 0)
    {
        return with_coef(XRule::BpHeightLog, "bp_height_log:");
    }
    try
    {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos == v.size())
        {
            return {XTerm{XRule::Constant, d}};
        }
    }
    catch (const std::exception&)
    {
    }
    fail(rec.where, "field 'X': unknown rule '" + v + "'");
}

BpRule parse_bp_rule(Record& rec)
{
    const std::string v = rec.get("d_BP_rule");
    if (v == "none")
    {
        return BpRule::None;
    }
    if (v == "effective_height_4x")
    {
        return BpRule::EffectiveHeight4x;
    }
    if (v == "rma_2pi")
    {
        return BpRule::Rma2Pi;
    }
    fail(rec.where, "field 'd_BP_rule': unknown rule '" + v + "'");
}

ZodOffsetRule parse_zod(Record& rec)
{
    const std::string v = rec.get("zod_offset");
    if (v == "none")
    {
        return ZodOffsetRule::None;
    }
    if (v == "rma_nlos")
    {
        return ZodOffsetRule::RmaNlos;
    }
    if (v == "uma_nlos")
    {
        return ZodOffsetRule::UmaNlos;
    }
    if (v == "umi_nlos")
    {
        return ZodOffsetRule::UmiNlos;
    }
    fail(rec.where, "field 'zod_offset': unknown rule '" + v + "'");
}

// LSP labels in draw order.
const char* const kLspNames[kNumLsp] = {"sf", "k", "ds", "asd", "asa", "zsd", "zsa"};

Scenario get_scenario(Record& rec)
{
    const std::string v = rec.get("scenario");
    try
    {
        return scenario_from_string(v);
    }
    catch (const std::exception& e)
    {
        fail(rec.where, e.what());
    }
}

Condition get_condition(Record& rec)
{
    const std::string v = rec.get("condition");
    try
    {
        return condition_from_string(v);
    }
    catch (const std::exception& e)
    {
        fail(rec.where, e.what());
    }
}

} // namespace

class CatalogParser
{
  public:
    static std::shared_ptr<ParameterCatalog> run(const std::string& text, const std::string& name)
    {
        auto cat = std::shared_ptr<ParameterCatalog>(new ParameterCatalog());
        cat->m_checksum = fnv1a64_text(text);

        bool version_seen = false;
        for (Record& rec : tokenize(text, name))
        {
            if (rec.kind == "catalog_version" ||
                (rec.kind.rfind("catalog_version=", 0) == 0 && rec.fields.empty()))
            {
                // tolerate both "catalog_version=1" (single token) and key form
                std::string v;
                if (rec.kind == "catalog_version")
                {
                    v = rec.get("catalog_version");
                }
                else
                {
                    v = rec.kind.substr(std::string("catalog_version=").size());
                }
                cat->m_version = std::stoi(v);
                version_seen = true;
                continue;
            }
            if (rec.kind == "pathloss")
            {
                parse_pathloss(*cat, rec);
            }
            else if (rec.kind == "losprob")
            {
                parse_losprob(*cat, rec);
            }
            else if (rec.kind == "fastfading")
            {
                parse_fastfading(*cat, rec);
            }
            else if (rec.kind == "lsp_corr")
            {
                parse_corr(*cat, rec);
            }
            else if (rec.kind == "ray_offsets")
            {
                parse_ray_offsets(*cat, rec);
            }
            else if (rec.kind == "cphi_nlos" || rec.kind == "ctheta_nlos")
            {
                const bool phi = rec.kind == "cphi_nlos";
                auto& map = phi ? cat->m_cphi : cat->m_ctheta;
                const int n = rec.get_int("n");
                map[n] = rec.get_num("value");
                (phi ? cat->m_cphi_ref : cat->m_ctheta_ref) = require_ref(rec);
                rec.reject_unused();
            }
            else if (rec.kind == "blockage_self")
            {
                parse_blockage_self(*cat, rec);
            }
            else if (rec.kind == "blockage_region")
            {
                parse_blockage_region(*cat, rec);
            }
            else
            {
                fail(rec.where, "unknown record kind '" + rec.kind + "'");
            }
        }
        if (!version_seen)
        {
            fail(name, "missing catalog_version");
        }
        cat->validate(name);
        return cat;
    }

  private:
    static std::string require_ref(Record& rec)
    {
        const std::string ref = rec.get("tr_table_ref");
        if (ref.empty())
        {
            fail(rec.where, rec.kind + ": tr_table_ref must not be empty");
        }
        return ref;
    }

    static void parse_pathloss(ParameterCatalog& cat, Record& rec)
    {
        const Scenario sc = get_scenario(rec);
        const Condition cond = get_condition(rec);
        PathlossBranch br;
        br.branch = rec.get_int("branch");
        br.a = parse_coef(rec, "A");
        br.b = parse_coef(rec, "B");
        br.c = rec.get_num("C");
        br.x = parse_x(rec);
        br.sigma_sf_db = rec.get_num("sigma_sf");
        br.corr_dist_m = rec.get_num("corr_dist");
        br.validity_min_m = rec.get_num("validity_min_m");
        br.validity_max_m = rec.get_num("validity_max_m");
        br.tr_table_ref = require_ref(rec);
        const BpRule bp = parse_bp_rule(rec);
        rec.reject_unused();

        if (br.sigma_sf_db < 0.0)
        {
            fail(rec.where, "pathloss " + std::string(to_string(sc)) + "/" + to_string(cond) +
                                ": sigma_sf must be >= 0");
        }
        if (br.corr_dist_m <= 0.0)
        {
            fail(rec.where, "pathloss: corr_dist must be > 0");
        }
        if (br.validity_min_m <= 0.0 || br.validity_min_m >= br.validity_max_m)
        {
            fail(rec.where, "pathloss: bad validity range");
        }
        if (br.a.rule == CoefRule::Constant && br.a.value <= 0.0 && br.x.rule != XRule::RmaPl2)
        {
            fail(rec.where, "pathloss: A must be > 0");
        }

        auto& entry = cat.m_scenarios[sc].pathloss[cond];
        if (!entry.branches.empty() && entry.bp_rule != bp)
        {
            fail(rec.where, "pathloss: d_BP_rule differs between branches");
        }
        entry.bp_rule = bp;
        entry.branches.push_back(br);
        std::sort(entry.branches.begin(),
                  entry.branches.end(),
                  [](const PathlossBranch& l, const PathlossBranch& r) { return l.branch < r.branch; });
    }

    static void parse_losprob(ParameterCatalog& cat, Record& rec)
    {
        const Scenario sc = get_scenario(rec);
        LosProbEntry e;
        const std::string form = rec.get("form");
        if (form == "rma")
        {
            e.form = LosProbForm::Rma;
        }
        else if (form == "uma")
        {
            e.form = LosProbForm::Uma;
        }
        else if (form == "umi")
        {
            e.form = LosProbForm::Umi;
        }
        else if (form == "inh")
        {
            e.form = LosProbForm::Inh;
        }
        else
        {
            fail(rec.where, "losprob: unknown form '" + form + "'");
        }
        e.near_m = rec.get_num("near_m");
        e.decay_m = rec.get_num("decay_m");
        if (e.form == LosProbForm::Inh)
        {
            e.far_m = rec.get_num("far_m");
            e.far_decay_m = rec.get_num("far_decay_m");
            e.far_scale = rec.get_num("far_scale");
        }
        e.tr_table_ref = require_ref(rec);
        rec.reject_unused();
        cat.m_scenarios[sc].los_prob = e;
        cat.m_scenarios[sc].scenario = sc;
    }

    static void parse_fastfading(ParameterCatalog& cat, Record& rec)
    {
        const Scenario sc = get_scenario(rec);
        const Condition cond = get_condition(rec);
        FastFadingEntry e;
        e.num_clusters = rec.get_int("num_clusters");
        e.rays_per_cluster = rec.get_int("rays_per_cluster");
        e.r_tau = rec.get_num("r_tau");
        e.per_cluster_shadowing_db = rec.get_num("per_cluster_shadowing_db");
        e.mu_lg_ds = rec.get_expr("mu_lgDS");
        e.sigma_lg_ds = rec.get_expr("sigma_lgDS");
        e.mu_lg_asd = rec.get_expr("mu_lgASD");
        e.sigma_lg_asd = rec.get_expr("sigma_lgASD");
        e.mu_lg_asa = rec.get_expr("mu_lgASA");
        e.sigma_lg_asa = rec.get_expr("sigma_lgASA");
        e.mu_lg_zsa = rec.get_expr("mu_lgZSA");
        e.sigma_lg_zsa = rec.get_expr("sigma_lgZSA");
        e.mu_lg_zsd = rec.get_expr("mu_lgZSD");
        e.sigma_lg_zsd = rec.get_expr("sigma_lgZSD");
        e.mu_k_db = rec.get_expr("mu_K_db");
        e.sigma_k_db = rec.get_expr("sigma_K_db");
        e.c_ds_ns = rec.get_expr("c_DS_ns");
        e.c_asd_deg = rec.get_expr("c_ASD_deg");
        e.c_asa_deg = rec.get_expr("c_ASA_deg");
        e.c_zsa_deg = rec.get_expr("c_ZSA_deg");
        e.mu_xpr_db = rec.get_num("mu_XPR_db");
        e.sigma_xpr_db = rec.get_num("sigma_XPR_db");
        e.zod_offset = parse_zod(rec);
        e.tr_table_ref = require_ref(rec);
        rec.reject_unused();

        if (e.num_clusters < 1 || e.rays_per_cluster < 1)
        {
            fail(rec.where, "fastfading: cluster and ray counts must be >= 1");
        }
        if (e.r_tau <= 1.0)
        {
            fail(rec.where, "fastfading: r_tau must be > 1");
        }
        if (e.sigma_xpr_db < 0.0 || e.per_cluster_shadowing_db < 0.0)
        {
            fail(rec.where, "fastfading: standard deviations must be >= 0");
        }

        auto& slot = cat.m_scenarios[sc].fast_fading[cond];
        const auto corr = slot.lsp_corr;               // may have been parsed first
        const auto corr_ref = slot.corr_tr_table_ref;
        slot = e;
        slot.lsp_corr = corr;
        slot.corr_tr_table_ref = corr_ref;
    }

    static void parse_corr(ParameterCatalog& cat, Record& rec)
    {
        const Scenario sc = get_scenario(rec);
        const Condition cond = get_condition(rec);
        std::array<std::array<double, kNumLsp>, kNumLsp> c{};
        for (int i = 0; i < kNumLsp; ++i)
        {
            c[i][i] = 1.0;
        }
        for (int i = 0; i < kNumLsp - 1; ++i)
        {
            for (int j = i + 1; j < kNumLsp; ++j)
            {
                const std::string key = std::string(kLspNames[i]) + "_" + kLspNames[j];
                c[i][j] = c[j][i] = rec.get_num(key);
            }
        }
        const std::string ref = require_ref(rec);
        rec.reject_unused();
        auto& slot = cat.m_scenarios[sc].fast_fading[cond];
        slot.lsp_corr = c;
        slot.corr_tr_table_ref = ref;
    }

    static void parse_ray_offsets(ParameterCatalog& cat, Record& rec)
    {
        const std::string vals = rec.get("values");
        std::vector<double> v;
        std::size_t i = 0;
        while (i <= vals.size())
        {
            const std::size_t comma = std::min(vals.find(',', i), vals.size());
            const std::string tok = vals.substr(i, comma - i);
            try
            {
                std::size_t pos = 0;
                v.push_back(std::stod(tok, &pos));
                if (pos != tok.size())
                {
                    throw std::invalid_argument(tok);
                }
            }
            catch (const std::exception&)
            {
                fail(rec.where, "ray_offsets: bad value '" + tok + "'");
            }
            i = comma + 1;
            if (comma == vals.size())
            {
                break;
            }
        }
        cat.m_ray_offsets_ref = require_ref(rec);
        rec.reject_unused();
        cat.m_ray_offsets = std::move(v);
    }

    static void parse_blockage_self(ParameterCatalog& cat, Record& rec)
    {
        auto& b = cat.m_blockage;
        b.land_phi = rec.get_num("phi_landscape");
        b.land_x = rec.get_num("x_landscape");
        b.land_theta = rec.get_num("theta_landscape");
        b.land_y = rec.get_num("y_landscape");
        b.port_phi = rec.get_num("phi_portrait");
        b.port_x = rec.get_num("x_portrait");
        b.port_theta = rec.get_num("theta_portrait");
        b.port_y = rec.get_num("y_portrait");
        b.tr_table_ref = require_ref(rec);
        rec.reject_unused();
    }

    static void parse_blockage_region(ParameterCatalog& cat, Record& rec)
    {
        const std::string cls = rec.get("class");
        BlockageRegionParams p;
        p.x_min_deg = rec.get_num("x_min");
        p.x_max_deg = rec.get_num("x_max");
        p.theta_deg = rec.get_num("theta");
        p.y_min_deg = rec.get_num("y_min");
        p.y_max_deg = rec.get_num("y_max");
        p.r_m = rec.get_num("r");
        p.corr_dist_m = rec.get_num("corr_dist_m");
        p.tr_table_ref = require_ref(rec);
        rec.reject_unused();
        if (cls == "indoor")
        {
            cat.m_blockage.indoor = p;
        }
        else if (cls == "outdoor")
        {
            cat.m_blockage.outdoor = p;
        }
        else
        {
            fail(rec.where, "blockage_region: unknown class '" + cls + "'");
        }
    }
};

// --------------------------------------------------------------------------
// catalog
// --------------------------------------------------------------------------

void ParameterCatalog::validate(const std::string& name)
{
    if (m_version != 1)
    {
        fail(name, "unsupported catalog_version " + std::to_string(m_version));
    }
    if (m_ray_offsets.size() != 20)
    {
        fail(name, "ray_offsets must list exactly 20 values (TR 38.901 Table 7.5-3)");
    }
    for (const Scenario sc : kAllScenarios)
    {
        const auto it = m_scenarios.find(sc);
        if (it == m_scenarios.end())
        {
            fail(name, std::string("missing scenario ") + to_string(sc));
        }
        const ScenarioParams& sp = it->second;
        if (sp.los_prob.tr_table_ref.empty())
        {
            fail(name, std::string("missing losprob record for ") + to_string(sc));
        }
        for (const Condition cond : {Condition::LOS, Condition::NLOS})
        {
            const auto pl = sp.pathloss.find(cond);
            if (pl == sp.pathloss.end() || pl->second.branches.empty())
            {
                fail(name,
                     std::string("missing pathloss record for ") + to_string(sc) + "/" + to_string(cond));
            }
            for (std::size_t i = 0; i < pl->second.branches.size(); ++i)
            {
                if (pl->second.branches[i].branch != static_cast<int>(i + 1))
                {
                    fail(name,
                         std::string("pathloss branches for ") + to_string(sc) + "/" + to_string(cond) +
                             " must be numbered 1..k");
                }
            }
            if (pl->second.branches.size() > 1 && pl->second.bp_rule == BpRule::None)
            {
                fail(name,
                     std::string("dual-slope pathloss for ") + to_string(sc) + "/" + to_string(cond) +
                         " requires a d_BP_rule");
            }
            const auto ff = sp.fast_fading.find(cond);
            if (ff == sp.fast_fading.end() || ff->second.num_clusters == 0)
            {
                fail(name,
                     std::string("missing fastfading record for ") + to_string(sc) + "/" +
                         to_string(cond));
            }
            if (ff->second.corr_tr_table_ref.empty())
            {
                fail(name,
                     std::string("missing lsp_corr record for ") + to_string(sc) + "/" + to_string(cond));
            }
            if (m_cphi.find(ff->second.num_clusters) == m_cphi.end())
            {
                fail(name,
                     "no cphi_nlos entry for cluster count " +
                         std::to_string(ff->second.num_clusters));
            }
            if (m_ctheta.find(ff->second.num_clusters) == m_ctheta.end())
            {
                fail(name,
                     "no ctheta_nlos entry for cluster count " +
                         std::to_string(ff->second.num_clusters));
            }
        }
    }
    if (m_blockage.tr_table_ref.empty() || m_blockage.indoor.tr_table_ref.empty() ||
        m_blockage.outdoor.tr_table_ref.empty())
    {
        fail(name, "missing blockage records");
    }

    // PSD check + square root for every correlation matrix.
    for (auto& [sc, sp] : m_scenarios)
    {
        for (auto& [cond, ff] : sp.fast_fading)
        {
            const std::string what = std::string("lsp_corr ") + to_string(sc) + "/" + to_string(cond);
            ff.lsp_corr_sqrt = symmetric_sqrt(ff.lsp_corr, what);
        }
    }
}

std::shared_ptr<const ParameterCatalog> ParameterCatalog::load(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw std::runtime_error("cannot open catalog file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string base = path;
    const auto slash = base.find_last_of('/');
    if (slash != std::string::npos)
    {
        base = base.substr(slash + 1);
    }
    return load_text(ss.str(), base);
}

std::shared_ptr<const ParameterCatalog> ParameterCatalog::load_text(const std::string& text,
                                                                    const std::string& name)
{
    return CatalogParser::run(text, name);
}

std::shared_ptr<const ParameterCatalog> ParameterCatalog::embedded_default()
{
    static const std::shared_ptr<const ParameterCatalog> cat =
        load_text(kEmbeddedCatalog, "embedded-default");
    return cat;
}

const ScenarioParams& ParameterCatalog::scenario(Scenario s) const
{
    const auto it = m_scenarios.find(s);
    if (it == m_scenarios.end())
    {
        throw std::runtime_error(std::string("catalog has no scenario ") + to_string(s));
    }
    return it->second;
}

const PathlossEntry& ParameterCatalog::pathloss(Scenario s, Condition c) const
{
    const auto& sp = scenario(s);
    const auto it = sp.pathloss.find(c);
    if (it == sp.pathloss.end())
    {
        throw std::runtime_error(std::string("catalog has no pathloss entry for ") + to_string(s) +
                                 "/" + to_string(c));
    }
    return it->second;
}

const FastFadingEntry& ParameterCatalog::fast_fading(Scenario s, Condition c) const
{
    const auto& sp = scenario(s);
    const auto it = sp.fast_fading.find(c);
    if (it == sp.fast_fading.end())
    {
        throw std::runtime_error(std::string("catalog has no fastfading entry for ") + to_string(s) +
                                 "/" + to_string(c));
    }
    return it->second;
}

const LosProbEntry& ParameterCatalog::los_prob(Scenario s) const
{
    return scenario(s).los_prob;
}

double ParameterCatalog::cphi_nlos(int num_clusters) const
{
    const auto it = m_cphi.find(num_clusters);
    if (it == m_cphi.end())
    {
        throw std::runtime_error("no cphi_nlos entry for cluster count " +
                                 std::to_string(num_clusters));
    }
    return it->second;
}

double ParameterCatalog::ctheta_nlos(int num_clusters) const
{
    const auto it = m_ctheta.find(num_clusters);
    if (it == m_ctheta.end())
    {
        throw std::runtime_error("no ctheta_nlos entry for cluster count " +
                                 std::to_string(num_clusters));
    }
    return it->second;
}

namespace
{

std::string format_coef(const Coef& c)
{
    switch (c.rule)
    {
    case CoefRule::RmaNlosA:
        return "rma_nlos_A";
    case CoefRule::RmaNlosB:
        return "rma_nlos_B";
    default:
        return fmt_double(c.value);
    }
}

std::string format_x(const XTerm& x)
{
    switch (x.rule)
    {
    case XRule::None:
        return "none";
    case XRule::Constant:
        return fmt_double(x.coef);
    case XRule::HutLinear:
        return "hut_lin:" + fmt_double(x.coef);
    case XRule::D3dLinear:
        return "d3d_lin:" + fmt_double(x.coef);
    case XRule::BpHeightLog:
        return "bp_height_log:" + fmt_double(x.coef);
    case XRule::RmaPl2:
        return "rma_pl2";
    }
    return "none";
}

const char* format_bp(BpRule r)
{
    switch (r)
    {
    case BpRule::None:
        return "none";
    case BpRule::EffectiveHeight4x:
        return "effective_height_4x";
    case BpRule::Rma2Pi:
        return "rma_2pi";
    }
    return "none";
}

const char* format_zod(ZodOffsetRule r)
{
    switch (r)
    {
    case ZodOffsetRule::None:
        return "none";
    case ZodOffsetRule::RmaNlos:
        return "rma_nlos";
    case ZodOffsetRule::UmaNlos:
        return "uma_nlos";
    case ZodOffsetRule::UmiNlos:
        return "umi_nlos";
    }
    return "none";
}

void format_region(std::ostringstream& out, const char* cls, const BlockageRegionParams& p)
{
    out << "blockage_region class=" << cls << " x_min=" << fmt_double(p.x_min_deg)
        << " x_max=" << fmt_double(p.x_max_deg) << " theta=" << fmt_double(p.theta_deg)
        << " y_min=" << fmt_double(p.y_min_deg) << " y_max=" << fmt_double(p.y_max_deg)
        << " r=" << fmt_double(p.r_m) << " corr_dist_m=" << fmt_double(p.corr_dist_m)
        << " tr_table_ref=\"" << p.tr_table_ref << "\"\n";
}

} // namespace

std::string ParameterCatalog::canonical_format() const
{
    std::ostringstream out;
    out << "catalog_version=" << m_version << "\n";
    for (const Scenario sc : kAllScenarios)
    {
        const ScenarioParams& sp = scenario(sc);
        const LosProbEntry& lp = sp.los_prob;
        out << "losprob scenario=" << to_string(sc) << " form=";
        switch (lp.form)
        {
        case LosProbForm::Rma:
            out << "rma";
            break;
        case LosProbForm::Uma:
            out << "uma";
            break;
        case LosProbForm::Umi:
            out << "umi";
            break;
        case LosProbForm::Inh:
            out << "inh";
            break;
        }
        out << " near_m=" << fmt_double(lp.near_m) << " decay_m=" << fmt_double(lp.decay_m);
        if (lp.form == LosProbForm::Inh)
        {
            out << " far_m=" << fmt_double(lp.far_m) << " far_decay_m=" << fmt_double(lp.far_decay_m)
                << " far_scale=" << fmt_double(lp.far_scale);
        }
        out << " tr_table_ref=\"" << lp.tr_table_ref << "\"\n";

        for (const Condition cond : {Condition::LOS, Condition::NLOS})
        {
            const PathlossEntry& pe = pathloss(sc, cond);
            for (const PathlossBranch& br : pe.branches)
            {
                out << "pathloss scenario=" << to_string(sc) << " condition=" << to_string(cond)
                    << " branch=" << br.branch << " A=" << format_coef(br.a)
                    << " B=" << format_coef(br.b) << " C=" << fmt_double(br.c)
                    << " X=" << format_x(br.x) << " d_BP_rule=" << format_bp(pe.bp_rule)
                    << " sigma_sf=" << fmt_double(br.sigma_sf_db)
                    << " corr_dist=" << fmt_double(br.corr_dist_m)
                    << " validity_min_m=" << fmt_double(br.validity_min_m)
                    << " validity_max_m=" << fmt_double(br.validity_max_m) << " tr_table_ref=\""
                    << br.tr_table_ref << "\"\n";
            }
        }
        for (const Condition cond : {Condition::LOS, Condition::NLOS})
        {
            const FastFadingEntry& ff = fast_fading(sc, cond);
            out << "fastfading scenario=" << to_string(sc) << " condition=" << to_string(cond)
                << " num_clusters=" << ff.num_clusters
                << " rays_per_cluster=" << ff.rays_per_cluster << " r_tau=" << fmt_double(ff.r_tau)
                << " per_cluster_shadowing_db=" << fmt_double(ff.per_cluster_shadowing_db)
                << " mu_lgDS=\"" << ff.mu_lg_ds.format() << "\" sigma_lgDS=\""
                << ff.sigma_lg_ds.format() << "\" mu_lgASD=\"" << ff.mu_lg_asd.format()
                << "\" sigma_lgASD=\"" << ff.sigma_lg_asd.format() << "\" mu_lgASA=\""
                << ff.mu_lg_asa.format() << "\" sigma_lgASA=\"" << ff.sigma_lg_asa.format()
                << "\" mu_lgZSA=\"" << ff.mu_lg_zsa.format() << "\" sigma_lgZSA=\""
                << ff.sigma_lg_zsa.format() << "\" mu_lgZSD=\"" << ff.mu_lg_zsd.format()
                << "\" sigma_lgZSD=\"" << ff.sigma_lg_zsd.format() << "\" mu_K_db=\""
                << ff.mu_k_db.format() << "\" sigma_K_db=\"" << ff.sigma_k_db.format()
                << "\" c_DS_ns=\"" << ff.c_ds_ns.format() << "\" c_ASD_deg=\""
                << ff.c_asd_deg.format() << "\" c_ASA_deg=\"" << ff.c_asa_deg.format()
                << "\" c_ZSA_deg=\"" << ff.c_zsa_deg.format() << "\" mu_XPR_db="
                << fmt_double(ff.mu_xpr_db) << " sigma_XPR_db=" << fmt_double(ff.sigma_xpr_db)
                << " zod_offset=" << format_zod(ff.zod_offset) << " tr_table_ref=\""
                << ff.tr_table_ref << "\"\n";
            out << "lsp_corr scenario=" << to_string(sc) << " condition=" << to_string(cond);
            for (int i = 0; i < kNumLsp - 1; ++i)
            {
                for (int j = i + 1; j < kNumLsp; ++j)
                {
                    out << " " << kLspNames[i] << "_" << kLspNames[j] << "="
                        << fmt_double(ff.lsp_corr[i][j]);
                }
            }
            out << " tr_table_ref=\"" << ff.corr_tr_table_ref << "\"\n";
        }
    }

    out << "ray_offsets values=";
    for (std::size_t i = 0; i < m_ray_offsets.size(); ++i)
    {
        out << (i ? "," : "") << fmt_double(m_ray_offsets[i]);
    }
    out << " tr_table_ref=\"" << m_ray_offsets_ref << "\"\n";
    for (const auto& [n, v] : m_cphi)
    {
        out << "cphi_nlos n=" << n << " value=" << fmt_double(v) << " tr_table_ref=\"" << m_cphi_ref
            << "\"\n";
    }
    for (const auto& [n, v] : m_ctheta)
    {
        out << "ctheta_nlos n=" << n << " value=" << fmt_double(v) << " tr_table_ref=\""
            << m_ctheta_ref << "\"\n";
    }
    const auto& b = m_blockage;
    out << "blockage_self phi_landscape=" << fmt_double(b.land_phi) << " x_landscape="
        << fmt_double(b.land_x) << " theta_landscape=" << fmt_double(b.land_theta)
        << " y_landscape=" << fmt_double(b.land_y) << " phi_portrait=" << fmt_double(b.port_phi)
        << " x_portrait=" << fmt_double(b.port_x) << " theta_portrait=" << fmt_double(b.port_theta)
        << " y_portrait=" << fmt_double(b.port_y) << " tr_table_ref=\"" << b.tr_table_ref << "\"\n";
    format_region(out, "indoor", b.indoor);
    format_region(out, "outdoor", b.outdoor);
    return out.str();
}

} // namespace scm901
