// SPDX-License-Identifier: Apache-2.0
//
// beamzf: beam-domain interference channel simulator
// Copyright (C) 2026 The beamzf Authors
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

// Scenario description and its JSON form.

#ifndef BEAMZF_SCENARIO_HPP
#define BEAMZF_SCENARIO_HPP

#include "core.hpp"
#include "geometry.hpp"
#include "overhead.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace beamzf {

enum class Scheme {
    omni_np,
    omni_zf_erp,
    omni_zf_etp,
    beam_np,
    beam_zf_erp,
    beam_zf_etp,
    beam_zf_imperfect,
};

inline constexpr std::array<Scheme, 7> all_schemes{Scheme::omni_np,     Scheme::omni_zf_erp, Scheme::omni_zf_etp,
                                                   Scheme::beam_np,     Scheme::beam_zf_erp, Scheme::beam_zf_etp,
                                                   Scheme::beam_zf_imperfect};

inline std::string_view to_string(Scheme s)
{
    switch (s) {
    case Scheme::omni_np:
        return "omni-np";
    case Scheme::omni_zf_erp:
        return "omni-zf-erp";
    case Scheme::omni_zf_etp:
        return "omni-zf-etp";
    case Scheme::beam_np:
        return "beam-np";
    case Scheme::beam_zf_erp:
        return "beam-zf-erp";
    case Scheme::beam_zf_etp:
        return "beam-zf-etp";
    case Scheme::beam_zf_imperfect:
        return "beam-zf-imperfect";
    }
    return "?";
}

inline Scheme parse_scheme(std::string_view name)
{
    for (Scheme s : all_schemes)
        if (name == to_string(s))
            return s;
    throw ConfigError("schemes", "unknown scheme '" + std::string(name) + "'");
}

inline bool is_beam_scheme(Scheme s)
{
    return s == Scheme::beam_np || s == Scheme::beam_zf_erp || s == Scheme::beam_zf_etp ||
           s == Scheme::beam_zf_imperfect;
}

inline FeedbackScheme feedback_family(Scheme s)
{
    switch (s) {
    case Scheme::omni_np:
        return FeedbackScheme::omni_np;
    case Scheme::omni_zf_erp:
    case Scheme::omni_zf_etp:
        return FeedbackScheme::omni_zf;
    case Scheme::beam_np:
        return FeedbackScheme::beam_np;
    default:
        return FeedbackScheme::beam_zf;
    }
}

enum class Rule2Scalarization { erp_sum_rate, determinant };

inline std::string_view to_string(Rule2Scalarization r)
{
    return r == Rule2Scalarization::erp_sum_rate ? "erp-sum-rate" : "determinant";
}

inline std::string_view to_string(BeamNormalization n)
{
    return n == BeamNormalization::peak ? "peak" : "directivity";
}

struct GeometryConfig {
    double tx_rx_separation = 100.0;
    double element_spacing = 10.0;
    double sphere_radius = 20.0;
    double carrier_wavelength = 0.125;
    // Explicit positions override the line layout when both are given.
    std::optional<std::vector<Vec3>> tx_positions;
    std::optional<std::vector<Vec3>> rx_positions;

    SceneGeometry build(std::size_t users) const
    {
        if (tx_positions.has_value() != rx_positions.has_value())
            throw ConfigError("geometry", "tx_positions and rx_positions must be given together");
        if (tx_positions) {
            if (tx_positions->size() != users)
                throw ConfigError("geometry.tx_positions", "must list exactly K positions");
            return SceneGeometry::make(*tx_positions, *rx_positions, sphere_radius, carrier_wavelength);
        }
        return SceneGeometry::line_layout(users, tx_rx_separation, element_spacing, sphere_radius,
                                          carrier_wavelength);
    }
};

struct BeamPatternConfig {
    double shape_exponent = 2.0;
    double floor_gain = 0.05;
    BeamNormalization normalization = BeamNormalization::directivity;
};

inline std::vector<Scheme> perfect_csit_schemes()
{
    return {Scheme::omni_np, Scheme::omni_zf_erp, Scheme::omni_zf_etp,
            Scheme::beam_np, Scheme::beam_zf_erp, Scheme::beam_zf_etp};
}

struct ScenarioConfig {
    std::size_t K = 2;
    std::size_t L = 4;
    std::size_t scatterer_count = 100;
    GeometryConfig geometry;
    BeamPatternConfig beam_pattern;
    std::vector<double> snr_grid_db{0, 5, 10, 15, 20, 25, 30};
    std::size_t runs = 1000;
    std::size_t normalization_subruns = 100;
    std::vector<Scheme> schemes = perfect_csit_schemes();
    std::vector<double> csit_error_variances;
    Rule2Scalarization rule2_scalarization = Rule2Scalarization::erp_sum_rate;
    std::uint64_t seed = 1;
    std::optional<double> total_power; // defaults to K

    double resolved_total_power() const { return total_power.value_or(double(K)); }

    bool enabled(Scheme s) const { return std::find(schemes.begin(), schemes.end(), s) != schemes.end(); }

    BeamCodebook codebook() const
    {
        return BeamCodebook::make(L, beam_pattern.shape_exponent, beam_pattern.floor_gain,
                                  beam_pattern.normalization);
    }

    /// Throws ConfigError naming the first offending field.
    void validate() const
    {
        if (K == 0)
            throw ConfigError("K", "must be at least 1");
        if (L == 0)
            throw ConfigError("L", "must be at least 1");
        double combos = 1.0;
        for (std::size_t i = 0; i < K; ++i)
            combos *= double(L);
        if (combos > 1e6)
            throw ConfigError("L", "L^K exceeds the 10^6 combination guard");
        if (scatterer_count == 0)
            throw ConfigError("scatterer_count", "must be at least 1");
        if (runs == 0)
            throw ConfigError("runs", "must be at least 1");
        if (normalization_subruns == 0)
            throw ConfigError("normalization_subruns", "must be at least 1");
        if (snr_grid_db.empty())
            throw ConfigError("snr_grid_db", "must not be empty");
        for (double s : snr_grid_db)
            if (!std::isfinite(s))
                throw ConfigError("snr_grid_db", "values must be finite");
        std::set<Scheme> seen;
        for (Scheme s : schemes)
            if (!seen.insert(s).second)
                throw ConfigError("schemes", "duplicate scheme '" + std::string(to_string(s)) + "'");
        for (double e : csit_error_variances)
            if (!(e >= 0.0) || !std::isfinite(e))
                throw ConfigError("csit_error_variances", "values must be finite and non-negative");
        if (enabled(Scheme::beam_zf_imperfect) && csit_error_variances.empty())
            throw ConfigError("csit_error_variances", "beam-zf-imperfect needs at least one error variance");
        if (total_power && !(*total_power > 0.0))
            throw ConfigError("total_power", "must be positive");
        (void)codebook();
        (void)geometry.build(K);
    }
};

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

using json = nlohmann::json;

namespace detail {

inline json vec3_list(const std::vector<Vec3> &v)
{
    json a = json::array();
    for (const auto &p : v)
        a.push_back({p.x(), p.y(), p.z()});
    return a;
}

template <class T>
T get_field(const json &obj, const char *key, const std::string &path)
{
    if constexpr (std::is_unsigned_v<T>)
        if (!obj.at(key).is_number_unsigned())
            throw ConfigError(path + key, "must be a non-negative integer");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception &e) {
        throw ConfigError(path + key, std::string("invalid value (") + e.what() + ")");
    }
}

inline void reject_unknown(const json &obj, std::initializer_list<std::string_view> known, const std::string &path)
{
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ConfigError(path + it.key(), "unknown field");
}

inline std::vector<Vec3> parse_positions(const json &j, const std::string &field)
{
    std::vector<Vec3> out;
    if (!j.is_array())
        throw ConfigError(field, "must be an array of [x, y, z] triples");
    for (const auto &p : j) {
        if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() || !p[2].is_number())
            throw ConfigError(field, "each position must be [x, y, z]");
        out.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
    }
    return out;
}

} // namespace detail

/// Resolved configuration: every field explicit, total_power filled in.
inline json to_json(const ScenarioConfig &c)
{
    json geometry = {{"tx_rx_separation", c.geometry.tx_rx_separation},
                     {"element_spacing", c.geometry.element_spacing},
                     {"sphere_radius", c.geometry.sphere_radius},
                     {"carrier_wavelength", c.geometry.carrier_wavelength}};
    if (c.geometry.tx_positions) {
        geometry["tx_positions"] = detail::vec3_list(*c.geometry.tx_positions);
        geometry["rx_positions"] = detail::vec3_list(*c.geometry.rx_positions);
    }
    json schemes = json::array();
    for (Scheme s : c.schemes)
        schemes.push_back(std::string(to_string(s)));
    return {{"K", c.K},
            {"L", c.L},
            {"scatterer_count", c.scatterer_count},
            {"geometry", geometry},
            {"beam_pattern",
             {{"shape_exponent", c.beam_pattern.shape_exponent},
              {"floor_gain", c.beam_pattern.floor_gain},
              {"normalization", std::string(to_string(c.beam_pattern.normalization))}}},
            {"snr_grid_db", c.snr_grid_db},
            {"runs", c.runs},
            {"normalization_subruns", c.normalization_subruns},
            {"schemes", schemes},
            {"csit_error_variances", c.csit_error_variances},
            {"rule2_scalarization", std::string(to_string(c.rule2_scalarization))},
            {"seed", c.seed},
            {"total_power", c.resolved_total_power()}};
}

/// Missing fields keep their defaults; unknown fields are errors.
inline ScenarioConfig scenario_from_json(const json &j)
{
    using detail::get_field;
    if (!j.is_object())
        throw ConfigError("config", "scenario must be a JSON object");
    detail::reject_unknown(j,
                           {"K", "L", "scatterer_count", "geometry", "beam_pattern", "snr_grid_db", "runs",
                            "normalization_subruns", "schemes", "csit_error_variances", "rule2_scalarization",
                            "seed", "total_power"},
                           "");
    ScenarioConfig c;
    if (j.contains("K"))
        c.K = get_field<std::size_t>(j, "K", "");
    if (j.contains("L"))
        c.L = get_field<std::size_t>(j, "L", "");
    if (j.contains("scatterer_count"))
        c.scatterer_count = get_field<std::size_t>(j, "scatterer_count", "");
    if (j.contains("geometry")) {
        const json &g = j.at("geometry");
        if (!g.is_object())
            throw ConfigError("geometry", "must be an object");
        detail::reject_unknown(g,
                               {"tx_rx_separation", "element_spacing", "sphere_radius", "carrier_wavelength",
                                "tx_positions", "rx_positions"},
                               "geometry.");
        if (g.contains("tx_rx_separation"))
            c.geometry.tx_rx_separation = get_field<double>(g, "tx_rx_separation", "geometry.");
        if (g.contains("element_spacing"))
            c.geometry.element_spacing = get_field<double>(g, "element_spacing", "geometry.");
        if (g.contains("sphere_radius"))
            c.geometry.sphere_radius = get_field<double>(g, "sphere_radius", "geometry.");
        if (g.contains("carrier_wavelength"))
            c.geometry.carrier_wavelength = get_field<double>(g, "carrier_wavelength", "geometry.");
        if (g.contains("tx_positions"))
            c.geometry.tx_positions = detail::parse_positions(g.at("tx_positions"), "geometry.tx_positions");
        if (g.contains("rx_positions"))
            c.geometry.rx_positions = detail::parse_positions(g.at("rx_positions"), "geometry.rx_positions");
    }
    if (j.contains("beam_pattern")) {
        const json &b = j.at("beam_pattern");
        if (!b.is_object())
            throw ConfigError("beam_pattern", "must be an object");
        detail::reject_unknown(b, {"shape_exponent", "floor_gain", "normalization"}, "beam_pattern.");
        if (b.contains("shape_exponent"))
            c.beam_pattern.shape_exponent = get_field<double>(b, "shape_exponent", "beam_pattern.");
        if (b.contains("floor_gain"))
            c.beam_pattern.floor_gain = get_field<double>(b, "floor_gain", "beam_pattern.");
        if (b.contains("normalization")) {
            const auto n = get_field<std::string>(b, "normalization", "beam_pattern.");
            if (n == "peak")
                c.beam_pattern.normalization = BeamNormalization::peak;
            else if (n == "directivity")
                c.beam_pattern.normalization = BeamNormalization::directivity;
            else
                throw ConfigError("beam_pattern.normalization", "expected 'peak' or 'directivity'");
        }
    }
    if (j.contains("snr_grid_db"))
        c.snr_grid_db = get_field<std::vector<double>>(j, "snr_grid_db", "");
    if (j.contains("runs"))
        c.runs = get_field<std::size_t>(j, "runs", "");
    if (j.contains("normalization_subruns"))
        c.normalization_subruns = get_field<std::size_t>(j, "normalization_subruns", "");
    if (j.contains("schemes")) {
        c.schemes.clear();
        for (const auto &name : get_field<std::vector<std::string>>(j, "schemes", ""))
            c.schemes.push_back(parse_scheme(name));
    }
    if (j.contains("csit_error_variances"))
        c.csit_error_variances = get_field<std::vector<double>>(j, "csit_error_variances", "");
    if (j.contains("rule2_scalarization")) {
        const auto r = get_field<std::string>(j, "rule2_scalarization", "");
        if (r == "erp-sum-rate")
            c.rule2_scalarization = Rule2Scalarization::erp_sum_rate;
        else if (r == "determinant")
            c.rule2_scalarization = Rule2Scalarization::determinant;
        else
            throw ConfigError("rule2_scalarization", "expected 'erp-sum-rate' or 'determinant'");
    }
    if (j.contains("seed"))
        c.seed = get_field<std::uint64_t>(j, "seed", "");
    if (j.contains("total_power") && !j.at("total_power").is_null())
        c.total_power = get_field<double>(j, "total_power", "");
    return c;
}

inline ScenarioConfig load_scenario(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config", "cannot open scenario file '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception &e) {
        throw ConfigError("config", "cannot parse scenario file '" + path.string() + "': " + e.what());
    }
    return scenario_from_json(j);
}

} // namespace beamzf

#endif
