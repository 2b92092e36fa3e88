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

// Learning, selection and transmission phases for one channel realization.
//
// Learning is abstracted: receivers either report their non-precoded SINR for
// every beam combination (selection rule 1, sum of SINRs) or the full K x K
// channel of every combination (selection rule 2, precoding-aware score).

#ifndef BEAMZF_PROTOCOL_HPP
#define BEAMZF_PROTOCOL_HPP

#include "core.hpp"
#include "geometry.hpp"
#include "metrics.hpp"
#include "precoding.hpp"
#include "random.hpp"
#include "scenario.hpp"

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace beamzf {

inline constexpr std::size_t max_combinations = 1'000'000;

/// All L^K combinations in lexicographic order (last transmitter fastest).
inline std::vector<BeamCombination> enumerate_combinations(std::size_t users, std::size_t beams)
{
    if (users == 0)
        throw ConfigError("K", "must be at least 1");
    if (beams == 0)
        throw ConfigError("L", "must be at least 1");
    std::size_t total = 1;
    for (std::size_t i = 0; i < users; ++i) {
        if (total > max_combinations / beams)
            throw CombinatorialExplosion("L^K exceeds " + std::to_string(max_combinations) + " combinations");
        total *= beams;
    }
    std::vector<BeamCombination> out;
    out.reserve(total);
    BeamCombination c{std::vector<std::size_t>(users, 0)};
    for (std::size_t n = 0; n < total; ++n) {
        out.push_back(c);
        for (std::size_t pos = users; pos-- > 0;) {
            if (++c.indices[pos] < beams)
                break;
            c.indices[pos] = 0;
        }
    }
    return out;
}

struct Candidate {
    BeamCombination combination;
    ChannelMatrix channel;
};

struct CombinationScore {
    BeamCombination combination;
    std::optional<double> score; // empty when rejected
    ChannelMatrix channel;

    bool rejected() const noexcept { return !score.has_value(); }
};

/// Highest score wins; equal scores go to the lexicographically smaller
/// combination, so the result does not depend on input order.
inline const CombinationScore &select_best(std::span<const CombinationScore> scored)
{
    const CombinationScore *best = nullptr;
    for (const auto &s : scored) {
        if (s.rejected())
            continue;
        if (!best || *s.score > *best->score || (*s.score == *best->score && s.combination < best->combination))
            best = &s;
    }
    if (!best)
        throw NoValidCombination("every beam combination was rejected");
    return *best;
}

/// Rule 1 scores: sum of non-precoded SINRs.
inline std::vector<CombinationScore> score_rule1(std::span<const Candidate> candidates, const NoiseModel &noise)
{
    std::vector<CombinationScore> out;
    out.reserve(candidates.size());
    for (const auto &c : candidates) {
        double sum = 0.0;
        for (double g : sinr_nonprecoded(c.channel, noise))
            sum += g;
        out.push_back({c.combination, std::isfinite(sum) ? std::optional<double>(sum) : std::nullopt, c.channel});
    }
    return out;
}

/// Rule 2 scores. erp_sum_rate ranks by the ERP factor beta (the ZF-ERP
/// sum-rate is increasing in beta); determinant ranks by det(H H^H).
/// Channels that zero-forcing would reject are rejected here as well.
inline std::vector<CombinationScore> score_rule2(std::span<const Candidate> candidates,
                                                 Rule2Scalarization scalarization)
{
    std::vector<CombinationScore> out;
    out.reserve(candidates.size());
    for (const auto &c : candidates) {
        const RVector sv = singular_values(c.channel.entries);
        const double smin = sv(sv.size() - 1);
        std::optional<double> score;
        if (smin > 0.0 && sv(0) / smin <= max_condition_number) {
            if (scalarization == Rule2Scalarization::erp_sum_rate)
                score = erp_beta_from_singular_values(sv);
            else
                score = std::norm(c.channel.entries.determinant());
        }
        out.push_back({c.combination, score, c.channel});
    }
    return out;
}

inline BeamCombination select_rule1(std::span<const Candidate> candidates, const NoiseModel &noise)
{
    const auto scored = score_rule1(candidates, noise);
    return select_best(scored).combination;
}

inline BeamCombination select_rule2(std::span<const Candidate> candidates,
                                    Rule2Scalarization scalarization = Rule2Scalarization::erp_sum_rate)
{
    const auto scored = score_rule2(candidates, scalarization);
    return select_best(scored).combination;
}

// ---------------------------------------------------------------------------
// One realization
// ---------------------------------------------------------------------------

/// Validated scenario with its derived, reusable pieces.
struct PreparedScenario {
    ScenarioConfig config;
    SceneGeometry geometry;
    BeamCodebook codebook;
    std::vector<BeamCombination> combinations;

    static PreparedScenario make(ScenarioConfig config)
    {
        config.validate();
        SceneGeometry g = config.geometry.build(config.K);
        BeamCodebook cb = config.codebook();
        auto combos = enumerate_combinations(config.K, config.L);
        return {std::move(config), std::move(g), std::move(cb), std::move(combos)};
    }

    bool needs_beams() const
    {
        for (Scheme s : config.schemes)
            if (is_beam_scheme(s))
                return true;
        return false;
    }
};

struct Realization {
    ScattererField field;
    cdouble normalization{1.0, 0.0};
    ChannelMatrix omni;                         // normalized
    std::vector<Candidate> beams;               // normalized, enumeration order
    std::vector<std::vector<Candidate>> csit;   // [error variance][combination], H + E
};

/// Draws one scatterer field, estimates the run's normalization constant from
/// omni sub-runs and applies it to the omni channel and to every beam
/// combination. Sub-streams of `rng`: {0} normalization, {1} field,
/// {2, e} CSIT errors for error variance e.
inline Realization draw_realization(const PreparedScenario &p, const RandomStream &rng)
{
    const ScenarioConfig &c = p.config;
    Realization r;
    RandomStream norm_rng = rng.substream({0});
    r.normalization = estimate_normalization(p.geometry, omni, c.normalization_subruns, c.scatterer_count, norm_rng);

    RandomStream field_rng = rng.substream({1});
    r.field = draw_scatterers(p.geometry, c.scatterer_count, field_rng);
    const ChannelSynthesizer synth(p.geometry, r.field);
    r.omni = apply_normalization(synth.channel(omni), r.normalization);

    if (p.needs_beams()) {
        r.beams.reserve(p.combinations.size());
        for (const auto &combo : p.combinations)
            r.beams.push_back({combo, apply_normalization(synth.channel(combo, p.codebook), r.normalization)});
    }
    if (c.enabled(Scheme::beam_zf_imperfect)) {
        for (std::size_t e = 0; e < c.csit_error_variances.size(); ++e) {
            RandomStream err_rng = rng.substream({2, e});
            const CsitErrorModel model{c.csit_error_variances[e]};
            std::vector<Candidate> perturbed;
            perturbed.reserve(r.beams.size());
            for (const auto &cand : r.beams)
                perturbed.push_back({cand.combination, apply_csit_error(cand.channel, model, err_rng)});
            r.csit.push_back(std::move(perturbed));
        }
    }
    return r;
}

struct SchemeOutcome {
    Scheme scheme = Scheme::omni_np;
    double error_variance = 0.0;
    LinkReport report;
    std::optional<BeamCombination> selected; // beam schemes
    std::optional<double> beta;              // ERP schemes
    ChannelMatrix channel;                   // channel the transmitter used
};

/// Transmission phase for every enabled scheme at one SNR point. Throws
/// NoValidCombination or IllConditionedChannel when a scheme cannot be served
/// on this realization.
inline std::vector<SchemeOutcome> evaluate_realization(const PreparedScenario &p, const Realization &r,
                                                       double snr_db)
{
    const ScenarioConfig &c = p.config;
    const NoiseModel noise = NoiseModel::from_snr_db(snr_db, c.K, c.total_power);
    std::vector<SchemeOutcome> out;

    auto find = [](const std::vector<Candidate> &cands, const BeamCombination &combo) -> const ChannelMatrix & {
        for (const auto &cand : cands)
            if (cand.combination == combo)
                return cand.channel;
        throw UsageError("selected combination not among candidates");
    };

    std::optional<BeamCombination> rule2_pick;
    auto rule2 = [&]() -> const BeamCombination & {
        if (!rule2_pick)
            rule2_pick = select_rule2(r.beams, c.rule2_scalarization);
        return *rule2_pick;
    };

    for (Scheme s : c.schemes) {
        const std::string name(to_string(s));
        switch (s) {
        case Scheme::omni_np: {
            out.push_back({s, 0.0, sum_rate(sinr_nonprecoded(r.omni, noise), name), {}, {}, r.omni});
            break;
        }
        case Scheme::omni_zf_erp: {
            const PrecodeResult pr = zf_erp(r.omni);
            out.push_back({s, 0.0, sum_rate(sinr_erp(pr, noise), name), {}, pr.beta, r.omni});
            break;
        }
        case Scheme::omni_zf_etp: {
            const PrecodeResult pr = zf_etp(r.omni);
            out.push_back({s, 0.0, sum_rate(sinr_etp(pr, noise), name), {}, {}, r.omni});
            break;
        }
        case Scheme::beam_np: {
            const BeamCombination pick = select_rule1(r.beams, noise);
            const ChannelMatrix &h = find(r.beams, pick);
            out.push_back({s, 0.0, sum_rate(sinr_nonprecoded(h, noise), name), pick, {}, h});
            break;
        }
        case Scheme::beam_zf_erp: {
            const ChannelMatrix &h = find(r.beams, rule2());
            const PrecodeResult pr = zf_erp(h);
            out.push_back({s, 0.0, sum_rate(sinr_erp(pr, noise), name), rule2(), pr.beta, h});
            break;
        }
        case Scheme::beam_zf_etp: {
            const ChannelMatrix &h = find(r.beams, rule2());
            const PrecodeResult pr = zf_etp(h);
            out.push_back({s, 0.0, sum_rate(sinr_etp(pr, noise), name), rule2(), {}, h});
            break;
        }
        case Scheme::beam_zf_imperfect: {
            for (std::size_t e = 0; e < r.csit.size(); ++e) {
                const CsitErrorModel model{c.csit_error_variances[e]};
                const BeamCombination pick = select_rule2(r.csit[e], c.rule2_scalarization);
                const ChannelMatrix &h_e = find(r.csit[e], pick);
                const PrecodeResult pr = zf_erp(h_e);
                out.push_back({s, model.error_variance, sum_rate_zf_imperfect(h_e, noise, model), pick, pr.beta,
                               h_e});
            }
            break;
        }
        }
    }
    return out;
}

/// Learning, selection and transmission on one fresh realization.
inline std::vector<SchemeOutcome> run_protocol(const PreparedScenario &p, double snr_db, const RandomStream &rng)
{
    return evaluate_realization(p, draw_realization(p, rng), snr_db);
}

} // namespace beamzf

#endif
