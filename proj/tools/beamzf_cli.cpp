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

// Command line front end: sweep, budget, inspect.

#include <beamzf/beamzf.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace beamzf;

namespace {

struct ScenarioFlags {
    std::string config_path;
    std::uint64_t seed = 0;
    std::size_t runs = 0;
    std::vector<double> snr;
    std::vector<std::string> schemes;
    std::vector<double> csit_error;
    CLI::Option *seed_opt = nullptr;
    CLI::Option *runs_opt = nullptr;
    CLI::Option *snr_opt = nullptr;
    CLI::Option *schemes_opt = nullptr;
    CLI::Option *csit_opt = nullptr;

    void attach(CLI::App *cmd)
    {
        cmd->add_option("--config", config_path, "JSON scenario file");
        seed_opt = cmd->add_option("--seed", seed, "root random seed");
        runs_opt = cmd->add_option("--runs", runs, "Monte Carlo runs per cell");
        snr_opt = cmd->add_option("--snr", snr, "comma-separated SNR points in dB")->delimiter(',');
        schemes_opt = cmd->add_option("--schemes", schemes, "comma-separated scheme list")->delimiter(',');
        csit_opt = cmd->add_option("--csit-error", csit_error, "comma-separated CSIT error variances")
                       ->delimiter(',');
    }

    /// File values first, then flags on top.
    ScenarioConfig resolve() const
    {
        ScenarioConfig c = config_path.empty() ? ScenarioConfig{} : load_scenario(config_path);
        if (seed_opt->count())
            c.seed = seed;
        if (runs_opt->count())
            c.runs = runs;
        if (snr_opt->count())
            c.snr_grid_db = snr;
        if (schemes_opt->count()) {
            c.schemes.clear();
            for (const auto &s : schemes)
                c.schemes.push_back(parse_scheme(s));
        }
        if (csit_opt->count()) {
            c.csit_error_variances = csit_error;
            if (!schemes_opt->count() && !c.enabled(Scheme::beam_zf_imperfect) && !csit_error.empty())
                c.schemes.push_back(Scheme::beam_zf_imperfect);
        }
        c.validate();
        return c;
    }
};

std::ostream *open_output(const std::string &path, std::ofstream &file)
{
    if (path.empty())
        return &std::cout;
    file.open(path);
    if (!file)
        throw Error("cannot open output file '" + path + "'");
    return &file;
}

FeedbackScheme budget_scheme(const std::string &name)
{
    try {
        return parse_feedback_scheme(name);
    } catch (const ConfigError &) {
        return feedback_family(parse_scheme(name));
    }
}

json channel_json(const ChannelMatrix &h, const NoiseModel &noise)
{
    json per_user_snr = json::array();
    json rows = json::array();
    for (Eigen::Index k = 0; k < h.entries.rows(); ++k) {
        per_user_snr.push_back(noise.symbol_variance * std::norm(h.entries(k, k)) / noise.noise_variance);
        json row = json::array();
        for (Eigen::Index m = 0; m < h.entries.cols(); ++m)
            row.push_back({h.entries(k, m).real(), h.entries(k, m).imag()});
        rows.push_back(row);
    }
    return {{"entries", rows}, {"frobenius_power", h.frobenius_power()}, {"per_user_snr", per_user_snr}};
}

json inspect(const ScenarioConfig &config, std::size_t run)
{
    const PreparedScenario p = PreparedScenario::make(config);
    for (std::size_t attempt = 0; attempt < 1000; ++attempt) {
        const Realization r = draw_realization(p, run_stream(config.seed, run, attempt));
        json points = json::array();
        try {
            for (double snr_db : config.snr_grid_db) {
                const NoiseModel noise = NoiseModel::from_snr_db(snr_db, config.K, config.total_power);
                json schemes = json::array();
                for (const auto &o : evaluate_realization(p, r, snr_db))
                    schemes.push_back({{"scheme", std::string(to_string(o.scheme))},
                                       {"error_variance", o.error_variance},
                                       {"selected", o.selected ? json(o.selected->to_string()) : json(nullptr)},
                                       {"beta", o.beta ? json(*o.beta) : json(nullptr)},
                                       {"sinrs", o.report.sinrs},
                                       {"rates", o.report.rates},
                                       {"sum_rate", o.report.sum_rate},
                                       {"channel", channel_json(o.channel, noise)}});
                json candidates = json::array();
                if (!r.beams.empty()) {
                    const auto r1 = score_rule1(r.beams, noise);
                    const auto r2 = score_rule2(r.beams, config.rule2_scalarization);
                    for (std::size_t i = 0; i < r.beams.size(); ++i)
                        candidates.push_back({{"combination", r.beams[i].combination.to_string()},
                                              {"rule1_sum_sinr", r1[i].score ? json(*r1[i].score) : json(nullptr)},
                                              {"rule2_score", r2[i].score ? json(*r2[i].score) : json(nullptr)}});
                }
                points.push_back({{"snr_db", snr_db},
                                  {"noise_variance", noise.noise_variance},
                                  {"omni_per_user_snr", channel_json(r.omni, noise)["per_user_snr"]},
                                  {"candidates", candidates},
                                  {"schemes", schemes}});
            }
        } catch (const NoValidCombination &) {
            continue;
        } catch (const IllConditionedChannel &) {
            continue;
        }
        return {{"run", run},
                {"attempt", attempt},
                {"normalization_constant", r.normalization.real()},
                {"omni_frobenius_power", r.omni.frobenius_power()},
                {"points", points}};
    }
    throw Error("run " + std::to_string(run) + ": no usable realization after 1000 attempts");
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Beam-domain interference channel simulator"};
    app.require_subcommand(1);

    // sweep
    auto *sweep = app.add_subcommand("sweep", "Monte Carlo sum-rate sweep");
    ScenarioFlags sweep_flags;
    sweep_flags.attach(sweep);
    std::string sweep_format = "csv", sweep_output;
    unsigned threads = 0;
    sweep->add_option("--format", sweep_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--output", sweep_output, "output file (default: stdout)");
    sweep->add_option("--threads", threads, "worker threads (0: all cores)");

    // budget
    auto *budget = app.add_subcommand("budget", "Feedback overhead table");
    std::vector<std::uint64_t> ks{2}, ls{4};
    std::vector<std::string> budget_schemes{"omni-np", "omni-zf", "beam-np", "beam-zf"};
    std::string budget_format = "csv", budget_output;
    budget->add_option("--k", ks, "comma-separated user counts")->delimiter(',');
    budget->add_option("--l", ls, "comma-separated beam counts")->delimiter(',');
    budget->add_option("--schemes", budget_schemes, "comma-separated schemes")->delimiter(',');
    budget->add_option("--format", budget_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    budget->add_option("--output", budget_output, "output file (default: stdout)");

    // inspect
    auto *insp = app.add_subcommand("inspect", "Dump one realization");
    ScenarioFlags inspect_flags;
    inspect_flags.attach(insp);
    std::size_t inspect_run = 0;
    std::string inspect_output;
    insp->add_option("--run", inspect_run, "run index (same stream as the sweep's run)");
    insp->add_option("--output", inspect_output, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }

    try {
        if (*sweep) {
            const ScenarioConfig config = sweep_flags.resolve();
            const SweepResult result = run_sweep(config, {threads});
            std::optional<std::filesystem::path> dest;
            if (!sweep_output.empty())
                dest = sweep_output;
            emit_results(result, parse_output_format(sweep_format), dest);
        } else if (*budget) {
            std::ofstream file;
            std::ostream &os = *open_output(budget_output, file);
            json rows = json::array();
            if (budget_format == "csv")
                os << "scheme,K,L,feedback_real,feedback_complex\n";
            for (std::uint64_t k : ks)
                for (std::uint64_t l : ls)
                    for (const auto &name : budget_schemes) {
                        const FeedbackBudget b = feedback_budget(k, l, budget_scheme(name));
                        if (budget_format == "csv")
                            os << to_string(b.scheme) << ',' << k << ',' << l << ',' << b.real_scalars << ','
                               << b.complex_scalars << '\n';
                        else
                            rows.push_back({{"scheme", std::string(to_string(b.scheme))},
                                            {"K", k},
                                            {"L", l},
                                            {"feedback_real", b.real_scalars},
                                            {"feedback_complex", b.complex_scalars}});
                    }
            if (budget_format == "json")
                os << rows.dump(2) << '\n';
        } else if (*insp) {
            const ScenarioConfig config = inspect_flags.resolve();
            std::ofstream file;
            std::ostream &os = *open_output(inspect_output, file);
            os << inspect(config, inspect_run).dump(2) << '\n';
        }
    } catch (const beamzf::Error &e) {
        std::cerr << "beamzf: error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "beamzf: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
