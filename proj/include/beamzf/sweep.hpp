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

// Monte Carlo sweep over SNR (and CSIT error variance) and result emission.
//
// Run r, attempt a draws its realization from the stream
// derive_seed(seed, {r, a}); the same realization is evaluated at every SNR
// point and for every scheme. A realization that some enabled scheme cannot
// serve is discarded and redrawn with the next attempt index. Per-run results
// are stored by index and reduced in index order, so the output is identical
// for any thread count.

#ifndef BEAMZF_SWEEP_HPP
#define BEAMZF_SWEEP_HPP

#include "core.hpp"
#include "overhead.hpp"
#include "protocol.hpp"
#include "random.hpp"
#include "scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace beamzf {

struct SweepCell {
    Scheme scheme = Scheme::omni_np;
    double snr_db = 0.0;
    double error_variance = 0.0;
    double sum_rate_mean = 0.0; // bits/s/Hz
    double sum_rate_std = 0.0;  // sample standard deviation; 0 for a single run
    std::size_t runs = 0;
    std::size_t rejected = 0;
    FeedbackBudget feedback;

    double standard_error() const { return runs ? sum_rate_std / std::sqrt(double(runs)) : 0.0; }
};

struct SweepResult {
    ScenarioConfig config;
    std::vector<SweepCell> cells;

    /// Throws UsageError if the cell is absent.
    const SweepCell &cell(Scheme scheme, double snr_db, double error_variance = 0.0) const
    {
        for (const auto &c : cells)
            if (c.scheme == scheme && c.snr_db == snr_db && c.error_variance == error_variance)
                return c;
        throw UsageError("no sweep cell for " + std::string(to_string(scheme)) + " at " + std::to_string(snr_db) +
                         " dB");
    }
};

struct SweepOptions {
    unsigned threads = 0; // 0: hardware concurrency
    std::size_t max_attempts_per_run = 1000;
};

/// Stream for run `run`, attempt `attempt` of a sweep with root `seed`.
inline RandomStream run_stream(std::uint64_t seed, std::size_t run, std::size_t attempt)
{
    return RandomStream(derive_seed(seed, {run, attempt}));
}

inline SweepResult run_sweep(const ScenarioConfig &config, SweepOptions options = {})
{
    const PreparedScenario prepared = PreparedScenario::make(config);
    const ScenarioConfig &c = prepared.config;

    // Cell layout: scheme (config order) x error variance x SNR.
    struct Key {
        Scheme scheme;
        double error_variance;
        double snr_db;
    };
    std::vector<Key> keys;
    for (Scheme s : c.schemes) {
        std::vector<double> errs{0.0};
        if (s == Scheme::beam_zf_imperfect)
            errs = c.csit_error_variances;
        for (double e : errs)
            for (double snr : c.snr_grid_db)
                keys.push_back({s, e, snr});
    }

    const std::size_t n_snr = c.snr_grid_db.size();
    std::vector<std::vector<double>> values(keys.size(), std::vector<double>(c.runs, 0.0));
    std::vector<std::size_t> rejected(c.runs, 0);

    auto run_one = [&](std::size_t run) {
        for (std::size_t attempt = 0;; ++attempt) {
            if (attempt >= options.max_attempts_per_run)
                throw Error("run " + std::to_string(run) + ": no usable realization after " +
                            std::to_string(attempt) + " attempts");
            try {
                const Realization r = draw_realization(prepared, run_stream(c.seed, run, attempt));
                std::vector<double> row(keys.size(), 0.0);
                for (std::size_t si = 0; si < n_snr; ++si) {
                    const auto outcomes = evaluate_realization(prepared, r, c.snr_grid_db[si]);
                    // Outcomes follow the same scheme x error-variance order as keys.
                    for (std::size_t oi = 0; oi < outcomes.size(); ++oi)
                        row[oi * n_snr + si] = outcomes[oi].report.sum_rate;
                }
                for (std::size_t k = 0; k < keys.size(); ++k)
                    values[k][run] = row[k];
                return;
            } catch (const NoValidCombination &) {
                ++rejected[run];
            } catch (const IllConditionedChannel &) {
                ++rejected[run];
            }
        }
    };

    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = unsigned(std::min<std::size_t>(threads, c.runs));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t run = next.fetch_add(1);
            if (run >= c.runs)
                return;
            try {
                run_one(run);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = c.runs;
                return;
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);

    std::size_t total_rejected = 0;
    for (std::size_t r : rejected)
        total_rejected += r;

    SweepResult result{c, {}};
    for (std::size_t k = 0; k < keys.size(); ++k) {
        // Welford, in run order.
        double mean = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < c.runs; ++i) {
            const double x = values[k][i];
            const double delta = x - mean;
            mean += delta / double(i + 1);
            m2 += delta * (x - mean);
        }
        SweepCell cell;
        cell.scheme = keys[k].scheme;
        cell.snr_db = keys[k].snr_db;
        cell.error_variance = keys[k].error_variance;
        cell.sum_rate_mean = mean;
        cell.sum_rate_std = c.runs > 1 ? std::sqrt(m2 / double(c.runs - 1)) : 0.0;
        cell.runs = c.runs;
        cell.rejected = total_rejected;
        cell.feedback = feedback_budget(c.K, c.L, feedback_family(keys[k].scheme));
        result.cells.push_back(cell);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

enum class OutputFormat { csv, json };

inline OutputFormat parse_output_format(std::string_view s)
{
    if (s == "csv")
        return OutputFormat::csv;
    if (s == "json")
        return OutputFormat::json;
    throw ConfigError("format", "expected 'csv' or 'json'");
}

inline constexpr const char *csv_header =
    "scheme,snr_db,error_variance,sum_rate_mean,sum_rate_std,runs,rejected,feedback_real,feedback_complex";

/// Six significant digits, printf %g style.
inline std::string format_real(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline void write_csv(std::ostream &os, const SweepResult &result)
{
    os << csv_header << '\n';
    for (const auto &c : result.cells)
        os << to_string(c.scheme) << ',' << format_real(c.snr_db) << ',' << format_real(c.error_variance) << ','
           << format_real(c.sum_rate_mean) << ',' << format_real(c.sum_rate_std) << ',' << c.runs << ','
           << c.rejected << ',' << c.feedback.real_scalars << ',' << c.feedback.complex_scalars << '\n';
}

inline json to_json(const SweepResult &result)
{
    json records = json::array();
    for (const auto &c : result.cells)
        records.push_back({{"scheme", std::string(to_string(c.scheme))},
                           {"snr_db", c.snr_db},
                           {"error_variance", c.error_variance},
                           {"sum_rate_mean", c.sum_rate_mean},
                           {"sum_rate_std", c.sum_rate_std},
                           {"runs", c.runs},
                           {"rejected", c.rejected},
                           {"feedback_real", c.feedback.real_scalars},
                           {"feedback_complex", c.feedback.complex_scalars}});
    return {{"config", to_json(result.config)}, {"records", records}};
}

inline SweepResult sweep_result_from_json(const json &j)
{
    SweepResult r;
    r.config = scenario_from_json(j.at("config"));
    for (const auto &rec : j.at("records")) {
        SweepCell c;
        c.scheme = parse_scheme(rec.at("scheme").get<std::string>());
        c.snr_db = rec.at("snr_db").get<double>();
        c.error_variance = rec.at("error_variance").get<double>();
        c.sum_rate_mean = rec.at("sum_rate_mean").get<double>();
        c.sum_rate_std = rec.at("sum_rate_std").get<double>();
        c.runs = rec.at("runs").get<std::size_t>();
        c.rejected = rec.at("rejected").get<std::size_t>();
        c.feedback.scheme = feedback_family(c.scheme);
        c.feedback.real_scalars = rec.at("feedback_real").get<std::uint64_t>();
        c.feedback.complex_scalars = rec.at("feedback_complex").get<std::uint64_t>();
        r.cells.push_back(c);
    }
    return r;
}

inline void write_results(std::ostream &os, const SweepResult &result, OutputFormat format)
{
    if (format == OutputFormat::csv)
        write_csv(os, result);
    else
        os << to_json(result).dump(2) << '\n';
}

/// Writes to `destination`, or standard output when it is empty.
inline void emit_results(const SweepResult &result, OutputFormat format,
                         const std::optional<std::filesystem::path> &destination = {})
{
    if (!destination) {
        write_results(std::cout, result, format);
        std::cout.flush();
        return;
    }
    std::ofstream out(*destination);
    if (!out)
        throw Error("cannot open output file '" + destination->string() + "'");
    write_results(out, result, format);
    out.flush();
    if (!out)
        throw Error("failed writing output file '" + destination->string() + "'");
}

} // namespace beamzf

#endif
