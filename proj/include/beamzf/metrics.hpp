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

// Link metrics: per-user SINR, rates and sum-rate for non-precoded and
// zero-forcing transmission, imperfect CSIT, and a symbol-level simulator
// that measures SINR empirically.

#ifndef BEAMZF_METRICS_HPP
#define BEAMZF_METRICS_HPP

#include "core.hpp"
#include "geometry.hpp"
#include "precoding.hpp"
#include "random.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace beamzf {

struct NoiseModel {
    double noise_variance = 1.0;  // sigma_n^2
    double symbol_variance = 1.0; // sigma_s^2 = P / K
    double total_power = 1.0;     // P

    /// total_power defaults to K, which gives unit symbol variance.
    static NoiseModel make(double noise_variance, std::size_t users, std::optional<double> total_power = {})
    {
        if (!(noise_variance > 0.0))
            throw ConfigError("noise_variance", "must be positive");
        if (users == 0)
            throw ConfigError("K", "must be at least 1");
        const double p = total_power.value_or(double(users));
        if (!(p > 0.0))
            throw ConfigError("total_power", "must be positive");
        return {noise_variance, p / double(users), p};
    }

    /// Target receive SNR in dB against unit symbol power and a unit-mean-power
    /// normalized channel: sigma_n^2 = 10^(-snr/10).
    static NoiseModel from_snr_db(double snr_db, std::size_t users, std::optional<double> total_power = {})
    {
        return make(std::pow(10.0, -snr_db / 10.0), users, total_power);
    }
};

struct LinkReport {
    std::string scheme;
    std::vector<double> sinrs; // linear
    std::vector<double> rates; // bits/s/Hz
    double sum_rate = 0.0;     // bits/s/Hz
};

inline LinkReport sum_rate(std::span<const double> sinrs, std::string scheme = {})
{
    LinkReport r;
    r.scheme = std::move(scheme);
    r.sinrs.assign(sinrs.begin(), sinrs.end());
    r.rates.reserve(sinrs.size());
    for (double g : sinrs) {
        if (!(g >= 0.0))
            throw UsageError("SINR must be non-negative");
        r.rates.push_back(std::log2(1.0 + g));
        r.sum_rate += r.rates.back();
    }
    return r;
}

/// gamma_k = |h_kk|^2 / (sum_{m != k} |h_km|^2 + sigma_n^2), all symbol
/// powers sigma_s^2.
inline std::vector<double> sinr_nonprecoded(const ChannelMatrix &h, const NoiseModel &noise)
{
    const Eigen::Index k_users = h.entries.rows();
    std::vector<double> out(std::size_t(k_users), 0.0);
    for (Eigen::Index k = 0; k < k_users; ++k) {
        const double desired = std::norm(h.entries(k, k));
        const double total = h.entries.row(k).squaredNorm();
        out[std::size_t(k)] = noise.symbol_variance * desired /
                              (noise.symbol_variance * (total - desired) + noise.noise_variance);
    }
    return out;
}

/// SINR under an arbitrary linear precoder W; entry (k, m) of H W is h_k^H w_m.
inline std::vector<double> sinr_linear_precoded(const ChannelMatrix &h, const CMatrix &w, const NoiseModel &noise)
{
    if (w.rows() != h.entries.cols())
        throw UsageError("precoder rows must match channel columns");
    const ChannelMatrix composite(CMatrix(h.entries * w));
    return sinr_nonprecoded(composite, noise);
}

/// Closed form for ERP: every user sees beta / sigma_n^2.
inline std::vector<double> sinr_erp(const PrecodeResult &p, const NoiseModel &noise)
{
    return std::vector<double>(std::size_t(p.matrix.cols()), noise.symbol_variance * p.beta / noise.noise_variance);
}

/// Closed form for ETP: 1 / (sigma_n^2 ||F(:,k)||^2).
inline std::vector<double> sinr_etp(const PrecodeResult &p, const NoiseModel &noise)
{
    std::vector<double> out;
    for (Eigen::Index k = 0; k < p.column_norms.size(); ++k)
        out.push_back(noise.symbol_variance / (noise.noise_variance * p.column_norms(k) * p.column_norms(k)));
    return out;
}

// ---------------------------------------------------------------------------
// Imperfect CSIT
// ---------------------------------------------------------------------------

struct CsitErrorModel {
    double error_variance = 0.0; // sigma_e^2
};

/// H_e = H + E with E_ij ~ CN(0, sigma_e^2) i.i.d.
inline ChannelMatrix apply_csit_error(const ChannelMatrix &h, const CsitErrorModel &model, RandomStream &rng)
{
    if (!h.is_normalized)
        throw UsageError("CSIT error is applied to normalized channels only");
    if (!(model.error_variance >= 0.0))
        throw ConfigError("csit_error_variances", "must be non-negative");
    ChannelMatrix out = h;
    if (model.error_variance == 0.0)
        return out;
    for (Eigen::Index j = 0; j < out.entries.cols(); ++j)
        for (Eigen::Index i = 0; i < out.entries.rows(); ++i)
            out.entries(i, j) += rng.complex_normal(model.error_variance);
    return out;
}

/// ZF-ERP designed on the erroneous channel H_e. Every user gets
/// gamma = sigma_s^2 beta / (P sigma_e^2 + sigma_n^2), beta taken from H_e's
/// singular values. power_scale is forwarded to the ERP factor (see zf_erp).
inline LinkReport sum_rate_zf_imperfect(const ChannelMatrix &h_e, const NoiseModel &noise,
                                        const CsitErrorModel &model, double power_scale = 1.0)
{
    const PrecodeResult p = zf_erp(h_e, power_scale);
    const double gamma =
        noise.symbol_variance * p.beta / (noise.total_power * model.error_variance + noise.noise_variance);
    const std::vector<double> sinrs(h_e.users(), gamma);
    return sum_rate(sinrs, "beam-zf-imperfect");
}

/// High-power limit K log2(1 + 1 / (sigma_e^2 sum 1/lambda_k^2)).
inline double imperfect_rate_ceiling(const ChannelMatrix &h_e, const CsitErrorModel &model)
{
    if (model.error_variance == 0.0)
        return std::numeric_limits<double>::infinity();
    const double beta = erp_beta_from_singular_values(singular_values(h_e.entries));
    return double(h_e.users()) * std::log2(1.0 + beta / model.error_variance);
}

// ---------------------------------------------------------------------------
// Symbol-level simulation
// ---------------------------------------------------------------------------

struct TransmissionSample {
    CVector sent;     // s
    CVector precoded; // s' = W s
    CVector received; // y = H s' + n
    CVector noise;    // n
};

inline TransmissionSample transmit(const ChannelMatrix &h, const CMatrix &w, const NoiseModel &noise,
                                   RandomStream &rng)
{
    const Eigen::Index k_users = h.entries.rows();
    TransmissionSample t;
    t.sent.resize(k_users);
    t.noise.resize(k_users);
    for (Eigen::Index k = 0; k < k_users; ++k)
        t.sent(k) = rng.complex_normal(noise.symbol_variance);
    for (Eigen::Index k = 0; k < k_users; ++k)
        t.noise(k) = rng.complex_normal(noise.noise_variance);
    t.precoded = w * t.sent;
    t.received = h.entries * t.precoded + t.noise;
    return t;
}

/// Empirical per-user SINR from `symbol_count` transmitted symbol vectors.
/// The desired part of y_k is (H W)_kk s_k; everything else in y_k counts as
/// interference plus noise. Without a precoder, W = I.
inline std::vector<double> simulate_symbol_transmission(const ChannelMatrix &h, const std::optional<CMatrix> &w,
                                                        const NoiseModel &noise, std::size_t symbol_count,
                                                        RandomStream &rng)
{
    if (symbol_count < 1000)
        throw ConfigError("symbol_count", "must be at least 1000");
    const Eigen::Index k_users = h.entries.rows();
    const CMatrix precoder = w.value_or(CMatrix::Identity(k_users, k_users));
    const CMatrix composite = h.entries * precoder;

    std::vector<double> signal(std::size_t(k_users), 0.0), rest(std::size_t(k_users), 0.0);
    for (std::size_t n = 0; n < symbol_count; ++n) {
        const TransmissionSample t = transmit(h, precoder, noise, rng);
        for (Eigen::Index k = 0; k < k_users; ++k) {
            const cdouble desired = composite(k, k) * t.sent(k);
            signal[std::size_t(k)] += std::norm(desired);
            rest[std::size_t(k)] += std::norm(t.received(k) - desired);
        }
    }
    std::vector<double> out;
    for (std::size_t k = 0; k < signal.size(); ++k)
        out.push_back(signal[k] / rest[k]);
    return out;
}

} // namespace beamzf

#endif
