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

// Zero-forcing precoders: channel inversion with equal-receive-power (ERP)
// and equal-transmit-power (ETP) normalization.

#ifndef BEAMZF_PRECODING_HPP
#define BEAMZF_PRECODING_HPP

#include "core.hpp"
#include "geometry.hpp"

#include <Eigen/SVD>

#include <limits>

namespace beamzf {

/// Channels whose condition number exceeds this are rejected.
inline constexpr double max_condition_number = 1e12;

enum class ZfScheme { erp, etp };

struct PrecodeResult {
    CMatrix matrix;
    ZfScheme scheme = ZfScheme::erp;
    double beta = 0.0;          // ERP only
    RVector column_norms;       // ETP only: norms of the un-normalized inverse's columns
    RVector singular_values;    // of the input channel, descending
};

namespace detail {

struct Inversion {
    CMatrix pinv;
    RVector singular_values;
};

inline Inversion checked_inverse(const CMatrix &h)
{
    if (h.rows() != h.cols() || h.rows() == 0)
        throw UsageError("zero-forcing needs a non-empty square channel matrix");
    Eigen::JacobiSVD<CMatrix> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVector &sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(cond <= max_condition_number))
        throw IllConditionedChannel(cond);
    // H+ = V diag(1/s) U^H; for square full-rank H this is H^-1.
    CMatrix pinv = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
    return {std::move(pinv), sv};
}

} // namespace detail

/// Singular values, descending.
inline RVector singular_values(const CMatrix &h)
{
    return Eigen::JacobiSVD<CMatrix>(h).singularValues();
}

inline double condition_number(const CMatrix &h)
{
    const RVector sv = singular_values(h);
    const double smin = sv(sv.size() - 1);
    return smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
}

/// Right Moore-Penrose inverse H^H (H H^H)^-1.
inline CMatrix pseudo_inverse(const ChannelMatrix &h)
{
    return detail::checked_inverse(h.entries).pinv;
}

/// ERP factor through the trace of (H H^H)^-1.
inline double erp_beta_from_trace(const CMatrix &h)
{
    const CMatrix gram = h * h.adjoint();
    const CMatrix inv = gram.llt().solve(CMatrix::Identity(gram.rows(), gram.cols()));
    return 1.0 / inv.trace().real();
}

/// ERP factor through the singular values: 1 / sum 1/lambda_k^2.
inline double erp_beta_from_singular_values(const RVector &sv)
{
    return 1.0 / sv.array().square().inverse().sum();
}

/// W = sqrt(beta) H+, beta = power_scale / Tr((H H^H)^-1).
///
/// With power_scale = 1 the precoder carries unit total power
/// (Tr(W W^H) = 1). Passing power_scale = P scales the total precoded power
/// to P instead.
inline PrecodeResult zf_erp(const ChannelMatrix &h, double power_scale = 1.0)
{
    auto inv = detail::checked_inverse(h.entries);
    PrecodeResult r;
    r.scheme = ZfScheme::erp;
    r.beta = power_scale * erp_beta_from_singular_values(inv.singular_values);
    r.matrix = std::sqrt(r.beta) * inv.pinv;
    r.singular_values = std::move(inv.singular_values);
    return r;
}

/// Each column of H+ scaled to unit norm. Phase convention: the
/// largest-magnitude entry of every column is real and positive (first such
/// entry on ties).
inline PrecodeResult zf_etp(const ChannelMatrix &h)
{
    auto inv = detail::checked_inverse(h.entries);
    PrecodeResult r;
    r.scheme = ZfScheme::etp;
    r.matrix = std::move(inv.pinv);
    r.column_norms.resize(r.matrix.cols());
    for (Eigen::Index k = 0; k < r.matrix.cols(); ++k) {
        auto col = r.matrix.col(k);
        const double norm = col.norm();
        r.column_norms(k) = norm;
        Eigen::Index peak = 0;
        col.cwiseAbs().maxCoeff(&peak);
        const cdouble phase = col(peak) / std::abs(col(peak));
        col *= std::conj(phase) / norm;
        col(peak) = std::abs(col(peak));
    }
    r.singular_values = std::move(inv.singular_values);
    return r;
}

} // namespace beamzf

#endif
