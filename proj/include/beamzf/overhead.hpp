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

#ifndef BEAMZF_OVERHEAD_HPP
#define BEAMZF_OVERHEAD_HPP

#include "core.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

namespace beamzf {

enum class FeedbackScheme { omni_np, omni_zf, beam_np, beam_zf };

inline constexpr std::array<FeedbackScheme, 4> all_feedback_schemes{
    FeedbackScheme::omni_np, FeedbackScheme::omni_zf, FeedbackScheme::beam_np, FeedbackScheme::beam_zf};

inline std::string_view to_string(FeedbackScheme s)
{
    switch (s) {
    case FeedbackScheme::omni_np:
        return "omni-np";
    case FeedbackScheme::omni_zf:
        return "omni-zf";
    case FeedbackScheme::beam_np:
        return "beam-np";
    case FeedbackScheme::beam_zf:
        return "beam-zf";
    }
    return "?";
}

inline FeedbackScheme parse_feedback_scheme(std::string_view name)
{
    for (FeedbackScheme s : all_feedback_schemes)
        if (name == to_string(s))
            return s;
    throw ConfigError("schemes", "unknown feedback scheme '" + std::string(name) + "'");
}

// Scalars fed back per selection epoch (no quantization).
struct FeedbackBudget {
    FeedbackScheme scheme = FeedbackScheme::omni_np;
    std::uint64_t real_scalars = 0;
    std::uint64_t complex_scalars = 0;
};

namespace detail {

inline std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp)
{
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (r > std::numeric_limits<std::uint64_t>::max() / base)
            throw ConfigError("L", "L^K overflows a 64-bit count");
        r *= base;
    }
    return r;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b)
{
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
        throw ConfigError("K", "feedback count overflows a 64-bit count");
    return a * b;
}

} // namespace detail

/// omni-np: K real, omni-zf: K^2 complex, beam-np: K L^K real,
/// beam-zf: K^2 L^K complex. L is ignored for omni schemes.
inline FeedbackBudget feedback_budget(std::uint64_t users, std::uint64_t beams, FeedbackScheme scheme)
{
    if (users == 0)
        throw ConfigError("K", "must be at least 1");
    if (beams == 0)
        throw ConfigError("L", "must be at least 1");
    FeedbackBudget b{scheme, 0, 0};
    switch (scheme) {
    case FeedbackScheme::omni_np:
        b.real_scalars = users;
        break;
    case FeedbackScheme::omni_zf:
        b.complex_scalars = detail::checked_mul(users, users);
        break;
    case FeedbackScheme::beam_np:
        b.real_scalars = detail::checked_mul(users, detail::checked_pow(beams, users));
        break;
    case FeedbackScheme::beam_zf:
        b.complex_scalars = detail::checked_mul(detail::checked_mul(users, users), detail::checked_pow(beams, users));
        break;
    }
    return b;
}

inline FeedbackBudget feedback_budget(std::uint64_t users, std::uint64_t beams, std::string_view scheme)
{
    return feedback_budget(users, beams, parse_feedback_scheme(scheme));
}

} // namespace beamzf

#endif
