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

// Single-bounce scattering channel: scatterers on a sphere between the
// transmitter and receiver groups, switchable transmit beams, and channel
// power normalization.

#ifndef BEAMZF_GEOMETRY_HPP
#define BEAMZF_GEOMETRY_HPP

#include "core.hpp"
#include "random.hpp"

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace beamzf {

// ---------------------------------------------------------------------------
// Scene
// ---------------------------------------------------------------------------

struct SceneGeometry {
    std::vector<Vec3> tx_positions; // meters
    std::vector<Vec3> rx_positions; // meters
    Vec3 sphere_center = Vec3::Zero();
    double sphere_radius = 0.0;      // meters
    double carrier_wavelength = 0.0; // meters

    std::size_t users() const noexcept { return tx_positions.size(); }

    /// Places the sphere midway between the TX and RX centroids and validates.
    static SceneGeometry make(std::vector<Vec3> tx, std::vector<Vec3> rx, double radius, double wavelength)
    {
        if (tx.empty())
            throw ConfigError("geometry.tx_positions", "at least one transmitter is required");
        if (tx.size() != rx.size())
            throw ConfigError("geometry.rx_positions", "must have as many receivers as transmitters");
        if (!(radius > 0.0))
            throw ConfigError("geometry.sphere_radius", "must be positive");
        if (!(wavelength > 0.0))
            throw ConfigError("geometry.carrier_wavelength", "must be positive");

        Vec3 tx_c = Vec3::Zero(), rx_c = Vec3::Zero();
        for (const auto &p : tx)
            tx_c += p;
        for (const auto &p : rx)
            rx_c += p;
        tx_c /= double(tx.size());
        rx_c /= double(rx.size());

        SceneGeometry g{std::move(tx), std::move(rx), 0.5 * (tx_c + rx_c), radius, wavelength};
        for (const auto &p : g.tx_positions)
            if ((p - g.sphere_center).norm() <= radius)
                throw GeometryError("transmitter lies inside the scatterer sphere");
        for (const auto &p : g.rx_positions)
            if ((p - g.sphere_center).norm() <= radius)
                throw GeometryError("receiver lies inside the scatterer sphere");
        return g;
    }

    /// K transmitters on the line x = 0 and K receivers on x = separation,
    /// both centred on y = 0 with the given element spacing.
    static SceneGeometry line_layout(std::size_t users, double separation = 100.0, double spacing = 10.0,
                                     double radius = 20.0, double wavelength = 0.125)
    {
        if (users == 0)
            throw ConfigError("K", "must be at least 1");
        if (!(separation > 0.0))
            throw ConfigError("geometry.tx_rx_separation", "must be positive");
        if (!(spacing >= 0.0))
            throw ConfigError("geometry.element_spacing", "must be non-negative");
        std::vector<Vec3> tx, rx;
        for (std::size_t m = 0; m < users; ++m) {
            const double y = (double(m) - 0.5 * double(users - 1)) * spacing;
            tx.emplace_back(0.0, y, 0.0);
            rx.emplace_back(separation, y, 0.0);
        }
        return make(std::move(tx), std::move(rx), radius, wavelength);
    }
};

struct ScattererField {
    std::vector<Vec3> positions;
    std::vector<cdouble> gains;

    std::size_t size() const noexcept { return positions.size(); }
};

/// Uniform scatterers on the sphere surface with CN(0, 1/count) gains, so the
/// expected total scattered power is one regardless of count.
inline ScattererField draw_scatterers(const SceneGeometry &geometry, std::size_t count, RandomStream &rng)
{
    if (count == 0)
        throw ConfigError("scatterer_count", "must be at least 1");
    ScattererField field;
    field.positions.reserve(count);
    field.gains.reserve(count);
    const double variance = 1.0 / double(count);
    for (std::size_t s = 0; s < count; ++s) {
        field.positions.push_back(geometry.sphere_center + geometry.sphere_radius * rng.unit_vector());
        field.gains.push_back(rng.complex_normal(variance));
    }
    return field;
}

// ---------------------------------------------------------------------------
// Beams
// ---------------------------------------------------------------------------

/// Wrap to (-pi, pi].
inline double wrap_angle(double a)
{
    a = std::remainder(a, 2.0 * pi);
    return a <= -pi ? a + 2.0 * pi : a;
}

// Azimuth-only parametric pattern: max(floor, cos^q(delta)) inside the main
// lobe, floor elsewhere. Peak gain is 1.
struct BeamPattern {
    double steering_azimuth = 0.0; // radians
    double shape_exponent = 2.0;
    double floor_gain = 0.05;

    void validate() const
    {
        if (!(shape_exponent > 0.0))
            throw ConfigError("beam_pattern.shape_exponent", "must be positive");
        if (!(floor_gain >= 0.0 && floor_gain < 1.0))
            throw ConfigError("beam_pattern.floor_gain", "must lie in [0, 1)");
    }
};

inline double beam_gain(const BeamPattern &pattern, double azimuth)
{
    const double delta = wrap_angle(azimuth - pattern.steering_azimuth);
    double g = 0.0;
    if (std::abs(delta) < 0.5 * pi)
        g = std::pow(std::cos(delta), pattern.shape_exponent);
    return std::max(pattern.floor_gain, g);
}

/// Amplitude factor that makes the azimuth-averaged power gain of `pattern`
/// equal to that of an omnidirectional radiator.
inline double directivity_scale(const BeamPattern &pattern)
{
    constexpr int n = 1 << 16;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = beam_gain(pattern, pattern.steering_azimuth + 2.0 * pi * (i + 0.5) / n - pi);
        acc += g * g;
    }
    return 1.0 / std::sqrt(acc / n);
}

enum class BeamNormalization {
    peak,        // pattern used as-is; every beam is weaker than omni
    directivity, // same total radiated power as omni
};

// L identical patterns per transmitter, steered at 2*pi*l/L.
class BeamCodebook {
  public:
    BeamCodebook() : BeamCodebook(make(4)) {}

    static BeamCodebook make(std::size_t beams, double shape_exponent = 2.0, double floor_gain = 0.05,
                             BeamNormalization normalization = BeamNormalization::directivity)
    {
        if (beams == 0)
            throw ConfigError("L", "must be at least 1");
        BeamCodebook cb(beams, shape_exponent, floor_gain, normalization);
        cb.pattern(0).validate();
        if (normalization == BeamNormalization::directivity)
            cb.scale_ = directivity_scale(cb.pattern(0));
        return cb;
    }

    std::size_t beams() const noexcept { return beams_; }
    double shape_exponent() const noexcept { return shape_exponent_; }
    double floor_gain() const noexcept { return floor_gain_; }
    BeamNormalization normalization() const noexcept { return normalization_; }
    double amplitude_scale() const noexcept { return scale_; }

    BeamPattern pattern(std::size_t l) const
    {
        return {2.0 * pi * double(l) / double(beams_), shape_exponent_, floor_gain_};
    }

  private:
    BeamCodebook(std::size_t beams, double q, double floor, BeamNormalization n)
        : beams_(beams), shape_exponent_(q), floor_gain_(floor), normalization_(n)
    {
    }

    std::size_t beams_;
    double shape_exponent_;
    double floor_gain_;
    BeamNormalization normalization_;
    double scale_ = 1.0;
};

struct BeamCombination {
    std::vector<std::size_t> indices;

    std::size_t size() const noexcept { return indices.size(); }
    auto operator<=>(const BeamCombination &) const = default;

    std::string to_string() const
    {
        std::string s = "(";
        for (std::size_t i = 0; i < indices.size(); ++i) {
            if (i)
                s += ",";
            s += std::to_string(indices[i]);
        }
        return s + ")";
    }
};

struct OmniMarker {};
inline constexpr OmniMarker omni{};

// ---------------------------------------------------------------------------
// Channel matrix
// ---------------------------------------------------------------------------

// h(k, m): from transmitter m to receiver k.
struct ChannelMatrix {
    CMatrix entries;
    cdouble normalization_constant{1.0, 0.0};
    bool is_normalized = false;

    ChannelMatrix() = default;
    explicit ChannelMatrix(CMatrix h) : entries(std::move(h))
    {
        if (entries.rows() != entries.cols())
            throw UsageError("channel matrix must be square");
    }

    std::size_t users() const noexcept { return std::size_t(entries.rows()); }
    double frobenius_power() const { return entries.squaredNorm(); }
};

/// Precomputed per-path terms for one scatterer field; evaluating many beam
/// combinations against the same field only re-weights these.
class ChannelSynthesizer {
  public:
    ChannelSynthesizer(const SceneGeometry &geometry, const ScattererField &field)
        : users_(geometry.users()), paths_(users_ * users_, Eigen::Index(field.size())),
          azimuth_(users_, Eigen::Index(field.size()))
    {
        if (field.size() == 0)
            throw UsageError("scatterer field is empty");
        if (field.gains.size() != field.positions.size())
            throw UsageError("scatterer field has mismatched positions and gains");
        const double d_ref = geometry.sphere_radius;
        const double k0 = 2.0 * pi / geometry.carrier_wavelength;

        for (std::size_t s = 0; s < field.size(); ++s) {
            const Vec3 &p = field.positions[s];
            for (std::size_t m = 0; m < users_; ++m) {
                const Vec3 dt = p - geometry.tx_positions[m];
                const double d_tx = dt.norm();
                if (d_tx == 0.0)
                    throw GeometryError("scatterer coincides with a transmitter");
                azimuth_(Eigen::Index(m), Eigen::Index(s)) = std::atan2(dt.y(), dt.x());
                for (std::size_t k = 0; k < users_; ++k) {
                    const double d_rx = (geometry.rx_positions[k] - p).norm();
                    if (d_rx == 0.0)
                        throw GeometryError("scatterer coincides with a receiver");
                    const double amp = (d_ref / d_tx) * (d_ref / d_rx);
                    paths_(Eigen::Index(k * users_ + m), Eigen::Index(s)) =
                        field.gains[s] * amp * std::polar(1.0, -k0 * (d_tx + d_rx));
                }
            }
        }
    }

    std::size_t users() const noexcept { return users_; }

    ChannelMatrix channel(OmniMarker) const
    {
        CMatrix h(users_, users_);
        for (std::size_t k = 0; k < users_; ++k)
            for (std::size_t m = 0; m < users_; ++m)
                h(Eigen::Index(k), Eigen::Index(m)) = paths_.row(Eigen::Index(k * users_ + m)).sum();
        return ChannelMatrix(std::move(h));
    }

    /// One pattern per transmitter; every gain is multiplied by amplitude_scale.
    ChannelMatrix channel(std::span<const BeamPattern> patterns, double amplitude_scale = 1.0) const
    {
        if (patterns.size() != users_)
            throw UsageError("need one beam pattern per transmitter");
        CMatrix h(users_, users_);
        RVector w(paths_.cols());
        for (std::size_t m = 0; m < users_; ++m) {
            for (Eigen::Index s = 0; s < paths_.cols(); ++s)
                w(s) = amplitude_scale * beam_gain(patterns[m], azimuth_(Eigen::Index(m), s));
            for (std::size_t k = 0; k < users_; ++k)
                h(Eigen::Index(k), Eigen::Index(m)) =
                    (paths_.row(Eigen::Index(k * users_ + m)).transpose().array() * w.array()).sum();
        }
        return ChannelMatrix(std::move(h));
    }

    ChannelMatrix channel(const BeamCombination &beams, const BeamCodebook &codebook) const
    {
        if (beams.size() != users_)
            throw UsageError("beam combination length must equal the number of transmitters");
        std::vector<BeamPattern> patterns;
        patterns.reserve(users_);
        for (std::size_t idx : beams.indices) {
            if (idx >= codebook.beams())
                throw UsageError("beam index out of range");
            patterns.push_back(codebook.pattern(idx));
        }
        return channel(patterns, codebook.amplitude_scale());
    }

  private:
    std::size_t users_;
    CMatrix paths_;         // row k*K+m, column s
    Eigen::MatrixXd azimuth_; // row m, column s
};

inline ChannelMatrix synthesize_channel(const SceneGeometry &geometry, const ScattererField &field, OmniMarker)
{
    return ChannelSynthesizer(geometry, field).channel(omni);
}

inline ChannelMatrix synthesize_channel(const SceneGeometry &geometry, const ScattererField &field,
                                        const BeamCombination &beams, const BeamCodebook &codebook)
{
    return ChannelSynthesizer(geometry, field).channel(beams, codebook);
}

inline ChannelMatrix synthesize_channel(const SceneGeometry &geometry, const ScattererField &field,
                                        std::span<const BeamPattern> patterns, double amplitude_scale = 1.0)
{
    return ChannelSynthesizer(geometry, field).channel(patterns, amplitude_scale);
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

/// Normalization constant a = sqrt(K^2 / mean ||H||_F^2) over `subruns`
/// independent scatterer fields. The omni form is the one shared by every
/// beam combination of a Monte Carlo run.
inline cdouble estimate_normalization(const SceneGeometry &geometry, OmniMarker, std::size_t subruns,
                                      std::size_t scatterer_count, RandomStream &rng)
{
    if (subruns == 0)
        throw ConfigError("normalization_subruns", "must be at least 1");
    double acc = 0.0;
    for (std::size_t i = 0; i < subruns; ++i)
        acc += synthesize_channel(geometry, draw_scatterers(geometry, scatterer_count, rng), omni).frobenius_power();
    const double k = double(geometry.users());
    return {std::sqrt(k * k / (acc / double(subruns))), 0.0};
}

inline cdouble estimate_normalization(const SceneGeometry &geometry, const BeamCombination &beams,
                                      const BeamCodebook &codebook, std::size_t subruns,
                                      std::size_t scatterer_count, RandomStream &rng)
{
    if (subruns == 0)
        throw ConfigError("normalization_subruns", "must be at least 1");
    double acc = 0.0;
    for (std::size_t i = 0; i < subruns; ++i)
        acc += synthesize_channel(geometry, draw_scatterers(geometry, scatterer_count, rng), beams, codebook)
                   .frobenius_power();
    const double k = double(geometry.users());
    return {std::sqrt(k * k / (acc / double(subruns))), 0.0};
}

inline ChannelMatrix apply_normalization(const ChannelMatrix &h, cdouble a)
{
    if (h.is_normalized)
        throw UsageError("channel matrix is already normalized");
    ChannelMatrix out(a * h.entries);
    out.normalization_constant = a;
    out.is_normalized = true;
    return out;
}

} // namespace beamzf

#endif
