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

#include <beamzf/geometry.hpp>

#include <gtest/gtest.h>

using namespace beamzf;

namespace {

// Four nodes at distance d from the origin: TX1 on -x, TX2 on -y, RX1 on +x, RX2 on +y.
SceneGeometry cross_geometry(double d)
{
    SceneGeometry g;
    g.tx_positions = {Vec3(-d, 0, 0), Vec3(0, -d, 0)};
    g.rx_positions = {Vec3(d, 0, 0), Vec3(0, d, 0)};
    g.sphere_center = Vec3::Zero();
    g.sphere_radius = 1.0;
    g.carrier_wavelength = 0.125;
    return g;
}

ScattererField single_scatterer_at_origin()
{
    return {{Vec3::Zero()}, {cdouble(1.0, 0.0)}};
}

} // namespace

TEST(BeamGain, PeakIsOne)
{
    for (double steer : {-3.0, -1.0, 0.0, 0.5, 2.0, 3.1}) {
        const BeamPattern p{steer, 2.0, 0.05};
        EXPECT_DOUBLE_EQ(beam_gain(p, steer), 1.0);
        EXPECT_DOUBLE_EQ(beam_gain(p, steer + 2.0 * pi), 1.0);
    }
}

TEST(BeamGain, CosineSquaredAtSixtyDegrees)
{
    const BeamPattern p{0.0, 2.0, 0.05};
    EXPECT_NEAR(beam_gain(p, pi / 3.0), 0.25, 1e-15);
    EXPECT_NEAR(beam_gain(p, -pi / 3.0), 0.25, 1e-15);
}

TEST(BeamGain, FloorOutsideMainLobe)
{
    const BeamPattern p{0.0, 2.0, 0.05};
    EXPECT_DOUBLE_EQ(beam_gain(p, pi), 0.05);
    EXPECT_DOUBLE_EQ(beam_gain(p, pi / 2.0 + 0.1), 0.05);
}

TEST(BeamGain, ContinuousInAzimuth)
{
    const BeamPattern p{0.7, 3.0, 0.05};
    for (double a = -4.0; a < 4.0; a += 0.001)
        ASSERT_LT(std::abs(beam_gain(p, a + 1e-7) - beam_gain(p, a)), 1e-5);
}

TEST(BeamGain, InvalidPatternRejected)
{
    EXPECT_THROW((BeamPattern{0.0, 0.0, 0.05}.validate()), ConfigError);
    EXPECT_THROW((BeamPattern{0.0, 2.0, -0.1}.validate()), ConfigError);
    EXPECT_THROW((BeamPattern{0.0, 2.0, 1.5}.validate()), ConfigError);
}

TEST(BeamCodebook, SteersUniformly)
{
    const BeamCodebook cb = BeamCodebook::make(4, 2.0, 0.05, BeamNormalization::peak);
    for (std::size_t l = 0; l < 4; ++l)
        EXPECT_NEAR(wrap_angle(cb.pattern(l).steering_azimuth - 2.0 * pi * double(l) / 4.0), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(cb.amplitude_scale(), 1.0);
}

TEST(BeamCodebook, DirectivityScaleMatchesClosedForm)
{
    // Floor 0: mean of cos^4 over the front half-plane is 3/16, so the scale is 4/sqrt(3).
    const BeamCodebook cb = BeamCodebook::make(4, 2.0, 0.0, BeamNormalization::directivity);
    EXPECT_NEAR(cb.amplitude_scale(), 4.0 / std::sqrt(3.0), 1e-6);
}

TEST(Scatterers, OnSphere)
{
    const SceneGeometry g = SceneGeometry::line_layout(2);
    RandomStream rng(1);
    const ScattererField f = draw_scatterers(g, 100, rng);
    ASSERT_EQ(f.size(), 100u);
    for (const auto &p : f.positions)
        EXPECT_LE(std::abs((p - g.sphere_center).norm() - g.sphere_radius), 1e-9 * g.sphere_radius);
}

TEST(Scatterers, UnitSphereAtOrigin)
{
    SceneGeometry g = cross_geometry(5.0);
    RandomStream rng(2);
    const ScattererField f = draw_scatterers(g, 100, rng);
    for (const auto &p : f.positions)
        EXPECT_NEAR(p.norm(), 1.0, 1e-12);
}

TEST(Scatterers, UnitTotalPower)
{
    const SceneGeometry g = SceneGeometry::line_layout(2);
    RandomStream rng(3);
    double total = 0.0;
    for (int i = 0; i < 10000; ++i)
        for (const cdouble &gain : draw_scatterers(g, 100, rng).gains)
            total += std::norm(gain);
    EXPECT_NEAR(total / 10000.0, 1.0, 0.05);

    double single = 0.0;
    for (int i = 0; i < 10000; ++i)
        single += std::norm(draw_scatterers(g, 1, rng).gains[0]);
    EXPECT_NEAR(single / 10000.0, 1.0, 0.05);
}

TEST(Scatterers, ZeroCountIsConfigError)
{
    const SceneGeometry g = SceneGeometry::line_layout(2);
    RandomStream rng(1);
    try {
        (void)draw_scatterers(g, 0, rng);
        FAIL();
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.field(), "scatterer_count");
    }
}

TEST(Geometry, NodeInsideSphereRejected)
{
    EXPECT_THROW((void)SceneGeometry::make({Vec3(-1, 0, 0)}, {Vec3(1, 0, 0)}, 5.0, 0.1), GeometryError);
    EXPECT_THROW((void)SceneGeometry::line_layout(2, 100.0, 10.0, 60.0), GeometryError);
}

TEST(Synthesis, SingleEquidistantScattererGivesEqualMagnitudes)
{
    const ChannelMatrix h = synthesize_channel(cross_geometry(7.0), single_scatterer_at_origin(), omni);
    EXPECT_FALSE(h.is_normalized);
    // Closed form: |h| = (R/d)^2 for a unit gain.
    const double expected = (1.0 / 7.0) * (1.0 / 7.0);
    for (Eigen::Index k = 0; k < 2; ++k)
        for (Eigen::Index m = 0; m < 2; ++m)
            EXPECT_NEAR(std::abs(h.entries(k, m)), expected, 1e-15);
}

TEST(Synthesis, SteeredVersusOpposedBeamRatio)
{
    // TX1 sees the scatterer at azimuth 0, TX2 at pi/2.
    const std::vector<BeamPattern> beams{{0.0, 2.0, 0.05}, {pi / 2.0 + pi, 2.0, 0.05}};
    const ChannelSynthesizer synth(cross_geometry(7.0), single_scatterer_at_origin());
    const ChannelMatrix h = synth.channel(beams, 1.0);
    for (Eigen::Index k = 0; k < 2; ++k)
        EXPECT_NEAR(std::abs(h.entries(k, 0)) / std::abs(h.entries(k, 1)), 20.0, 1e-9);
    // Directivity scaling multiplies every entry alike.
    const ChannelMatrix hs = synth.channel(beams, 1.7);
    EXPECT_NEAR((hs.entries - 1.7 * h.entries).norm(), 0.0, 1e-15);
}

TEST(Synthesis, PhaseFollowsPathLength)
{
    const double d = 7.0, lambda = 0.125;
    const ChannelMatrix h = synthesize_channel(cross_geometry(d), single_scatterer_at_origin(), omni);
    const cdouble expected = std::exp(cdouble(0.0, -2.0 * pi * 2.0 * d / lambda)) / (d * d);
    EXPECT_NEAR(std::abs(h.entries(0, 1) - expected), 0.0, 1e-14);
}

namespace {

// Independent evaluation of the single-bounce sum for one entry.
cdouble oracle_entry(const SceneGeometry &g, const ScattererField &f, std::size_t k, std::size_t m,
                     const BeamPattern *pattern, double scale)
{
    cdouble h = 0.0;
    const double r = g.sphere_radius;
    for (std::size_t s = 0; s < f.size(); ++s) {
        const Vec3 ts = f.positions[s] - g.tx_positions[m];
        const double d1 = ts.norm();
        const double d2 = (g.rx_positions[k] - f.positions[s]).norm();
        double gain = 1.0;
        if (pattern) {
            double delta = std::atan2(ts.y(), ts.x()) - pattern->steering_azimuth;
            while (delta > pi)
                delta -= 2.0 * pi;
            while (delta <= -pi)
                delta += 2.0 * pi;
            const double c = std::cos(delta);
            gain = scale * std::max(pattern->floor_gain, c > 0.0 ? std::pow(c, pattern->shape_exponent) : 0.0);
        }
        h += f.gains[s] * gain * (r / d1) * (r / d2) *
             std::polar(1.0, -2.0 * pi * (d1 + d2) / g.carrier_wavelength);
    }
    return h;
}

} // namespace

TEST(Synthesis, MatchesIndependentSum)
{
    const SceneGeometry g = SceneGeometry::line_layout(2);
    RandomStream rng(4);
    const ScattererField f = draw_scatterers(g, 50, rng);
    const BeamCodebook cb = BeamCodebook::make(4);
    const ChannelMatrix h = synthesize_channel(g, f, omni);
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) {
            const BeamCombination combo{{a, b}};
            const ChannelMatrix hb = synthesize_channel(g, f, combo, cb);
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t m = 0; m < 2; ++m) {
                    const BeamPattern p = cb.pattern(combo.indices[m]);
                    const cdouble want = oracle_entry(g, f, k, m, &p, cb.amplitude_scale());
                    EXPECT_NEAR(std::abs(hb.entries(Eigen::Index(k), Eigen::Index(m)) - want), 0.0,
                                1e-12 * std::abs(want) + 1e-15);
                }
        }
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t m = 0; m < 2; ++m) {
            const cdouble want = oracle_entry(g, f, k, m, nullptr, 1.0);
            EXPECT_NEAR(std::abs(h.entries(Eigen::Index(k), Eigen::Index(m)) - want), 0.0, 1e-12 * std::abs(want));
        }
}

TEST(Synthesis, OmniIsRepeatable)
{
    const SceneGeometry g = SceneGeometry::line_layout(2);
    RandomStream rng(4);
    const ScattererField f = draw_scatterers(g, 50, rng);
    const ChannelSynthesizer synth(g, f);
    const CMatrix first = synth.channel(omni).entries;
    (void)synth.channel(BeamCombination{{1, 2}}, BeamCodebook::make(4));
    EXPECT_EQ(synth.channel(omni).entries, first);
    EXPECT_EQ(synthesize_channel(g, f, omni).entries, first);
}

TEST(Synthesis, LinearInScatterers)
{
    const SceneGeometry g = SceneGeometry::line_layout(3);
    RandomStream rng(5);
    const ScattererField a = draw_scatterers(g, 30, rng);
    const ScattererField b = draw_scatterers(g, 20, rng);
    ScattererField u = a;
    u.positions.insert(u.positions.end(), b.positions.begin(), b.positions.end());
    u.gains.insert(u.gains.end(), b.gains.begin(), b.gains.end());
    const BeamCodebook cb = BeamCodebook::make(4);
    const BeamCombination combo{{1, 3, 0}};
    for (bool use_omni : {true, false}) {
        auto syn = [&](const ScattererField &f) {
            return use_omni ? synthesize_channel(g, f, omni) : synthesize_channel(g, f, combo, cb);
        };
        const CMatrix sum = syn(a).entries + syn(b).entries;
        EXPECT_LE((syn(u).entries - sum).cwiseAbs().maxCoeff(), 1e-12 * sum.cwiseAbs().maxCoeff());
    }
}

TEST(Synthesis, ZeroDistanceIsGeometryError)
{
    const SceneGeometry g = cross_geometry(7.0);
    const ScattererField f{{g.tx_positions[0]}, {cdouble(1.0, 0.0)}};
    EXPECT_THROW((void)synthesize_channel(g, f, omni), GeometryError);
}

TEST(Synthesis, BadCombinationRejected)
{
    const SceneGeometry g = SceneGeometry::line_layout(2);
    RandomStream rng(6);
    const ScattererField f = draw_scatterers(g, 10, rng);
    const BeamCodebook cb = BeamCodebook::make(4);
    EXPECT_THROW((void)synthesize_channel(g, f, BeamCombination{{0}}, cb), UsageError);
    EXPECT_THROW((void)synthesize_channel(g, f, BeamCombination{{0, 4}}, cb), UsageError);
}

TEST(Normalization, ForcedByArithmetic)
{
    CMatrix m(2, 2);
    m << 2, 2, 2, 2; // Frobenius power 16
    const ChannelMatrix h(m);
    const double a = std::sqrt(4.0 / h.frobenius_power());
    EXPECT_DOUBLE_EQ(a, 0.5);
    const ChannelMatrix n = apply_normalization(h, cdouble(a, 0.0));
    EXPECT_TRUE(n.is_normalized);
    EXPECT_EQ(n.normalization_constant, cdouble(0.5, 0.0));
    EXPECT_DOUBLE_EQ(n.frobenius_power(), 4.0);
    for (Eigen::Index i = 0; i < 4; ++i)
        EXPECT_EQ(n.entries(i), m(i) * 0.5);
}

TEST(Normalization, IdentityScaling)
{
    CMatrix m(2, 2);
    m << cdouble(1, 2), 3, cdouble(0, -1), 4;
    const ChannelMatrix n = apply_normalization(ChannelMatrix(m), cdouble(1.0, 0.0));
    EXPECT_EQ(n.entries, m);
    EXPECT_TRUE(n.is_normalized);
}

TEST(Normalization, DoubleNormalizationIsUsageError)
{
    const ChannelMatrix n = apply_normalization(ChannelMatrix(CMatrix::Identity(2, 2)), cdouble(2.0, 0.0));
    EXPECT_THROW((void)apply_normalization(n, cdouble(1.0, 0.0)), UsageError);
}

TEST(Normalization, HomogeneityOfPower)
{
    RandomStream rng(8);
    for (int t = 0; t < 20; ++t) {
        CMatrix m(3, 3);
        for (Eigen::Index i = 0; i < 9; ++i)
            m(i) = rng.complex_normal(1.0);
        const cdouble a = rng.complex_normal(1.0);
        const ChannelMatrix h(m);
        EXPECT_NEAR(apply_normalization(h, a).frobenius_power(), std::norm(a) * h.frobenius_power(),
                    1e-12 * h.frobenius_power());
    }
}

TEST(Normalization, SingleSubrunMatchesDrawnChannel)
{
    const SceneGeometry g = SceneGeometry::line_layout(2);
    RandomStream rng(9);
    RandomStream replay = rng;
    const cdouble a = estimate_normalization(g, omni, 1, 100, rng);
    const ChannelMatrix h = synthesize_channel(g, draw_scatterers(g, 100, replay), omni);
    EXPECT_EQ(a.imag(), 0.0);
    EXPECT_GT(a.real(), 0.0);
    EXPECT_NEAR(a.real(), std::sqrt(4.0 / h.frobenius_power()), 1e-12 * a.real());
}

TEST(Normalization, BatchMeanIsKSquared)
{
    const SceneGeometry g = SceneGeometry::line_layout(2);
    RandomStream rng(10);
    RandomStream replay = rng;
    const cdouble a = estimate_normalization(g, omni, 100, 100, rng);
    double mean = 0.0;
    for (int i = 0; i < 100; ++i)
        mean += apply_normalization(synthesize_channel(g, draw_scatterers(g, 100, replay), omni), a).frobenius_power();
    EXPECT_NEAR(mean / 100.0, 4.0, 1e-9);
}

TEST(Normalization, ConvergesToKSquaredOnFreshChannels)
{
    const SceneGeometry g = SceneGeometry::line_layout(2);
    RandomStream rng(12);
    const cdouble a = estimate_normalization(g, omni, 2000, 100, rng);
    double mean = 0.0;
    for (int i = 0; i < 2000; ++i)
        mean += apply_normalization(synthesize_channel(g, draw_scatterers(g, 100, rng), omni), a).frobenius_power();
    EXPECT_NEAR(mean / 2000.0, 4.0, 0.4);
}
