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

#ifndef BEAMZF_RANDOM_HPP
#define BEAMZF_RANDOM_HPP

#include "core.hpp"

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace beamzf {

/// SplitMix64 finalizer. Used only to derive independent engine seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive a substream seed from a root seed and an index path, e.g.
/// derive_seed(seed, {run, attempt}). Distinct paths give unrelated seeds, so
/// the result never depends on which thread evaluates which run.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) noexcept
{
    std::uint64_t h = splitmix64(root);
    for (std::uint64_t p : path)
        h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
    return h;
}

/// A single random stream. Not thread-safe; give each worker its own.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Child stream keyed by an index path; does not advance this stream.
    RandomStream substream(std::initializer_list<std::uint64_t> path) const
    {
        return RandomStream(derive_seed(seed_of_engine(), path));
    }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double normal() { return normal_(engine_); }

    /// Circularly-symmetric complex Gaussian CN(0, variance).
    cdouble complex_normal(double variance)
    {
        const double s = std::sqrt(variance / 2.0);
        const double re = normal();
        const double im = normal();
        return {s * re, s * im};
    }

    /// Uniform direction on the unit sphere.
    Vec3 unit_vector()
    {
        for (;;) {
            Vec3 v(normal(), normal(), normal());
            const double n = v.norm();
            if (n > 1e-12)
                return v / n;
        }
    }

    std::mt19937_64 &engine() { return engine_; }

  private:
    std::uint64_t seed_of_engine() const
    {
        // Copy so that deriving a child never perturbs this stream.
        std::mt19937_64 copy = engine_;
        return copy();
    }

    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace beamzf

#endif
