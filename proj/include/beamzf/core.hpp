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

#ifndef BEAMZF_CORE_HPP
#define BEAMZF_CORE_HPP

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace beamzf {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

inline constexpr double pi = std::numbers::pi;

// Error hierarchy. Everything derives from beamzf::Error so callers can catch
// one type at the boundary (the CLI does exactly that).
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Invalid scenario or argument values. `field()` names the offending input.
class ConfigError : public Error {
  public:
    ConfigError(std::string field, const std::string &what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string &field() const noexcept { return field_; }

  private:
    std::string field_;
};

class GeometryError : public Error {
  public:
    using Error::Error;
};

class UsageError : public Error {
  public:
    using Error::Error;
};

// Channel too close to singular for zero-forcing (condition number above the cutoff).
class IllConditionedChannel : public Error {
  public:
    IllConditionedChannel(double condition_number)
        : Error("ill-conditioned channel (condition number " + std::to_string(condition_number) + ")"),
          condition_number_(condition_number) {}
    double condition_number() const noexcept { return condition_number_; }

  private:
    double condition_number_;
};

class NoValidCombination : public Error {
  public:
    using Error::Error;
};

class CombinatorialExplosion : public Error {
  public:
    using Error::Error;
};

} // namespace beamzf

#endif
