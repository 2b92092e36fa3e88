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

#ifndef BEAMZF_BEAMZF_HPP
#define BEAMZF_BEAMZF_HPP

#include "core.hpp"
#include "geometry.hpp"
#include "metrics.hpp"
#include "overhead.hpp"
#include "precoding.hpp"
#include "protocol.hpp"
#include "random.hpp"
#include "scenario.hpp"
#include "sweep.hpp"

#endif
