// SPDX-License-Identifier: Apache-2.0
//
// thz-gbsm: space-time-frequency non-stationary channel simulator for
// terahertz ultra-massive MIMO systems
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

#ifndef THZGBSM_THZGBSM_HPP
#define THZGBSM_THZGBSM_HPP

#include "thzgbsm/band.hpp"
#include "thzgbsm/channel.hpp"
#include "thzgbsm/cluster.hpp"
#include "thzgbsm/constants.hpp"
#include "thzgbsm/geometry.hpp"
#include "thzgbsm/io.hpp"
#include "thzgbsm/quadrature.hpp"
#include "thzgbsm/rays.hpp"
#include "thzgbsm/rng.hpp"
#include "thzgbsm/scattering.hpp"
#include "thzgbsm/scenario.hpp"
#include "thzgbsm/stats.hpp"
#include "thzgbsm/vec3.hpp"

#endif
