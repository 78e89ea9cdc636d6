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

#ifndef THZGBSM_CONSTANTS_HPP
#define THZGBSM_CONSTANTS_HPP

namespace thzgbsm {

inline constexpr double speed_of_light = 299792458.0; // m/s
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double deg2rad(double deg) { return deg * pi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / pi; }

inline constexpr double ghz = 1e9;  // Hz
inline constexpr double mhz = 1e6;  // Hz
inline constexpr double ns = 1e-9;  // s
inline constexpr double mm = 1e-3;  // m

inline constexpr const char* version = "0.1.0";

} // namespace thzgbsm

#endif
