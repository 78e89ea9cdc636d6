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

#ifndef THZGBSM_RNG_HPP
#define THZGBSM_RNG_HPP

#include <cstdint>
#include <random>

namespace thzgbsm {

/// Purpose tags for hierarchical sub-stream derivation. One root seed plus a
/// (purpose, index...) tuple identifies every random stream in a run, so
/// independent work items never share or race on generator state.
enum class RngPurpose : std::uint64_t {
    cluster_delay = 1,
    cluster_shadow = 2,
    cluster_geometry = 3,
    sigma_draw = 4,
    ray_phase = 5,
    ray_pairing = 6,
    ray_angles = 7,
    mc_replica = 8,
    fit_restart = 9,
};

namespace detail {

// SplitMix64 finalizer; used only to spread seed material, not as the
// run-time generator.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace detail

/// Deterministic sub-stream: mt19937_64 seeded from a mix of the root seed,
/// the purpose tag and up to three indices (cluster, ray/sub-band, replica).
inline std::mt19937_64 make_stream(std::uint64_t root_seed, RngPurpose purpose,
                                   std::uint64_t a = 0, std::uint64_t b = 0,
                                   std::uint64_t c = 0)
{
    std::uint64_t s = detail::splitmix64(root_seed);
    s = detail::splitmix64(s ^ static_cast<std::uint64_t>(purpose));
    s = detail::splitmix64(s ^ a);
    s = detail::splitmix64(s ^ b);
    s = detail::splitmix64(s ^ c);
    return std::mt19937_64(s);
}

} // namespace thzgbsm

#endif
