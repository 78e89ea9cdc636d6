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

#ifndef THZGBSM_BAND_HPP
#define THZGBSM_BAND_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace thzgbsm {

/// Partition of the whole band into contiguous sub-bands of equal width;
/// the channel is treated as frequency-stationary inside one sub-band.
struct SubBandPlan {
    double start_freq = 0.0;    // Hz
    double stop_freq = 0.0;     // Hz
    double subband_width = 0.0; // Hz
    int count = 0;              // N_F = ceil((stop-start)/width)
    std::vector<double> centers;

    static SubBandPlan make(double start, double stop, double width)
    {
        if (stop <= start)
            throw std::invalid_argument("band: stop must exceed start");
        if (width <= 0.0)
            throw std::invalid_argument("band: sub-band width must be > 0");
        SubBandPlan plan;
        plan.start_freq = start;
        plan.stop_freq = stop;
        plan.subband_width = width;
        plan.count = static_cast<int>(std::ceil((stop - start) / width - 1e-9));
        plan.centers.reserve(static_cast<std::size_t>(plan.count));
        for (int i = 0; i < plan.count; ++i)
            plan.centers.push_back(start + (static_cast<double>(i) + 0.5) * width);
        return plan;
    }

    double lower_edge(int i) const { return start_freq + i * subband_width; }
    double upper_edge(int i) const { return start_freq + (i + 1) * subband_width; }

    /// Index of the sub-band whose support contains `freq`.
    int owner(double freq) const
    {
        if (freq < start_freq - 1e-6 || freq > upper_edge(count - 1) + 1e-6)
            throw std::domain_error("band: frequency outside the plan");
        int i = static_cast<int>(std::floor((freq - start_freq) / subband_width));
        if (i < 0)
            i = 0;
        if (i >= count)
            i = count - 1;
        return i;
    }
};

} // namespace thzgbsm

#endif
