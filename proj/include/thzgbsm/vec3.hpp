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

#ifndef THZGBSM_VEC3_HPP
#define THZGBSM_VEC3_HPP

#include <cmath>

namespace thzgbsm {

// Plain 3D vector in meters (or dimensionless for unit directions).
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& v) const { return {x + v.x, y + v.y, z + v.z}; }
    Vec3 operator-(const Vec3& v) const { return {x - v.x, y - v.y, z - v.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }

    double dot(const Vec3& v) const { return x * v.x + y * v.y + z * v.z; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Unit direction column vector for elevation/azimuth angles in radians.
// Elevation is measured from the horizontal plane, azimuth from the x axis.
inline Vec3 unit_direction(double elevation, double azimuth)
{
    const double ce = std::cos(elevation);
    return {ce * std::cos(azimuth), ce * std::sin(azimuth), std::sin(elevation)};
}

// Spherical angles of a (nonzero) vector: elevation = asin(z/r), azimuth = atan2(y, x).
struct SphericalAngles {
    double elevation;
    double azimuth;
};

inline SphericalAngles spherical_angles(const Vec3& v)
{
    const double r = v.norm();
    return {std::asin(v.z / r), std::atan2(v.y, v.x)};
}

} // namespace thzgbsm

#endif
