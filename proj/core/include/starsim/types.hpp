// SPDX-License-Identifier: Apache-2.0
//
// starsim: link-level simulator for UAV-mounted STAR-RIS aided THz multi-user MIMO
// Copyright (C) 2026 The starsim Authors
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

#ifndef STARSIM_TYPES_HPP
#define STARSIM_TYPES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <ostream>
#include <tuple>

namespace starsim
{

using cdouble = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

// 3D position in meters.
struct Point3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Point3 operator+(const Point3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Point3 operator-(const Point3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Point3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr double dot(const Point3 &o) const { return x * o.x + y * o.y + z * o.z; }
    constexpr Point3 cross(const Point3 &o) const
    {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Point3 normalized() const
    {
        const double n = norm();
        return {x / n, y / n, z / n};
    }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

    friend constexpr bool operator==(const Point3 &a, const Point3 &b)
    {
        return a.x == b.x && a.y == b.y && a.z == b.z;
    }
    // Lexicographic on (x, y, z).
    friend constexpr bool operator<(const Point3 &a, const Point3 &b)
    {
        return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z);
    }
};

inline double distance(const Point3 &a, const Point3 &b) { return (a - b).norm(); }

inline std::ostream &operator<<(std::ostream &os, const Point3 &p)
{
    return os << '(' << p.x << ", " << p.y << ", " << p.z << ')';
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

} // namespace starsim

#endif
