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

#ifndef STARSIM_PLACE_HPP
#define STARSIM_PLACE_HPP

#include "starsim/env.hpp"

#include <cstdint>
#include <vector>

namespace starsim
{

struct PlacementResult
{
    Point3 star;
    double objective = 0.0; // ln d1 + ln d2
    double d1 = 0.0;        // BS to STAR, meters
    double d2 = 0.0;        // STAR to centroid, meters
    std::vector<Point3> path; // BS -> ... -> centroid as found by the search
    std::int64_t expansions = 0;
    std::int64_t los_checks = 0;   // during the search
    std::int64_t certify_checks = 0; // during the optimality certificate / repair
    Point3 raw_candidate;            // parent(user) straight from the search
    bool repaired = false;           // final vertex differs from raw_candidate
};

enum class PlacementStatus
{
    placed,
    unnecessary, // direct BS-centroid LOS exists
};

struct Placement
{
    PlacementStatus status = PlacementStatus::placed;
    PlacementResult result;
};

// Shared objective so the search and the oracle compare bit-identical values.
double placement_objective(const Point3 &bs, const Point3 &star, const Point3 &centroid);

// Lazy Theta* over feasible vertices with ln-length edge costs and h = 0. The search's
// parent(user) is certified against every vertex with a smaller or equal objective; if
// it is not optimal (or not a valid bend), the best valid vertex replaces it.
// BS and centroid are snapped to the nearest grid vertices.
Placement find_star_position(const Environment &env, const Point3 &centroid);

// Exhaustive scan of feasible vertices with LOS to both endpoints. Ties go to the
// lexicographically smallest (x, y, z).
Placement brute_force_star(const Environment &env, const Point3 &centroid);

// Valid bend vertex whose distance from `optimal` is closest to `fraction` times the
// BS-centroid distance. Ties go to the lexicographically smallest vertex.
Point3 deviated_star(const Environment &env, const Point3 &centroid, const Point3 &optimal, double fraction);

} // namespace starsim

#endif
