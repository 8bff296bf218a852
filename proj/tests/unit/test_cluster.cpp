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

#include "starsim/cluster.hpp"
#include "starsim/errors.hpp"
#include "starsim/rng.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>

using namespace starsim;

namespace
{
double sse(const std::vector<Point3> &pts, const std::vector<int> &members)
{
    Point3 c;
    for (int i : members)
        c = c + pts[i];
    c = c * (1.0 / members.size());
    double s = 0.0;
    for (int i : members)
        s += (pts[i] - c).dot(pts[i] - c);
    return s;
}
} // namespace

TEST_CASE("single cluster centroid is the arithmetic mean", "[cluster]")
{
    const std::vector<Point3> users{{11, 8, 1}, {13, 9, 0.94}, {12, 8, 1.5}, {14, 7, 0.8}};
    const Clustering c = kmeans(users, 1, 7);
    REQUIRE(c.centroids.size() == 1);
    CHECK(c.centroids[0].x == Catch::Approx(12.5));
    CHECK(c.centroids[0].y == Catch::Approx(8.0));
    CHECK(c.centroids[0].z == Catch::Approx(1.06));
    double inertia = 0.0;
    for (const auto &u : users)
        inertia += (u - c.centroids[0]).dot(u - c.centroids[0]);
    CHECK(c.inertia == Catch::Approx(inertia));
}

TEST_CASE("identical users", "[cluster]")
{
    const std::vector<Point3> users(5, Point3{3, 4, 5});
    const Clustering c = kmeans(users, 1, 1);
    CHECK(c.centroids[0] == Point3{3, 4, 5});
    CHECK(c.inertia == 0.0);
    CHECK_NOTHROW(kmeans(users, 3, 1));
}

TEST_CASE("two separated pairs match the exhaustive 2-partition", "[cluster]")
{
    const std::vector<Point3> pts{{0, 0, 0}, {1, 0, 0}, {10, 10, 0}, {10, 11, 0}};
    const Clustering c = kmeans(pts, 2, 3);
    double best = 1e300;
    for (int mask = 1; mask < (1 << pts.size()) - 1; ++mask)
    {
        std::vector<int> a, b;
        for (int i = 0; i < static_cast<int>(pts.size()); ++i)
            (mask >> i & 1 ? a : b).push_back(i);
        best = std::min(best, sse(pts, a) + sse(pts, b));
    }
    CHECK(c.inertia == Catch::Approx(best));
    std::vector<Point3> cents = c.centroids;
    std::sort(cents.begin(), cents.end());
    CHECK(cents[0] == Point3{0.5, 0, 0});
    CHECK(cents[1] == Point3{10, 10.5, 0});
}

TEST_CASE("clustering invariants on random users", "[cluster]")
{
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial)
    {
        std::vector<Point3> users;
        for (int i = 0; i < 30; ++i)
            users.push_back({rng.uniform(0, 20), rng.uniform(0, 20), rng.uniform(0, 2)});
        const int k = 1 + trial % 4;
        const Clustering c = kmeans(users, k, 100 + trial);

        // Lloyd fixed point: every user sits with its nearest centroid.
        double inertia = 0.0;
        for (size_t u = 0; u < users.size(); ++u)
        {
            const double own = distance(users[u], c.centroids[c.assignments[u]]);
            for (const auto &cent : c.centroids)
                CHECK(own <= distance(users[u], cent) + 1e-12);
            inertia += own * own;
        }
        CHECK(c.inertia == Catch::Approx(inertia));
        for (size_t i = 1; i < c.inertia_trace.size(); ++i)
            CHECK(c.inertia_trace[i] <= c.inertia_trace[i - 1] + 1e-9);

        // Input order does not matter.
        std::vector<Point3> shuffled = users;
        std::shuffle(shuffled.begin(), shuffled.end(), rng.engine());
        std::vector<Point3> a = c.centroids, b = kmeans(shuffled, k, 100 + trial).centroids;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
    }
}

TEST_CASE("k out of range", "[cluster]")
{
    const std::vector<Point3> users{{0, 0, 0}, {1, 1, 1}};
    CHECK_THROWS_AS(kmeans(users, 3, 1), DomainError);
    CHECK_THROWS_AS(kmeans(users, 0, 1), DomainError);
}

TEST_CASE("largest cluster", "[cluster]")
{
    Clustering c;
    c.assignments = {1, 0, 1, 2, 0};
    c.centroids.resize(3);
    CHECK(largest_cluster(c) == 0);
    c.assignments = {1, 1, 0};
    CHECK(largest_cluster(c) == 1);
}
