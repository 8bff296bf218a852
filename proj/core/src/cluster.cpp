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

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace starsim
{

namespace
{
double sq(const Point3 &a, const Point3 &b)
{
    const Point3 d = a - b;
    return d.dot(d);
}

int nearest(const Point3 &p, const std::vector<Point3> &centers)
{
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < centers.size(); ++c)
    {
        const double d = sq(p, centers[c]);
        if (d < bd)
        {
            bd = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}
} // namespace

Clustering kmeans(const std::vector<Point3> &users, int k, std::uint64_t seed, int max_iter)
{
    const int n = static_cast<int>(users.size());
    if (k < 1)
        throw DomainError("k must be at least 1");
    if (k > n)
        throw DomainError("k = " + std::to_string(k) + " exceeds the number of users (" + std::to_string(n) + ")");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return users[a] < users[b]; });
    std::vector<Point3> pts(n);
    for (int i = 0; i < n; ++i)
        pts[i] = users[order[i]];

    // k-means++ seeding.
    Rng rng(seed);
    std::vector<Point3> centers{pts[rng.uniform_int(0, n - 1)]};
    std::vector<double> d2(n);
    while (static_cast<int>(centers.size()) < k)
    {
        double total = 0.0;
        for (int i = 0; i < n; ++i)
        {
            d2[i] = sq(pts[i], centers[nearest(pts[i], centers)]);
            total += d2[i];
        }
        int pick = 0;
        if (total > 0.0)
        {
            const double u = rng.uniform(0.0, total);
            double acc = 0.0;
            pick = n - 1;
            for (int i = 0; i < n; ++i)
            {
                acc += d2[i];
                if (u < acc && d2[i] > 0.0)
                {
                    pick = i;
                    break;
                }
            }
        }
        else
            pick = rng.uniform_int(0, n - 1);
        centers.push_back(pts[pick]);
    }

    Clustering out;
    std::vector<int> assign(n, -1);
    for (int it = 0; it < max_iter; ++it)
    {
        bool changed = false;
        for (int i = 0; i < n; ++i)
        {
            const int c = nearest(pts[i], centers);
            if (c != assign[i])
            {
                assign[i] = c;
                changed = true;
            }
        }
        if (!changed && it > 0)
            break;
        std::vector<Point3> sum(k);
        std::vector<int> count(k, 0);
        for (int i = 0; i < n; ++i)
        {
            sum[assign[i]] = sum[assign[i]] + pts[i];
            ++count[assign[i]];
        }
        for (int c = 0; c < k; ++c)
        {
            if (count[c] > 0)
            {
                centers[c] = sum[c] * (1.0 / count[c]);
                continue;
            }
            // Empty cluster: move it to the point farthest from its current center.
            int far = 0;
            double fd = -1.0;
            for (int i = 0; i < n; ++i)
            {
                const double d = sq(pts[i], centers[assign[i]]);
                if (d > fd)
                {
                    fd = d;
                    far = i;
                }
            }
            centers[c] = pts[far];
            assign[far] = c;
        }
        double inertia = 0.0;
        for (int i = 0; i < n; ++i)
            inertia += sq(pts[i], centers[assign[i]]);
        out.inertia_trace.push_back(inertia);
        out.iterations = it + 1;
    }

    out.centroids = centers;
    out.assignments.assign(n, 0);
    out.inertia = 0.0;
    for (int i = 0; i < n; ++i)
    {
        out.assignments[order[i]] = assign[i];
        out.inertia += sq(pts[i], centers[assign[i]]);
    }
    return out;
}

int largest_cluster(const Clustering &c)
{
    std::vector<int> count(c.centroids.size(), 0);
    for (int a : c.assignments)
        ++count[a];
    return static_cast<int>(std::max_element(count.begin(), count.end()) - count.begin());
}

} // namespace starsim
