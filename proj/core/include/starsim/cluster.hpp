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

#ifndef STARSIM_CLUSTER_HPP
#define STARSIM_CLUSTER_HPP

#include "starsim/types.hpp"

#include <cstdint>
#include <vector>

namespace starsim
{

struct Clustering
{
    std::vector<int> assignments; // user index -> cluster index
    std::vector<Point3> centroids;
    double inertia = 0.0;         // sum of squared distances, m^2
    int iterations = 0;
    std::vector<double> inertia_trace; // inertia after each Lloyd step
};

// Lloyd's algorithm with k-means++ seeding. Users are processed in lexicographic order so
// the result does not depend on input order.
Clustering kmeans(const std::vector<Point3> &users, int k, std::uint64_t seed, int max_iter = 100);

// Cluster holding the most users (ties: lowest index).
int largest_cluster(const Clustering &c);

} // namespace starsim

#endif
