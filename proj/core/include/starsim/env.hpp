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

#ifndef STARSIM_ENV_HPP
#define STARSIM_ENV_HPP

#include "starsim/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace starsim
{

// Grid geometry. Vertex (i, j, k) sits at (i*cell, j*cell, k*cell); the grid box spans
// [0, (n-1)*cell] along each axis.
struct GridSpec
{
    int nx = 20;
    int ny = 20;
    int nz = 20;
    double cell = 1.0;  // meters per grid step
    double z_min = 1.0; // UAV altitude bounds (meters)
    double z_max = 15.0;

    friend bool operator==(const GridSpec &, const GridSpec &) = default;
};

struct Segment
{
    Point3 a;
    Point3 b;
};

struct GridIndex
{
    int i = 0;
    int j = 0;
    int k = 0;
    friend constexpr bool operator==(const GridIndex &, const GridIndex &) = default;
};

struct Snap
{
    Point3 vertex;
    GridIndex index;
    double distance = 0.0; // meters moved by snapping
};

// Discretized 2.5-D scene. Each heightmap entry (i, j) is a prism of that height
// whose square footprint of side `cell` is centered on vertex column (i, j).
// Immutable after construction.
class Environment
{
  public:
    Environment(GridSpec grid, RMat heights, Point3 bs, std::vector<Point3> users);

    const GridSpec &grid() const { return grid_; }
    const RMat &heights() const { return heights_; }
    const Point3 &bs() const { return bs_; }
    const std::vector<Point3> &users() const { return users_; }

    double top() const { return (grid_.nz - 1) * grid_.cell; }
    Point3 vertex(int i, int j, int k) const
    {
        return {i * grid_.cell, j * grid_.cell, k * grid_.cell};
    }
    Point3 vertex(const GridIndex &g) const { return vertex(g.i, g.j, g.k); }

    bool in_box(const Point3 &p) const;
    // True if p lies in the closed footprint of some column and strictly below its top.
    bool inside_obstacle(const Point3 &p) const;
    // Nearest grid vertex; ties in a coordinate round to the even index.
    Snap snap(const Point3 &p) const;

    // Line of sight between two points inside the box. Conservative supercover test:
    // every column whose closed footprint the segment touches is checked, so grazing a
    // vertical face below its top counts as blocked. Symmetric in its endpoints.
    bool los(const Segment &s) const;
    bool los(const Point3 &a, const Point3 &b) const { return los(Segment{a, b}); }

    // Grid vertices inside the altitude band [z_min, z_max] and strictly above the local
    // obstacle height.
    std::vector<GridIndex> feasible_indices() const;
    std::vector<Point3> feasible_vertices() const;
    bool is_feasible(const GridIndex &g) const;

    // Same scene with all lengths multiplied by s > 0.
    Environment scaled(double s) const;
    Environment with_heights(RMat heights) const;

  private:
    GridSpec grid_;
    RMat heights_;
    Point3 bs_;
    std::vector<Point3> users_;
};

inline bool los(const Environment &env, const Segment &s) { return env.los(s); }
inline std::vector<Point3> feasible_vertices(const Environment &env) { return env.feasible_vertices(); }

// Reads a whitespace-separated, row-major height matrix (meters). Row r of the text is
// x-index r, column c is y-index c. Throws FormatError on ragged or non-numeric input and
// DomainError on negative or non-finite heights.
RMat load_heightmap(std::istream &in);
RMat load_heightmap_file(const std::string &path);
void save_heightmap(std::ostream &out, const RMat &heights);

// Random rectangular "buildings" on an nx x ny heightmap. Blocks never cover a column
// holding one of the keep-clear points, and have integer heights in [1, max_height].
RMat random_urban_heights(const GridSpec &grid, const std::vector<Point3> &keep_clear, int n_blocks,
                          double max_height, std::uint64_t seed);

} // namespace starsim

#endif
