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

#include "starsim/env.hpp"

#include "starsim/errors.hpp"
#include "starsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace starsim
{

namespace
{
constexpr double kBoxTol = 1e-9;
constexpr double kParamTol = 1e-12;

std::string fmt_point(const Point3 &p)
{
    std::ostringstream os;
    os << p;
    return os.str();
}

// Index range [lo, hi] of columns whose closed footprint may contain coordinate values in
// [vmin, vmax]. Over-approximates by one column on each side; callers clip exactly.
void column_range(double vmin, double vmax, double cell, int n, int &lo, int &hi)
{
    lo = std::max(0, static_cast<int>(std::floor(vmin / cell + 0.5)) - 1);
    hi = std::min(n - 1, static_cast<int>(std::floor(vmax / cell + 0.5)) + 1);
}

// Parameter interval of a + t*d lying inside the closed slab [lo, hi], intersected with
// [t0, t1]. Returns false when empty.
bool clip_slab(double a, double d, double lo, double hi, double &t0, double &t1)
{
    if (d == 0.0)
        return a >= lo && a <= hi;
    double ta = (lo - a) / d;
    double tb = (hi - a) / d;
    if (ta > tb)
        std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    return t0 <= t1 + kParamTol;
}
} // namespace

Environment::Environment(GridSpec grid, RMat heights, Point3 bs, std::vector<Point3> users)
    : grid_(grid), heights_(std::move(heights)), bs_(bs), users_(std::move(users))
{
    if (grid_.nx < 2 || grid_.ny < 2 || grid_.nz < 2)
        throw DomainError("grid needs at least 2 vertices per axis");
    if (!(grid_.cell > 0.0) || !std::isfinite(grid_.cell))
        throw DomainError("cell size must be positive");
    if (!(grid_.z_min <= grid_.z_max))
        throw DomainError("z_min must not exceed z_max");
    if (heights_.rows() != grid_.nx || heights_.cols() != grid_.ny)
        throw DomainError("heightmap is " + std::to_string(heights_.rows()) + "x" + std::to_string(heights_.cols()) +
                          ", grid expects " + std::to_string(grid_.nx) + "x" + std::to_string(grid_.ny));
    for (Eigen::Index i = 0; i < heights_.size(); ++i)
        if (!std::isfinite(heights_.data()[i]) || heights_.data()[i] < 0.0)
            throw DomainError("heights must be finite and non-negative");

    auto check = [&](const Point3 &p, const std::string &what) {
        if (!p.finite())
            throw DomainError(what + " has non-finite coordinates");
        if (!in_box(p))
            throw DomainError(what + " " + fmt_point(p) + " lies outside the grid box");
        if (inside_obstacle(p))
            throw DomainError(what + " " + fmt_point(p) + " lies inside an obstacle");
    };
    check(bs_, "BS");
    for (size_t u = 0; u < users_.size(); ++u)
        check(users_[u], "user " + std::to_string(u));
}

bool Environment::in_box(const Point3 &p) const
{
    const double c = grid_.cell;
    return p.x >= -kBoxTol && p.y >= -kBoxTol && p.z >= -kBoxTol && p.x <= (grid_.nx - 1) * c + kBoxTol &&
           p.y <= (grid_.ny - 1) * c + kBoxTol && p.z <= (grid_.nz - 1) * c + kBoxTol;
}

bool Environment::inside_obstacle(const Point3 &p) const
{
    const double c = grid_.cell;
    int i0, i1, j0, j1;
    column_range(p.x, p.x, c, grid_.nx, i0, i1);
    column_range(p.y, p.y, c, grid_.ny, j0, j1);
    for (int i = i0; i <= i1; ++i)
    {
        if (p.x < (i - 0.5) * c || p.x > (i + 0.5) * c)
            continue;
        for (int j = j0; j <= j1; ++j)
        {
            if (p.y < (j - 0.5) * c || p.y > (j + 0.5) * c)
                continue;
            if (p.z < heights_(i, j))
                return true;
        }
    }
    return false;
}

Snap Environment::snap(const Point3 &p) const
{
    auto idx = [&](double v, int n) {
        const int k = static_cast<int>(std::nearbyint(v / grid_.cell));
        return std::clamp(k, 0, n - 1);
    };
    Snap s;
    s.index = {idx(p.x, grid_.nx), idx(p.y, grid_.ny), idx(p.z, grid_.nz)};
    s.vertex = vertex(s.index);
    s.distance = distance(p, s.vertex);
    return s;
}

bool Environment::los(const Segment &seg) const
{
    if (!in_box(seg.a) || !in_box(seg.b))
        throw DomainError("LOS endpoint outside the grid box");
    // Canonical endpoint order makes the floating-point path identical both ways.
    Point3 a = seg.a, b = seg.b;
    if (b < a)
        std::swap(a, b);
    if (a == b)
        return true;

    const double c = grid_.cell;
    const Point3 d = b - a;
    int i0, i1;
    column_range(std::min(a.x, b.x), std::max(a.x, b.x), c, grid_.nx, i0, i1);
    for (int i = i0; i <= i1; ++i)
    {
        double tx0 = 0.0, tx1 = 1.0;
        if (!clip_slab(a.x, d.x, (i - 0.5) * c, (i + 0.5) * c, tx0, tx1))
            continue;
        const double ya = a.y + tx0 * d.y;
        const double yb = a.y + tx1 * d.y;
        int j0, j1;
        column_range(std::min(ya, yb), std::max(ya, yb), c, grid_.ny, j0, j1);
        for (int j = j0; j <= j1; ++j)
        {
            const double h = heights_(i, j);
            if (h <= 0.0)
                continue;
            double t0 = tx0, t1 = tx1;
            if (!clip_slab(a.y, d.y, (j - 0.5) * c, (j + 0.5) * c, t0, t1))
                continue;
            t0 = std::clamp(t0, 0.0, 1.0);
            t1 = std::clamp(t1, 0.0, 1.0);
            const double zmin = std::min(a.z + t0 * d.z, a.z + t1 * d.z);
            if (zmin < h)
                return false;
        }
    }
    return true;
}

bool Environment::is_feasible(const GridIndex &g) const
{
    if (g.i < 0 || g.j < 0 || g.k < 0 || g.i >= grid_.nx || g.j >= grid_.ny || g.k >= grid_.nz)
        return false;
    const double z = g.k * grid_.cell;
    return z >= grid_.z_min && z <= grid_.z_max && z > heights_(g.i, g.j);
}

std::vector<GridIndex> Environment::feasible_indices() const
{
    std::vector<GridIndex> out;
    for (int i = 0; i < grid_.nx; ++i)
        for (int j = 0; j < grid_.ny; ++j)
            for (int k = 0; k < grid_.nz; ++k)
                if (is_feasible({i, j, k}))
                    out.push_back({i, j, k});
    return out;
}

std::vector<Point3> Environment::feasible_vertices() const
{
    std::vector<Point3> out;
    for (const auto &g : feasible_indices())
        out.push_back(vertex(g));
    return out;
}

Environment Environment::scaled(double s) const
{
    if (!(s > 0.0))
        throw DomainError("scale factor must be positive");
    GridSpec g = grid_;
    g.cell *= s;
    g.z_min *= s;
    g.z_max *= s;
    std::vector<Point3> users;
    for (const auto &u : users_)
        users.push_back(u * s);
    return Environment(g, heights_ * s, bs_ * s, std::move(users));
}

Environment Environment::with_heights(RMat heights) const
{
    return Environment(grid_, std::move(heights), bs_, users_);
}

RMat load_heightmap(std::istream &in)
{
    std::vector<std::vector<double>> rows;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::vector<double> row;
        std::string tok;
        while (ls >> tok)
        {
            size_t used = 0;
            double v = 0.0;
            try
            {
                v = std::stod(tok, &used);
            }
            catch (const std::exception &)
            {
                used = 0;
            }
            if (used != tok.size())
                throw FormatError("heightmap line " + std::to_string(lineno) + ": not a number: '" + tok + "'");
            if (!std::isfinite(v))
                throw DomainError("heightmap line " + std::to_string(lineno) + ": non-finite height");
            if (v < 0.0)
                throw DomainError("heightmap line " + std::to_string(lineno) + ": negative height " + tok);
            row.push_back(v);
        }
        if (row.empty())
            continue;
        if (!rows.empty() && row.size() != rows.front().size())
            throw FormatError("heightmap line " + std::to_string(lineno) + ": has " + std::to_string(row.size()) +
                              " entries, expected " + std::to_string(rows.front().size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw FormatError("heightmap is empty");
    RMat h(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < rows[r].size(); ++c)
            h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return h;
}

RMat load_heightmap_file(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw IoError("cannot open heightmap '" + path + "'");
    return load_heightmap(f);
}

void save_heightmap(std::ostream &out, const RMat &heights)
{
    out.precision(17);
    for (Eigen::Index r = 0; r < heights.rows(); ++r)
    {
        for (Eigen::Index c = 0; c < heights.cols(); ++c)
            out << (c ? " " : "") << heights(r, c);
        out << '\n';
    }
}

RMat random_urban_heights(const GridSpec &grid, const std::vector<Point3> &keep_clear, int n_blocks,
                          double max_height, std::uint64_t seed)
{
    Rng rng(seed);
    RMat h = RMat::Zero(grid.nx, grid.ny);

    // Columns whose closed footprint touches a keep-clear point.
    std::vector<std::pair<int, int>> reserved;
    for (const auto &p : keep_clear)
    {
        for (int i = 0; i < grid.nx; ++i)
            for (int j = 0; j < grid.ny; ++j)
                if (std::abs(p.x - i * grid.cell) <= 0.5 * grid.cell + kBoxTol &&
                    std::abs(p.y - j * grid.cell) <= 0.5 * grid.cell + kBoxTol)
                    reserved.emplace_back(i, j);
    }

    const int hmax = std::max(1, static_cast<int>(std::floor(max_height / grid.cell)));
    for (int b = 0; b < n_blocks; ++b)
    {
        const int w = rng.uniform_int(1, 3);
        const int l = rng.uniform_int(1, 3);
        const int i0 = rng.uniform_int(0, grid.nx - w);
        const int j0 = rng.uniform_int(0, grid.ny - l);
        const double height = rng.uniform_int(1, hmax) * grid.cell;
        bool clash = false;
        for (const auto &[ri, rj] : reserved)
            if (ri >= i0 && ri < i0 + w && rj >= j0 && rj < j0 + l)
                clash = true;
        if (clash)
            continue;
        for (int i = i0; i < i0 + w; ++i)
            for (int j = j0; j < j0 + l; ++j)
                h(i, j) = std::max(h(i, j), height);
    }
    return h;
}

} // namespace starsim
