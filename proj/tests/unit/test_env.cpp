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

#include "oracles.hpp"

#include "starsim/env.hpp"
#include "starsim/errors.hpp"
#include "starsim/rng.hpp"

#include <catch_amalgamated.hpp>

#include <sstream>

using namespace starsim;

namespace
{
Environment empty_env(GridSpec g = {})
{
    return Environment(g, RMat::Zero(g.nx, g.ny), {7, 13, 7}, {{11, 8, 1}});
}

Point3 random_point(Rng &rng, const GridSpec &g)
{
    return {rng.uniform(0, (g.nx - 1) * g.cell), rng.uniform(0, (g.ny - 1) * g.cell),
            rng.uniform(0, (g.nz - 1) * g.cell)};
}
} // namespace

TEST_CASE("heightmap parsing", "[env]")
{
    SECTION("20x20 matrix with values up to 20 m")
    {
        std::ostringstream os;
        for (int i = 0; i < 20; ++i)
        {
            for (int j = 0; j < 20; ++j)
                os << (i + j) % 21 << ' ';
            os << "\n";
        }
        std::istringstream in(os.str());
        const RMat h = load_heightmap(in);
        CHECK(h.rows() == 20);
        CHECK(h.cols() == 20);
        CHECK(h(3, 4) == 7.0);
        const Environment env(GridSpec{}, h, {0, 0, 19}, {});
        CHECK(env.grid().nx == 20);
    }
    SECTION("comments and blank lines are skipped")
    {
        std::istringstream in("# header\n1 2\n\n3 4 # trailing\n");
        const RMat h = load_heightmap(in);
        CHECK(h.rows() == 2);
        CHECK(h(1, 1) == 4.0);
    }
    SECTION("ragged rows")
    {
        std::istringstream in("1 2 3\n4 5\n");
        CHECK_THROWS_AS(load_heightmap(in), FormatError);
    }
    SECTION("negative height")
    {
        std::istringstream in("1 -2\n3 4\n");
        CHECK_THROWS_AS(load_heightmap(in), DomainError);
    }
    SECTION("non-numeric token")
    {
        std::istringstream in("1 x\n3 4\n");
        CHECK_THROWS_AS(load_heightmap(in), FormatError);
    }
    SECTION("save and load round trip")
    {
        Rng rng(3);
        RMat h(5, 4);
        for (Eigen::Index i = 0; i < h.size(); ++i)
            h.data()[i] = rng.uniform(0, 20);
        std::stringstream ss;
        save_heightmap(ss, h);
        CHECK(load_heightmap(ss) == h);
    }
}

TEST_CASE("environment validation", "[env]")
{
    GridSpec g;
    RMat h = RMat::Zero(20, 20);
    h(7, 13) = 10.0;
    CHECK_THROWS_AS(Environment(g, h, {7, 13, 7}, {}), DomainError);
    CHECK_THROWS_AS(Environment(g, RMat::Zero(20, 19), {7, 13, 7}, {}), DomainError);
    CHECK_THROWS_AS(Environment(g, RMat::Zero(20, 20), {7, 13, 25}, {}), DomainError);
    GridSpec bad = g;
    bad.z_min = 5;
    bad.z_max = 4;
    CHECK_THROWS_AS(Environment(bad, RMat::Zero(20, 20), {7, 13, 7}, {}), DomainError);
}

TEST_CASE("LOS basics", "[env]")
{
    const Environment env = empty_env();
    CHECK(env.los({3, 3, 3}, {3, 3, 3}));
    CHECK(env.los({0, 0, 0}, {19, 19, 19}));
    CHECK(env.los({0, 0, 0}, {19, 19, 0}));
    CHECK_THROWS_AS(env.los({0, 0, 0}, {20, 0, 0}), DomainError);
}

TEST_CASE("LOS through a full-height column matches dense sampling", "[env]")
{
    GridSpec g;
    RMat h = RMat::Zero(20, 20);
    h(10, 10) = 19.0;
    const Environment env(g, h, {2, 10, 5}, {});
    const Point3 a{2, 10, 5}, b{18, 10, 5};
    CHECK_FALSE(env.los(a, b));
    CHECK(oracle::dense_blocked(h, g.cell, a, b));
    // Passing well clear of the column.
    CHECK(env.los(Point3{2, 2, 5}, Point3{18, 2, 5}));
    CHECK_FALSE(oracle::dense_blocked(h, g.cell, {2, 2, 5}, {18, 2, 5}));
    // Over the top.
    CHECK(env.los(Point3{2, 10, 19}, Point3{18, 10, 19}));
}

TEST_CASE("LOS grazing a vertical face counts as blocked", "[env]")
{
    GridSpec g;
    RMat h = RMat::Zero(20, 20);
    h(10, 10) = 5.0;
    const Environment env(g, h, {0, 0, 10}, {});
    // Runs along the face y = 10.5 of column (10, 10) below its top.
    CHECK_FALSE(env.los(Point3{5, 10.5, 2}, Point3{15, 10.5, 2}));
    CHECK(env.los(Point3{5, 10.6, 2}, Point3{15, 10.6, 2}));
}

TEST_CASE("LOS soundness, symmetry and monotonicity on random scenes", "[env]")
{
    GridSpec g;
    Rng rng(2024);
    for (int scene = 0; scene < 6; ++scene)
    {
        const RMat h = random_urban_heights(g, {{7, 13, 7}}, 40, 12, derive_seed(99, {std::uint64_t(scene)}));
        const Environment env(g, h, {7, 13, 7}, {});
        for (int t = 0; t < 60; ++t)
        {
            const Point3 a = random_point(rng, g), b = random_point(rng, g);
            const bool clear = env.los(a, b);
            CHECK(clear == env.los(b, a));
            if (oracle::dense_blocked(h, g.cell, a, b))
                CHECK_FALSE(clear);
            if (clear)
            {
                RMat lower = h;
                lower(rng.uniform_int(0, 19), rng.uniform_int(0, 19)) *= 0.5;
                CHECK(env.with_heights(lower).los(a, b));
            }
        }
    }
}

TEST_CASE("feasible vertices", "[env]")
{
    SECTION("z_min = z_max = 3, no obstacles: one layer of 400 vertices")
    {
        GridSpec g;
        g.z_min = g.z_max = 3;
        const auto v = empty_env(g).feasible_vertices();
        CHECK(v.size() == 400);
        for (const auto &p : v)
            CHECK(p.z == 3.0);
    }
    SECTION("full-height column is excluded")
    {
        GridSpec g;
        RMat h = RMat::Zero(20, 20);
        h(4, 5) = 20.0;
        const Environment env(g, h, {7, 13, 7}, {});
        for (const auto &p : env.feasible_vertices())
            CHECK_FALSE((p.x == 4.0 && p.y == 5.0));
        CHECK(env.feasible_vertices().size() == 399 * 15);
    }
    SECTION("full-size random scene has candidates")
    {
        GridSpec g;
        const RMat h = random_urban_heights(g, {{7, 13, 7}}, 40, 12, 5);
        const Environment env(g, h, {7, 13, 7}, {});
        std::size_t expected = 0;
        for (int i = 0; i < 20; ++i)
            for (int j = 0; j < 20; ++j)
                for (int k = 1; k <= 15; ++k)
                    expected += k > h(i, j);
        CHECK(env.feasible_vertices().size() == expected);
        CHECK(expected > 0);
    }
}

TEST_CASE("snapping", "[env]")
{
    const Environment env = empty_env();
    const Snap s = env.snap({12.5, 8.0, 1.06});
    CHECK(s.index == GridIndex{12, 8, 1});
    CHECK(s.vertex == Point3{12, 8, 1});
    CHECK(s.distance == Catch::Approx(std::sqrt(0.25 + 0.0036)));
}

TEST_CASE("random urban heights keep reserved columns clear", "[env]")
{
    GridSpec g;
    const std::vector<Point3> keep{{7, 13, 7}, {11, 8, 1}, {13, 9, 0.94}};
    const RMat h1 = random_urban_heights(g, keep, 60, 12, 11);
    const RMat h2 = random_urban_heights(g, keep, 60, 12, 11);
    CHECK(h1 == h2);
    CHECK(h1(7, 13) == 0.0);
    CHECK(h1(11, 8) == 0.0);
    CHECK(h1(13, 9) == 0.0);
    CHECK(h1.maxCoeff() <= 12.0);
    CHECK(h1.minCoeff() >= 0.0);
}
