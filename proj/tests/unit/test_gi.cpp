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

#include "starsim/errors.hpp"
#include "starsim/gi.hpp"
#include "starsim/rng.hpp"

#include <catch_amalgamated.hpp>

#include <queue>

using namespace starsim;

namespace
{
constexpr double kLambda26 = kSpeedOfLight / 2.6e9;

PixelGrid small_grid() { return PixelGrid{8, 8, 0.1, 0.0, 0.0}; }

IlluminationEnsemble small_ensemble(std::uint64_t seed)
{
    const PixelGrid g = small_grid();
    return synthesize_field(emitter_spectral_layout(g, 100.0, kLambda26), g, 0.0, 2 * g.size(), 100e6, seed);
}

// Square target of side `s` pixels centered in the grid.
CVec square_target(const PixelGrid &g, int s)
{
    CVec eps = CVec::Zero(g.size());
    const int i0 = (g.I - s) / 2, j0 = (g.J - s) / 2;
    for (int i = i0; i < i0 + s; ++i)
        for (int j = j0; j < j0 + s; ++j)
            eps(i * g.J + j) = 1.0;
    return eps;
}
} // namespace

TEST_CASE("resolution bounds", "[gi]")
{
    const auto a = resolution_bounds(100.0 * 0.3, 0.3, 100.0);
    CHECK(a.first == Catch::Approx(0.5).epsilon(1e-15));
    CHECK(a.second == Catch::Approx(1.0).epsilon(1e-15));
    const auto b = resolution_bounds(100.0, kLambda26, 100.0);
    CHECK(b.first == Catch::Approx(0.0577).margin(5e-5));
    CHECK(b.second == Catch::Approx(0.1153).margin(5e-5));
    const auto c = resolution_bounds(200.0, kLambda26, 100.0);
    CHECK(c.first == Catch::Approx(b.first / 2).epsilon(1e-15));
    CHECK(c.second == Catch::Approx(b.second / 2).epsilon(1e-15));
    CHECK_THROWS_AS(resolution_bounds(0.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(resolution_bounds(1.0, -1.0, 1.0), DomainError);
}

TEST_CASE("field synthesis", "[gi]")
{
    const PixelGrid g = small_grid();
    SECTION("determinism")
    {
        CHECK(small_ensemble(5).E == small_ensemble(5).E);
        CHECK(small_ensemble(5).E != small_ensemble(6).E);
    }
    SECTION("single emitter equidistant from all pixels gives constant rows")
    {
        const PixelGrid ring{2, 1, 0.2, -0.1, 0.0};
        const auto ens = synthesize_field({{0.0, 0.0, 50.0}}, ring, 0.0, 30, 100e6, 1);
        for (Eigen::Index n = 0; n < ens.E.rows(); ++n)
            CHECK(std::abs(ens.E(n, 0) - ens.E(n, 1)) <= 1e-12 * std::abs(ens.E(n, 0)) + 1e-300);
    }
    SECTION("dispersed emitters decorrelate the rows")
    {
        const auto ens = small_ensemble(9);
        CHECK(ens.E.rows() == 2 * g.size());
        CHECK(max_row_correlation(ens.E) < 0.5);
    }
    SECTION("sampling interval must exceed the coherence time")
    {
        FieldOptions fo;
        fo.oversample = 1;
        CHECK_THROWS_AS(synthesize_field({{0, 0, 10}}, g, 0.0, 4, 100e6, 1, fo), ConfigError);
        CHECK_THROWS_AS(synthesize_field({}, g, 0.0, 4, 100e6, 1), ConfigError);
        CHECK_THROWS_AS(synthesize_field({{0, 0, 10}}, g, 0.0, 0, 100e6, 1), ConfigError);
    }
    SECTION("spectral layout spans the expected direction cosines")
    {
        const auto em = emitter_spectral_layout(g, 100.0, kLambda26);
        CHECK(em.size() == static_cast<size_t>(g.size()));
        for (const auto &e : em)
            CHECK(e.z == 100.0);
    }
}

TEST_CASE("measurement model", "[gi]")
{
    Rng rng(4);
    const CMat E = rng.complex_normal_mat(12, 6);
    Scene sc{CVec::Zero(6), RVec::Ones(6)};
    SECTION("zero scene: noiseless gives zero")
    {
        CHECK(measure(E, sc, std::numeric_limits<double>::infinity(), 1).norm() == 0.0);
        CHECK(measure(E, sc, 10.0, 1).norm() > 0.0);
    }
    SECTION("identity operator")
    {
        sc.eps = rng.complex_normal_vec(6);
        CHECK(measure(CMat::Identity(6, 6), sc, std::numeric_limits<double>::infinity(), 1) == sc.eps);
    }
    SECTION("single pixel selects a scaled column")
    {
        sc.eps(2) = cdouble(0.5, -1.0);
        sc.rho(2) = 0.25;
        const CVec y = measure(E, sc, std::numeric_limits<double>::infinity(), 1);
        CVec expect(12);
        for (int n = 0; n < 12; ++n)
            expect(n) = E(n, 2) * sc.eps(2) * sc.rho(2);
        CHECK((y - expect).norm() <= 1e-15 * expect.norm());
    }
    SECTION("linearity")
    {
        sc.eps = rng.complex_normal_vec(6);
        const CVec y1 = measure(E, sc, std::numeric_limits<double>::infinity(), 1);
        Scene s2 = sc;
        s2.eps *= cdouble(2.0, 3.0);
        const CVec y2 = measure(E, s2, std::numeric_limits<double>::infinity(), 1);
        CHECK((y2 - cdouble(2.0, 3.0) * y1).norm() <= 1e-13 * y2.norm());
    }
    SECTION("dimension mismatch")
    {
        Scene bad{CVec::Zero(5), RVec::Ones(5)};
        CHECK_THROWS_AS(measure(E, bad, 10.0, 1), DomainError);
    }
}

TEST_CASE("reconstruction", "[gi]")
{
    Rng rng(8);
    SECTION("identity, noiseless, ridge 0 is exact")
    {
        const CVec eps = rng.complex_normal_vec(5);
        const GIResult r = reconstruct(CMat::Identity(5, 5), eps, RVec::Ones(5), 0.0, eps);
        CHECK(r.rel_error <= 1e-15);
    }
    SECTION("random well-conditioned A with N_m = 2M")
    {
        const CMat E = rng.complex_normal_mat(80, 40);
        const CVec eps = rng.complex_normal_vec(40);
        const RVec rho = RVec::Constant(40, 0.3);
        const CVec y = E * (eps.cwiseProduct(rho.cast<cdouble>()));
        CHECK(reconstruct(E, y, rho, 0.0, eps).rel_error <= 1e-9);
    }
    SECTION("rank deficiency with ridge 0")
    {
        CMat E = rng.complex_normal_mat(10, 4);
        E.col(3) = E.col(1);
        const CVec y = rng.complex_normal_vec(10);
        CHECK_THROWS_AS(reconstruct(E, y, RVec::Ones(4), 0.0), SingularityError);
        CHECK_NOTHROW(reconstruct(E, y, RVec::Ones(4), 1e-3));
    }
    SECTION("negative ridge")
    {
        CHECK_THROWS_AS(reconstruct(CMat::Identity(2, 2), CVec::Zero(2), RVec::Ones(2), -1.0), DomainError);
    }
    SECTION("ensemble overload reports resolution bounds")
    {
        const auto ens = small_ensemble(2);
        const PixelGrid g = small_grid();
        const CVec eps = square_target(g, 4);
        const RVec rho = receiver_attenuation(g, 0.0, {0.35, 0.35, 100.0});
        const CVec y = measure(ens, Scene{eps, rho}, std::numeric_limits<double>::infinity(), 3);
        const GIResult r = reconstruct(ens, y, rho, 0.0, eps);
        CHECK(r.rel_error <= 1e-9);
        CHECK(r.resolution_bounds.first > 0.0);
        CHECK(r.resolution_bounds.first <= r.resolution_bounds.second);
    }
}

TEST_CASE("scene to environment", "[gi]")
{
    const PixelGrid g = small_grid();
    RVec hc = RVec::Constant(g.size(), 7.0);
    GIResult r;
    r.eps_hat = CVec::Constant(g.size(), 0.1);
    CHECK(scene_to_environment(r, g, 0.5, hc).isZero());
    CHECK_THROWS_AS(scene_to_environment(r, g, 0.0, hc), DomainError);

    SECTION("noiseless reconstruction of a known scene recovers the heightmap")
    {
        const auto ens = small_ensemble(12);
        RMat truth = RMat::Zero(g.I, g.J);
        truth(1, 2) = 4;
        truth(5, 5) = 9;
        truth(6, 1) = 2.5;
        CVec eps = CVec::Zero(g.size());
        for (int m = 0; m < g.size(); ++m)
        {
            hc(m) = truth(m / g.J, m % g.J);
            eps(m) = hc(m) > 0 ? 1.0 : 0.0;
        }
        const RVec rho = RVec::Ones(g.size());
        const CVec y = measure(ens, Scene{eps, rho}, std::numeric_limits<double>::infinity(), 1);
        const GIResult res = reconstruct(ens, y, rho, 0.0, eps);
        CHECK(scene_to_environment(res, g, 0.5, hc) == truth);
    }

    SECTION("thresholded square target is one connected block")
    {
        const PixelGrid big{20, 20, 0.1, 0.0, 0.0};
        const auto ens =
            synthesize_field(emitter_spectral_layout(big, 100.0, kLambda26), big, 0.0, 2 * big.size(), 100e6, 21);
        const CVec eps = square_target(big, 6);
        const RVec rho = receiver_attenuation(big, 0.0, {0.95, 0.95, 100.0});
        const CVec y = measure(ens, Scene{eps, rho}, 30.0, 22);
        const GIResult res = reconstruct(ens, y, rho, 0.0, eps);
        const double peak = res.eps_hat.cwiseAbs().maxCoeff();
        const RMat occ = scene_to_environment(res, big, 0.5 * peak, RVec::Ones(big.size()));
        // Flood fill from the first occupied pixel.
        int total = 0, first = -1;
        for (int m = 0; m < big.size(); ++m)
            if (occ(m / big.J, m % big.J) > 0)
            {
                ++total;
                if (first < 0)
                    first = m;
            }
        REQUIRE(first >= 0);
        std::vector<bool> seen(big.size(), false);
        std::queue<int> q;
        q.push(first);
        seen[first] = true;
        int reached = 0;
        while (!q.empty())
        {
            const int m = q.front();
            q.pop();
            ++reached;
            const int i = m / big.J, j = m % big.J;
            const int di[] = {1, -1, 0, 0}, dj[] = {0, 0, 1, -1};
            for (int d = 0; d < 4; ++d)
            {
                const int a = i + di[d], b = j + dj[d];
                if (a < 0 || b < 0 || a >= big.I || b >= big.J || seen[a * big.J + b] || occ(a, b) <= 0)
                    continue;
                seen[a * big.J + b] = true;
                q.push(a * big.J + b);
            }
        }
        CHECK(reached == total);
        CHECK(total == 36);
    }
}

TEST_CASE("downsampling heights", "[gi]")
{
    RMat fine = RMat::Zero(4, 4);
    fine(0, 1) = 3;
    fine(3, 3) = 5;
    const RMat c = downsample_heights(fine, 2, 2);
    CHECK(c(0, 0) == 3);
    CHECK(c(1, 1) == 5);
    CHECK(c(0, 1) == 0);
    CHECK_THROWS_AS(downsample_heights(fine, 3, 2), DomainError);
}
