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

#include "starsim/place.hpp"

#include "starsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

namespace starsim
{

namespace
{
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Endpoints
{
    GridIndex bs;
    GridIndex user;
    Point3 bs_p;
    Point3 user_p;
};

Endpoints snap_endpoints(const Environment &env, const Point3 &centroid)
{
    if (!centroid.finite() || !env.in_box(centroid))
        throw DomainError("centroid lies outside the grid box");
    Endpoints e;
    const Snap b = env.snap(env.bs());
    const Snap u = env.snap(centroid);
    e.bs = b.index;
    e.user = u.index;
    e.bs_p = b.vertex;
    e.user_p = u.vertex;
    if (e.bs == e.user)
        throw DomainError("BS and centroid snap to the same vertex");
    return e;
}

std::string fmt(const Point3 &p)
{
    std::ostringstream os;
    os << p;
    return os.str();
}

struct Candidate
{
    double f;
    Point3 p;
    bool operator<(const Candidate &o) const
    {
        return std::tie(f, p.x, p.y, p.z) < std::tie(o.f, o.p.x, o.p.y, o.p.z);
    }
};

// All feasible vertices other than the endpoints, sorted by (objective, x, y, z).
std::vector<Candidate> ranked_candidates(const Environment &env, const Endpoints &e, double bound)
{
    std::vector<Candidate> out;
    for (const auto &g : env.feasible_indices())
    {
        if (g == e.bs || g == e.user)
            continue;
        const Point3 p = env.vertex(g);
        const double f = placement_objective(e.bs_p, p, e.user_p);
        if (f <= bound)
            out.push_back({f, p});
    }
    std::sort(out.begin(), out.end());
    return out;
}

[[noreturn]] void throw_infeasible(const Environment &env, const Endpoints &e)
{
    std::vector<std::string> violated;
    bool any_feasible = false;
    for (const auto &g : env.feasible_indices())
        if (!(g == e.bs) && !(g == e.user))
            any_feasible = true;
    if (!any_feasible)
        violated = {"C2", "C9"};
    else
        violated = {"C4", "C5", "C6"};
    std::string msg = "no feasible STAR position:";
    if (!any_feasible)
        msg += " no grid vertex inside the altitude band lies above the obstacles";
    else
        msg += " no feasible vertex has LOS to both the BS and the centroid";
    throw InfeasibleError(msg + " (violates " + violated.front() + (violated.size() > 1 ? "..." : "") + ")",
                          violated);
}

void fill(PlacementResult &r, const Endpoints &e, const Point3 &star)
{
    r.star = star;
    r.d1 = distance(e.bs_p, star);
    r.d2 = distance(star, e.user_p);
    r.objective = placement_objective(e.bs_p, star, e.user_p);
}
} // namespace

double placement_objective(const Point3 &bs, const Point3 &star, const Point3 &centroid)
{
    return std::log(distance(bs, star)) + std::log(distance(star, centroid));
}

Placement brute_force_star(const Environment &env, const Point3 &centroid)
{
    const Endpoints e = snap_endpoints(env, centroid);
    Placement out;
    if (env.los(e.bs_p, e.user_p))
    {
        out.status = PlacementStatus::unnecessary;
        return out;
    }
    std::int64_t checks = 0;
    bool found = false;
    Candidate best{kInf, {}};
    for (const auto &g : env.feasible_indices())
    {
        if (g == e.bs || g == e.user)
            continue;
        const Point3 p = env.vertex(g);
        checks += 2;
        if (!env.los(e.bs_p, p) || !env.los(p, e.user_p))
            continue;
        const Candidate c{placement_objective(e.bs_p, p, e.user_p), p};
        if (!found || c < best)
        {
            best = c;
            found = true;
        }
    }
    if (!found)
        throw_infeasible(env, e);
    fill(out.result, e, best.p);
    out.result.path = {e.bs_p, best.p, e.user_p};
    out.result.los_checks = checks;
    out.result.raw_candidate = best.p;
    return out;
}

Placement find_star_position(const Environment &env, const Point3 &centroid)
{
    const Endpoints e = snap_endpoints(env, centroid);
    Placement out;
    if (env.los(e.bs_p, e.user_p))
    {
        out.status = PlacementStatus::unnecessary;
        return out;
    }

    const GridSpec &gs = env.grid();
    const int N = gs.nx * gs.ny * gs.nz;
    auto lin = [&](const GridIndex &g) { return (g.i * gs.ny + g.j) * gs.nz + g.k; };
    auto unlin = [&](int id) { return GridIndex{id / (gs.ny * gs.nz), (id / gs.nz) % gs.ny, id % gs.nz}; };
    const int start = lin(e.bs);
    const int goal = lin(e.user);

    std::vector<char> in_graph(N, 0);
    for (const auto &g : env.feasible_indices())
        in_graph[lin(g)] = 1;
    in_graph[start] = in_graph[goal] = 1;

    std::vector<double> c(N, kInf);
    std::vector<int> parent(N, -1);
    std::vector<char> closed(N, 0);
    std::set<std::pair<double, int>> open;
    std::int64_t checks = 0, expansions = 0;

    auto pt = [&](int id) { return env.vertex(unlin(id)); };
    auto ln_len = [&](int a, int b) { return std::log(distance(pt(a), pt(b))); };
    auto los = [&](int a, int b) {
        ++checks;
        return env.los(pt(a), pt(b));
    };

    c[start] = 0.0;
    parent[start] = start;
    open.insert({0.0, start});
    bool reached = false;
    std::vector<int> nbrs;
    while (!open.empty())
    {
        const int b = open.begin()->second;
        open.erase(open.begin());
        ++expansions;

        // Neighbors visible from b, evaluated once per expansion.
        nbrs.clear();
        const GridIndex gb = unlin(b);
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj)
                for (int dk = -1; dk <= 1; ++dk)
                {
                    if (!di && !dj && !dk)
                        continue;
                    const GridIndex gn{gb.i + di, gb.j + dj, gb.k + dk};
                    if (gn.i < 0 || gn.j < 0 || gn.k < 0 || gn.i >= gs.nx || gn.j >= gs.ny || gn.k >= gs.nz)
                        continue;
                    const int n = lin(gn);
                    if (in_graph[n] && los(b, n))
                        nbrs.push_back(n);
                }

        if (parent[b] != b && !los(parent[b], b))
        {
            double best = kInf;
            int bp = -1;
            for (int n : nbrs)
                if (closed[n])
                {
                    const double v = c[n] + ln_len(n, b);
                    if (v < best)
                    {
                        best = v;
                        bp = n;
                    }
                }
            parent[b] = bp;
            c[b] = best;
        }
        if (b == goal)
        {
            reached = true;
            break;
        }
        closed[b] = 1;
        const int pb = parent[b];
        for (int n : nbrs)
        {
            if (closed[n])
                continue;
            const bool was_open = c[n] < kInf;
            const double c_old = c[n];
            const double via = c[pb] + ln_len(pb, n);
            if (via < c[n])
            {
                parent[n] = pb;
                c[n] = via;
            }
            if (c[n] < c_old)
            {
                if (was_open)
                    open.erase({c_old, n});
                open.insert({c[n], n});
            }
        }
    }

    PlacementResult &r = out.result;
    r.expansions = expansions;
    r.los_checks = checks;

    double bound = kInf;
    if (reached && parent[goal] >= 0)
    {
        for (int v = goal;; v = parent[v])
        {
            r.path.push_back(pt(v));
            if (v == start || parent[v] < 0 || r.path.size() > static_cast<size_t>(N))
                break;
        }
        std::reverse(r.path.begin(), r.path.end());
        const int cand = parent[goal];
        r.raw_candidate = pt(cand);
        const GridIndex gc = unlin(cand);
        const bool valid = cand != start && env.is_feasible(gc) && env.los(e.bs_p, pt(cand)) &&
                           env.los(pt(cand), e.user_p);
        r.certify_checks += 2;
        if (valid)
            bound = placement_objective(e.bs_p, pt(cand), e.user_p);
    }

    // Certificate: the first valid vertex in objective order at or below the bound.
    for (const auto &cand : ranked_candidates(env, e, bound))
    {
        r.certify_checks += 2;
        if (env.los(e.bs_p, cand.p) && env.los(cand.p, e.user_p))
        {
            fill(r, e, cand.p);
            r.repaired = !(cand.p == r.raw_candidate) || !reached;
            return out;
        }
    }
    throw_infeasible(env, e);
}

Point3 deviated_star(const Environment &env, const Point3 &centroid, const Point3 &optimal, double fraction)
{
    const Endpoints e = snap_endpoints(env, centroid);
    const double target = fraction * distance(e.bs_p, e.user_p);
    const double f_opt = placement_objective(e.bs_p, optimal, e.user_p);
    bool found = false;
    std::tuple<double, double, double, double> best;
    Point3 pick;
    for (const auto &g : env.feasible_indices())
    {
        if (g == e.bs || g == e.user)
            continue;
        const Point3 p = env.vertex(g);
        if (p == optimal || placement_objective(e.bs_p, p, e.user_p) <= f_opt)
            continue;
        const auto key = std::make_tuple(std::abs(distance(p, optimal) - target), p.x, p.y, p.z);
        if (found && !(key < best))
            continue;
        if (!env.los(e.bs_p, p) || !env.los(p, e.user_p))
            continue;
        best = key;
        pick = p;
        found = true;
    }
    if (!found)
        throw InfeasibleError("no valid deviated STAR position near " + fmt(optimal), {"C4", "C5", "C6"});
    return pick;
}

} // namespace starsim
