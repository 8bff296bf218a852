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

// Acceptance suite. `acceptance N` runs criterion N; without arguments all eight run.
// Each criterion prints one line: "acceptance N: PASS|FAIL <name> (<details>)".
#include "oracles.hpp"

#include "starsim/beam.hpp"
#include "starsim/errors.hpp"
#include "starsim/estimate.hpp"
#include "starsim/gi.hpp"
#include "starsim/place.hpp"
#include "starsim/rng.hpp"
#include "starsim/sim.hpp"
#include "starsim_cli/config.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>

using namespace starsim;

namespace
{
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome
{
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string &what)
    {
        if (!ok && pass)
            detail << "first failure: " << what << "; ";
        pass = pass && ok;
    }
};

bool strictly_decreasing(const std::vector<double> &v)
{
    for (size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1]))
            return false;
    return true;
}

std::string list(const std::vector<double> &v)
{
    std::ostringstream os;
    os.precision(3);
    for (size_t i = 0; i < v.size(); ++i)
        os << (i ? "," : "") << v[i];
    return os.str();
}

// 1. Lazy Theta* against exhaustive search on random obstructed scenes.
void placement_equivalence(Outcome &o)
{
    Scenario sc;
    sc.master_seed = 2024;
    int ties = 0;
    for (int t = 0; t < 50; ++t)
    {
        const std::uint64_t seed = trial_seed(sc, t);
        const Environment env = trial_environment(sc, seed);
        const Point3 centroid = kmeans(sc.users, 1, seed).centroids[0];
        const Placement a = find_star_position(env, centroid);
        const Placement b = brute_force_star(env, centroid);
        o.require(a.status == PlacementStatus::placed && b.status == PlacementStatus::placed,
                  "scene " + std::to_string(t) + " not placed");
        o.require(a.result.objective == b.result.objective, "objective differs in scene " + std::to_string(t));
        const oracle::BestVertex scan =
            oracle::scan_vertices(env, env.snap(env.bs()).vertex, env.snap(centroid).vertex);
        o.require(scan.found && scan.objective == b.result.objective,
                  "exhaustive objective differs from the independent scan in scene " + std::to_string(t));
        if (!(a.result.star == b.result.star))
        {
            ++ties;
            o.require(placement_objective(env.snap(env.bs()).vertex, a.result.star, env.snap(centroid).vertex) ==
                          b.result.objective,
                      "position differs without a tie in scene " + std::to_string(t));
        }
    }
    o.detail << "50 scenes, " << ties << " tied positions";
}

// 2. Scheme ordering on the reference scenario at three array sizes.
void reference_ordering(Outcome &o)
{
    for (int side : {4, 6, 8})
    {
        Scenario sc = cli::reference_scenario(side);
        sc.master_seed = 1;
        sc.n_seeds = 10;
        sc.schemes = {Scheme::optimal_perfect, Scheme::deviated_perfect, Scheme::random_phase};
        const SweepResult r = sweep(sc);
        std::map<std::pair<Scheme, double>, std::vector<double>> v;
        for (const SumRow &row : r.sums)
        {
            o.require(row.status == "ok", "trial failed: " + row.status);
            v[{row.scheme, row.power_dbm}].push_back(row.sum_rate);
        }
        auto mean = [&](Scheme s, double p) {
            double m = 0;
            for (double x : v[{s, p}])
                m += x;
            return m / static_cast<double>(v[{s, p}].size());
        };
        double gain_dev = 0, gain_rand = 0;
        for (double p : sc.powers_dbm)
        {
            const double a = mean(Scheme::optimal_perfect, p);
            const double c = mean(Scheme::deviated_perfect, p);
            const double d = mean(Scheme::random_phase, p);
            o.require(a > c && a > d, std::to_string(side) + "x" + std::to_string(side) + " ordering at " +
                                          std::to_string(p) + " dBm");
            gain_dev += (a - c) / c;
            gain_rand += (a - d) / d;
        }
        gain_dev *= 100.0 / static_cast<double>(sc.powers_dbm.size());
        gain_rand *= 100.0 / static_cast<double>(sc.powers_dbm.size());
        o.require(gain_dev > 0 && gain_rand > 0, "mean improvement not positive");
        o.detail.precision(3);
        o.detail << (side > 4 ? "; " : "") << side << "x" << side << " gain vs deviated " << gain_dev << "%, vs random " << gain_rand << "%";
    }
}

const Point3 kBs{7, 13, 7};
const Point3 kStar{9, 9, 3};
const std::vector<Point3> kUsers{{11, 8, 1}, {13, 9, 0.94}, {12, 8, 1.5}, {14, 7, 0.8}};

// 3. Closed-form STAR phases reach the coherent sum and beat random phases.
void passive_optimality(Outcome &o)
{
    ChannelConfig cfg;
    cfg.n_nl = 0;
    double worst_rel = 0, worst_margin = kInf;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const ChannelSet ch = synth_channels(kBs, kStar, kUsers, cfg, seed);
        const CMat W = analog_precoder(ch);
        const auto v = combiners(ch);
        Rng rng(derive_seed(seed, {3}));
        for (int k = 0; k < ch.K(); ++k)
        {
            const CMat H = ch.H_block(k, k);
            const CVec a = incident_field(ch, W, k, true);
            const CVec q = star_phase(H, v[k], a, ch.h_link(k, k).rx.gain);
            const double got = std::abs(cdouble(v[k].adjoint() * H * q.asDiagonal() * a));
            const double coherent = (H.transpose() * v[k].conjugate()).cwiseProduct(a).cwiseAbs().sum();
            worst_rel = std::max(worst_rel, std::abs(got - coherent) / coherent);
            for (int d = 0; d < 1000; ++d)
            {
                CVec r(q.size());
                for (Eigen::Index e = 0; e < r.size(); ++e)
                    r(e) = rng.unit_phase();
                const double rnd = std::abs(cdouble(v[k].adjoint() * H * r.asDiagonal() * a));
                worst_margin = std::min(worst_margin, got - rnd);
            }
        }
    }
    o.require(worst_rel <= 1e-9, "coherent sum mismatch");
    o.require(worst_margin > 0, "a random draw matched the optimum");
    o.detail << "40 links, worst relative gap " << worst_rel << ", 40000 random draws all lower";
}

// 4. BALS with anchor elimination.
void estimation(Outcome &o)
{
    const std::vector<double> snrs{0, 10, 20, 30};
    std::vector<std::vector<double>> eu(snrs.size()), ea(snrs.size());
    double worst_u = 0, worst_a = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const ChannelSet ch = synth_channels(kBs, kStar, kUsers, ChannelConfig{}, seed);
        const CMat W = analog_precoder(ch);
        const int user = static_cast<int>(seed % 4);
        const SeparatedChannel truth = true_factors(ch, W, user);
        const TrainingProtocol p = make_protocol(ch.LB(), ch.star.elements());
        const int R = ch.star.elements();
        auto run = [&](double snr, std::uint64_t s) {
            const auto Y = simulate_training(truth.U, truth.A, p, snr, derive_seed(s, {1}));
            const FactorEstimates raw = bals_fit(Y, p, R, 500, 1e-10, derive_seed(s, {2}));
            return eliminate_ambiguity(raw, sense_anchor(truth.A, p, 0, snr, derive_seed(s, {3})));
        };
        const FactorEstimates clean = run(kInf, seed);
        worst_u = std::max(worst_u, nmse(clean.U_hat, truth.U));
        worst_a = std::max(worst_a, nmse(clean.A_hat, truth.A));
        for (size_t i = 0; i < snrs.size(); ++i)
        {
            const FactorEstimates e = run(snrs[i], derive_seed(seed, {100 + i}));
            eu[i].push_back(nmse(e.U_hat, truth.U));
            ea[i].push_back(nmse(e.A_hat, truth.A));
        }
    }
    std::vector<double> mu, ma;
    for (size_t i = 0; i < snrs.size(); ++i)
    {
        mu.push_back(median(eu[i]));
        ma.push_back(median(ea[i]));
    }
    o.require(worst_u <= 1e-6 && worst_a <= 1e-6, "noiseless NMSE above 1e-6");
    o.require(strictly_decreasing(mu), "median NMSE(U) not decreasing");
    o.require(strictly_decreasing(ma), "median NMSE(A) not decreasing");
    o.detail << "noiseless U " << worst_u << " A " << worst_a << "; median U [" << list(mu) << "] A [" << list(ma)
             << "]";
}

// 5. Ghost imaging on a 20 x 20 pixel grid.
void ghost_imaging(Outcome &o)
{
    const PixelGrid grid{20, 20, 0.1, 0.0, 0.0};
    const double carrier = 2.6e9, standoff = 100.0;
    const double lambda = kSpeedOfLight / carrier;
    const auto emitters = emitter_spectral_layout(grid, standoff, lambda);
    FieldOptions fo;
    fo.carrier = carrier;
    const IlluminationEnsemble ens = synthesize_field(emitters, grid, 0.0, 2 * grid.size(), 100e6, 7, fo);

    Scene scene;
    scene.eps = CVec::Zero(grid.size());
    RMat h = random_urban_heights({20, 20, 20, 1.0, 1.0, 15.0}, {}, 40, 12.0, 11);
    for (int m = 0; m < grid.size(); ++m)
        scene.eps(m) = h(m / grid.J, m % grid.J) > 0 ? 1.0 : 0.0;
    const Point3 rx{0.95, 0.95, standoff};
    scene.rho = receiver_attenuation(grid, 0.0, rx);

    const GIResult clean = reconstruct(ens, measure(ens, scene, kInf, 0), scene.rho, 0.0, scene.eps);
    o.require(clean.rel_error <= 1e-6, "noiseless error above 1e-6");

    std::vector<double> med;
    for (double snr : {10.0, 20.0, 30.0})
    {
        std::vector<double> e;
        for (std::uint64_t s = 0; s < 20; ++s)
            e.push_back(reconstruct(ens, measure(ens, scene, snr, derive_seed(s, {static_cast<std::uint64_t>(snr)})),
                                    scene.rho, 0.0, scene.eps)
                            .rel_error);
        med.push_back(median(e));
    }
    o.require(strictly_decreasing(med), "median error not decreasing in SNR");

    double lo_x = kInf, hi_x = -kInf, lo_y = kInf, hi_y = -kInf;
    for (const auto &e : emitters)
    {
        lo_x = std::min(lo_x, e.x);
        hi_x = std::max(hi_x, e.x);
        lo_y = std::min(lo_y, e.y);
        hi_y = std::max(hi_y, e.y);
    }
    const double Y = std::max(hi_x - lo_x, hi_y - lo_y);
    const double hand_hi = standoff * lambda / Y;
    const double hand_lo = standoff * lambda / (2 * Y);
    o.require(std::abs(clean.resolution_bounds.first - hand_lo) <= 1e-12 &&
                  std::abs(clean.resolution_bounds.second - hand_hi) <= 1e-12,
              "resolution bounds differ from hand evaluation");
    const auto rb = resolution_bounds(2.0, 0.1, 10.0);
    o.require(std::abs(rb.first - 0.25) <= 1e-12 && std::abs(rb.second - 0.5) <= 1e-12, "resolution bounds (2, 0.1, 10)");
    o.detail << "noiseless " << clean.rel_error << "; median at 10/20/30 dB [" << list(med) << "]; bounds ("
             << clean.resolution_bounds.first << ", " << clean.resolution_bounds.second << ")";
}

// Users at direction cosines u_k in the STAR frame, on the far side from the BS.
struct Layout
{
    Point3 bs, star;
    std::vector<Point3> users;
};

Layout facing_layout(const Point3 &star, const Point3 &axis, double d1, const std::vector<double> &u,
                     const std::vector<double> &d2)
{
    const Frame f = facing(axis);
    Layout l{star + axis.normalized() * d1, star, {}};
    for (size_t k = 0; k < u.size(); ++k)
        l.users.push_back(star + (f.u * u[k] - f.n * std::sqrt(1 - u[k] * u[k])) * d2[k]);
    return l;
}

CMat subarray_columns(const ChannelSet &ch)
{
    return ch.G_los * analog_precoder(ch);
}

// 6. The lemma1_spacing subarray pitch decorrelates the columns of G.
void lemma1(Outcome &o)
{
    Rng rng(6);
    std::vector<double> at, half;
    for (int t = 0; t < 20; ++t)
    {
        const Point3 axis{rng.normal(), rng.normal(), 0.3 * rng.normal()};
        std::vector<double> u, d2;
        for (int k = 0; k < 4; ++k)
        {
            u.push_back(rng.uniform(-0.9, 0.9));
            d2.push_back(rng.uniform(3.0, 6.0));
        }
        const Layout l = facing_layout({10, 10, 10}, axis, 6.0, u, d2);
        ChannelConfig cfg;
        cfg.n_nl = 0;
        const ChannelSet ch = synth_channels(l.bs, l.star, l.users, cfg, static_cast<std::uint64_t>(t));
        const double s = lemma1_spacing(6.0, cfg.freq, 2, 2);
        o.require(std::abs(ch.bs.subarray_pitch - s) <= 1e-15 && std::abs(ch.star.subarray_pitch - s) <= 1e-15,
                  "resolved spacing differs from lemma1_spacing");
        at.push_back(column_coherence(subarray_columns(ch)));
        ChannelConfig h = cfg;
        h.bs.subarray_pitch = h.star.subarray_pitch = s / 2;
        half.push_back(column_coherence(subarray_columns(synth_channels(l.bs, l.star, l.users, h, t))));
    }
    const double m_at = median(at), m_half = median(half);
    o.require(m_at <= 0.05, "coherence above 0.05");
    o.require(m_half >= 5 * m_at, "halving the spacing raised coherence less than 5x");
    o.detail << "median coherence " << m_at << ", at half spacing " << m_half;
}

// 7. Four users at the Table III distances, angularly separated, MMSE precoding.
void interference(Outcome &o)
{
    const Layout l = facing_layout({10, 10, 10}, {1, 0, 0}, 6.0, {-0.75, -0.25, 0.25, 0.75}, {3.0, 4.5, 3.5, 5.8});
    for (size_t i = 0; i < l.users.size(); ++i)
        for (size_t j = i + 1; j < l.users.size(); ++j)
        {
            const Point3 a = (l.users[i] - l.star).normalized(), b = (l.users[j] - l.star).normalized();
            o.require(std::acos(a.dot(b)) >= 20 * kPi / 180, "users closer than 20 degrees");
        }
    ChannelConfig cfg;
    cfg.n_nl = 0;
    const double s2 = dbm_to_watts(-75), P = dbm_to_watts(30);
    double min_sir = kInf, worst_gap = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const ChannelSet ch = synth_channels(l.bs, l.star, l.users, cfg, seed);
        const BeamformerSet b = design_beams(ch, P, s2, PhaseMode::optimal);
        const RateReport full = rate(ch, b, P, s2, true);
        const RateReport no_intf = rate(ch, b, P, s2, false);
        for (int k = 0; k < ch.K(); ++k)
        {
            min_sir = std::min(min_sir, full.sir_db[k]);
            worst_gap = std::max(worst_gap, std::abs(full.per_user[k] - no_intf.per_user[k]) / no_intf.per_user[k]);
        }
    }
    o.require(min_sir >= 30.0, "SIR below 30 dB");
    o.require(worst_gap <= 0.02, "rates with and without interference differ by more than 2%");
    o.detail << "min SIR " << min_sir << " dB, worst rate gap " << 100 * worst_gap << "%";
}

// 8. Structural invariants and reproducibility.
void invariants(Outcome &o)
{
    Rng rng(8);
    double worst_norm = 0;
    for (int t = 0; t < 1000; ++t)
    {
        const int m = rng.uniform_int(1, 8), n = rng.uniform_int(1, 8);
        const CVec a = steering_upa(m, n, rng.uniform(0.2, 2.0) * 1e-3, 0.857e-3, rng.uniform(-kPi, kPi),
                                    rng.uniform(0, kPi));
        worst_norm = std::max(worst_norm, std::abs(a.norm() - 1));
    }
    o.require(worst_norm <= 1e-12, "steering norm");

    double worst_phase = 0, worst_f = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const ChannelSet ch = synth_channels(kBs, kStar, kUsers, ChannelConfig{}, seed);
        for (PhaseMode mode : {PhaseMode::optimal, PhaseMode::random})
        {
            const BeamformerSet b = design_beams(ch, dbm_to_watts(10), dbm_to_watts(-75), mode, seed);
            for (const auto &q : b.O)
                for (Eigen::Index e = 0; e < q.size(); ++e)
                    worst_phase = std::max(worst_phase, std::abs(std::abs(q(e)) - 1));
            for (Eigen::Index k = 0; k < b.F.cols(); ++k)
                worst_f = std::max(worst_f, std::abs((b.W * b.F.col(k)).norm() - 1));
        }
    }
    o.require(worst_phase <= 4 * std::numeric_limits<double>::epsilon(), "STAR phase modulus");
    o.require(worst_f <= 1e-12, "precoder column norm");

    Scenario sc;
    sc.master_seed = 8;
    int asym = 0;
    for (int t = 0; t < 5; ++t)
    {
        const Environment env = trial_environment(sc, trial_seed(sc, t));
        for (int i = 0; i < 400; ++i)
        {
            const Point3 a{rng.uniform(0, 19), rng.uniform(0, 19), rng.uniform(0, 19)};
            const Point3 b{rng.uniform(0, 19), rng.uniform(0, 19), rng.uniform(0, 19)};
            asym += env.los(a, b) != env.los(b, a);
        }
    }
    o.require(asym == 0, "LOS is not symmetric");

    sc.n_seeds = 2;
    sc.powers_dbm = {0, 20};
    const SweepResult r1 = sweep(sc);
    const SweepResult r2 = sweep(sc);
    sc.workers = 2;
    const SweepResult r3 = sweep(sc);
    o.require(sums_csv(r1) == sums_csv(r2) && rates_csv(r1) == rates_csv(r2), "repeated sweeps differ");
    o.require(sums_csv(r1) == sums_csv(r3) && rates_csv(r1) == rates_csv(r3), "sweep depends on worker count");
    o.detail << "steering " << worst_norm << ", phase " << worst_phase << ", ||W f_k|| " << worst_f
             << ", LOS asymmetries " << asym << ", sweeps byte-equal";
}

struct Criterion
{
    const char *name;
    double budget_s;
    std::function<void(Outcome &)> run;
};

const std::vector<Criterion> kCriteria{
    {"placement oracle equivalence", 30, placement_equivalence},
    {"reference-scenario scheme ordering", 120, reference_ordering},
    {"passive beamforming optimality", 5, passive_optimality},
    {"separated-channel estimation", 60, estimation},
    {"ghost-imaging reconstruction", 30, ghost_imaging},
    {"subarray spacing decorrelation", 5, lemma1},
    {"interference suppression", 10, interference},
    {"structural invariants", 10, invariants},
};
} // namespace

int main(int argc, char **argv)
{
    int only = 0;
    if (argc > 1)
    {
        only = std::atoi(argv[1]);
        if (only < 1 || only > static_cast<int>(kCriteria.size()))
        {
            std::cerr << "usage: acceptance [1-" << kCriteria.size() << "]\n";
            return 2;
        }
    }
    int failed = 0;
    for (int i = 1; i <= static_cast<int>(kCriteria.size()); ++i)
    {
        if (only && i != only)
            continue;
        const Criterion &c = kCriteria[i - 1];
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try
        {
            c.run(o);
        }
        catch (const std::exception &e)
        {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        o.require(secs <= c.budget_s, "runtime over budget");
        std::cout << "acceptance " << i << ": " << (o.pass ? "PASS" : "FAIL") << " " << c.name << " ("
                  << o.detail.str() << "; " << secs << " s of " << c.budget_s << " s)" << std::endl;
        failed += !o.pass;
    }
    return failed ? 1 : 0;
}
