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

#include "starsim/sim.hpp"

#include "starsim/errors.hpp"
#include "starsim/estimate.hpp"
#include "starsim/io.hpp"
#include "starsim/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace starsim
{

namespace
{
// Stream labels for derive_seed.
enum : std::uint64_t
{
    kTrial = 0x7472,
    kEnv = 0x656e,
    kGiField,
    kGiNoise,
    kCluster,
    kChannel,
    kTrain,
    kBals,
    kAnchor,
    kRandomPhase,
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Point3 focus_centroid(const Clustering &c) { return c.centroids[largest_cluster(c)]; }

struct Estimated
{
    std::vector<CVec> phases;
    std::vector<double> nmse_u, nmse_a, nmse_c;
};

Estimated estimate_phases(const ChannelSet &ch, double snr_db, std::uint64_t seed)
{
    Estimated out;
    const CMat W = analog_precoder(ch);
    const auto v = combiners(ch);
    const int R = ch.star.elements();
    const TrainingProtocol p = make_protocol(ch.LB(), R);
    for (int k = 0; k < ch.K(); ++k)
    {
        const SeparatedChannel truth = true_factors(ch, W, k);
        const auto slices = simulate_training(truth.U, truth.A, p, snr_db, derive_seed(seed, {kTrain, std::uint64_t(k)}));
        const FactorEstimates raw = bals_fit(slices, p, R, 500, 1e-8, derive_seed(seed, {kBals, std::uint64_t(k)}));
        const AnchorRow anchor = sense_anchor(truth.A, p, k, snr_db, derive_seed(seed, {kAnchor, std::uint64_t(k)}));
        const FactorEstimates est = eliminate_ambiguity(raw, anchor);
        out.nmse_u.push_back(nmse(est.U_hat, truth.U));
        out.nmse_a.push_back(nmse(est.A_hat, truth.A));
        out.nmse_c.push_back(nmse(cascaded(est.U_hat, est.A_hat), cascaded(truth.U, truth.A)));
        out.phases.push_back(star_phase(est.U_hat, v[k], arrival_steering(ch, k), ch.h_link(k, k).rx.gain));
    }
    return out;
}

std::vector<CVec> random_phases(const ChannelSet &ch, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<CVec> O;
    for (int s = 0; s < ch.LS(); ++s)
    {
        CVec q(ch.star.elements());
        for (Eigen::Index e = 0; e < q.size(); ++e)
            q(e) = rng.unit_phase();
        O.push_back(q);
    }
    return O;
}

std::vector<CVec> optimal_phases(const ChannelSet &ch)
{
    const CMat W = analog_precoder(ch);
    const auto v = combiners(ch);
    std::vector<CVec> O;
    for (int k = 0; k < ch.K(); ++k)
        O.push_back(star_phase(ch.H_block(k, k), v[k], incident_field(ch, W, k), ch.h_link(k, k).rx.gain));
    return O;
}

template <class F> auto stage(const char *name, F &&f) -> decltype(f())
{
    try
    {
        return f();
    }
    catch (const StageError &)
    {
        throw;
    }
    catch (const Error &e)
    {
        throw StageError(name, e);
    }
}
} // namespace

const char *scheme_name(Scheme s)
{
    switch (s)
    {
    case Scheme::optimal_perfect:
        return "optimal_perfect";
    case Scheme::optimal_estimated:
        return "optimal_estimated";
    case Scheme::deviated_perfect:
        return "deviated_perfect";
    case Scheme::random_phase:
        return "random_phase";
    }
    return "?";
}

Scheme parse_scheme(const std::string &name)
{
    for (Scheme s : {Scheme::optimal_perfect, Scheme::optimal_estimated, Scheme::deviated_perfect, Scheme::random_phase})
        if (name == scheme_name(s))
            return s;
    throw ConfigError("unknown scheme '" + name + "'");
}

std::uint64_t trial_seed(const Scenario &sc, int trial)
{
    return derive_seed(sc.master_seed, {kTrial, static_cast<std::uint64_t>(trial)});
}

Environment trial_environment(const Scenario &sc, std::uint64_t seed)
{
    const Clustering cl = kmeans(sc.users, sc.k_clusters, derive_seed(seed, {kCluster}));
    const Point3 centroid = focus_centroid(cl);
    if (sc.env_source == EnvSource::heightmap)
        return Environment(sc.grid, load_heightmap_file(sc.heightmap_file), sc.bs, sc.users);

    std::vector<Point3> keep = sc.users;
    keep.push_back(sc.bs);
    keep.push_back(centroid);
    for (int attempt = 0; attempt < sc.env_attempts; ++attempt)
    {
        RMat h = random_urban_heights(sc.grid, keep, sc.n_blocks, sc.max_height,
                                      derive_seed(seed, {kEnv, static_cast<std::uint64_t>(attempt)}));
        Environment env(sc.grid, std::move(h), sc.bs, sc.users);
        const Snap b = env.snap(env.bs()), c = env.snap(centroid);
        if (env.los(b.vertex, c.vertex))
            continue;
        try
        {
            brute_force_star(env, centroid);
        }
        catch (const InfeasibleError &)
        {
            continue;
        }
        return env;
    }
    throw InfeasibleError("no random environment with an obstructed BS-user path and a feasible STAR after " +
                              std::to_string(sc.env_attempts) + " attempts",
                          {"C7"});
}

RMat sense_heights(const Scenario &sc, const RMat &truth, std::uint64_t seed, double *rel_error)
{
    const GISettings &g = sc.gi;
    if (g.grid.I != truth.rows() || g.grid.J != truth.cols())
        throw ConfigError("GI pixel grid must match the heightmap dimensions");
    const double cx = g.grid.x0 + 0.5 * (g.grid.I - 1) * g.grid.pitch;
    const double cy = g.grid.y0 + 0.5 * (g.grid.J - 1) * g.grid.pitch;
    const auto emitters = g.emitters_per_side > 0
                              ? emitter_grid(g.emitters_per_side, g.aperture, cx, cy, g.standoff)
                              : emitter_spectral_layout(g.grid, g.standoff, kSpeedOfLight / g.carrier);
    FieldOptions fo;
    fo.carrier = g.carrier;
    const int n_meas = g.n_meas > 0 ? g.n_meas : 2 * g.grid.size();
    const IlluminationEnsemble ens =
        synthesize_field(emitters, g.grid, 0.0, n_meas, g.bandwidth, derive_seed(seed, {kGiField}), fo);
    Scene scene;
    scene.eps = CVec::Zero(g.grid.size());
    RVec hc(g.grid.size());
    for (int m = 0; m < g.grid.size(); ++m)
    {
        hc(m) = truth(m / g.grid.J, m % g.grid.J);
        scene.eps(m) = hc(m) > 0.0 ? 1.0 : 0.0;
    }
    scene.rho = receiver_attenuation(g.grid, 0.0, {cx, cy, g.standoff});
    const CVec y = measure(ens, scene, g.snr_db, derive_seed(seed, {kGiNoise}));
    double ridge = g.ridge;
    if (ridge == 0.0 && !(std::isinf(g.snr_db) && g.snr_db > 0))
        ridge = noise_variance(ens.E * scene.rho.cast<cdouble>().asDiagonal(), scene.eps, g.snr_db);
    const GIResult res = reconstruct(ens, y, scene.rho, ridge, scene.eps);
    if (rel_error)
        *rel_error = res.rel_error;
    const double peak = res.eps_hat.cwiseAbs().maxCoeff();
    if (!(peak > 0.0))
        return RMat::Zero(truth.rows(), truth.cols());
    return scene_to_environment(res, g.grid, g.threshold * peak, hc);
}

TrialSetup prepare_trial(const Scenario &sc, int trial)
{
    TrialSetup t;
    t.seed = trial_seed(sc, trial);
    t.clustering = stage("cluster", [&] { return kmeans(sc.users, sc.k_clusters, derive_seed(t.seed, {kCluster})); });
    t.centroid = focus_centroid(t.clustering);
    const Environment truth = stage("env", [&] { return trial_environment(sc, t.seed); });
    t.heights = truth.heights();
    t.sensed_heights = sc.env_source == EnvSource::gi
                           ? stage("sense", [&] { return sense_heights(sc, t.heights, t.seed); })
                           : t.heights;
    const Environment env = truth.with_heights(t.sensed_heights);
    t.placement = stage("place", [&] { return find_star_position(env, t.centroid); });
    t.bs_vertex = env.snap(env.bs()).vertex;
    t.centroid_vertex = env.snap(t.centroid).vertex;
    if (t.placement.status == PlacementStatus::unnecessary)
        throw StarUnnecessaryError("place: direct BS-user LOS exists, STAR unnecessary (C7 violated)");
    const PlacementResult &pr = t.placement.result;

    const std::uint64_t ch_seed = derive_seed(t.seed, {kChannel});
    t.optimal_channels = stage("channels", [&] { return synth_channels(env.bs(), pr.star, sc.users, sc.channel, ch_seed); });
    const bool want_dev = std::find(sc.schemes.begin(), sc.schemes.end(), Scheme::deviated_perfect) != sc.schemes.end();
    if (want_dev)
    {
        t.deviated = stage("place", [&] { return deviated_star(env, t.centroid, pr.star, sc.deviation); });
        t.deviated_objective = placement_objective(t.bs_vertex, t.deviated, t.centroid_vertex);
        ChannelConfig dev = sc.channel;
        dev.design_d1 = sc.channel.design_d1 > 0.0 ? sc.channel.design_d1 : pr.d1;
        t.deviated_channels =
            stage("channels", [&] { return synth_channels(env.bs(), t.deviated, sc.users, dev, ch_seed); });
    }
    const bool want_est =
        std::find(sc.schemes.begin(), sc.schemes.end(), Scheme::optimal_estimated) != sc.schemes.end();
    if (want_est)
    {
        const Estimated e = stage("estimate", [&] { return estimate_phases(t.optimal_channels, sc.training_snr_db, t.seed); });
        t.estimated_phases = e.phases;
        t.nmse_u = e.nmse_u;
        t.nmse_a = e.nmse_a;
    }
    return t;
}

SweepResult run_pipeline(const Scenario &sc, int trial)
{
    SweepResult out;
    const double sigma2 = dbm_to_watts(sc.noise_dbm);
    TrialSetup t;
    std::string failure;
    try
    {
        t = prepare_trial(sc, trial);
    }
    catch (const Error &e)
    {
        failure = e.what();
    }
    for (Scheme s : sc.schemes)
    {
        std::vector<CVec> phases;
        const ChannelSet *ch = &t.optimal_channels;
        std::string status = failure;
        if (failure.empty())
        {
            try
            {
                switch (s)
                {
                case Scheme::optimal_perfect:
                    phases = optimal_phases(*ch);
                    break;
                case Scheme::optimal_estimated:
                    phases = t.estimated_phases;
                    break;
                case Scheme::deviated_perfect:
                    ch = &t.deviated_channels;
                    phases = optimal_phases(*ch);
                    break;
                case Scheme::random_phase:
                    phases = random_phases(*ch, derive_seed(t.seed, {kRandomPhase}));
                    break;
                }
            }
            catch (const Error &e)
            {
                status = std::string("beams: ") + e.what();
            }
        }
        const double objective = !failure.empty() ? kNaN
                                 : s == Scheme::deviated_perfect ? t.deviated_objective
                                                                 : t.placement.result.objective;
        for (double pdbm : sc.powers_dbm)
        {
            SumRow row{s, pdbm, trial, kNaN, objective, status.empty() ? "ok" : status};
            if (status.empty())
            {
                try
                {
                    const double P = dbm_to_watts(pdbm);
                    const BeamformerSet b = design_beams(*ch, P, sigma2, phases);
                    const RateReport r = rate(*ch, b, P, sigma2, true);
                    row.sum_rate = r.sum;
                    for (int k = 0; k < static_cast<int>(r.per_user.size()); ++k)
                        out.rates.push_back({s, pdbm, trial, k, r.per_user[k], r.sir_db[k]});
                }
                catch (const Error &e)
                {
                    row.status = std::string("rate: ") + e.what();
                }
            }
            out.sums.push_back(row);
        }
    }
    return out;
}

SweepResult sweep(const Scenario &sc)
{
    if (sc.powers_dbm.empty() || sc.n_seeds < 1 || sc.schemes.empty())
        throw ConfigError("sweep needs at least one power, seed and scheme");
    std::vector<SweepResult> per(sc.n_seeds);
    const int workers = std::max(1, std::min(sc.workers, sc.n_seeds));
    if (workers == 1)
    {
        for (int i = 0; i < sc.n_seeds; ++i)
            per[i] = run_pipeline(sc, i);
    }
    else
    {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int i = next++; i < sc.n_seeds; i = next++)
                    per[i] = run_pipeline(sc, i);
            });
        for (auto &th : pool)
            th.join();
    }

    // Each trial lists rows by (scheme, power); interleave trials inside each group.
    SweepResult out;
    const size_t groups = sc.schemes.size() * sc.powers_dbm.size();
    for (size_t g = 0; g < groups; ++g)
        for (int i = 0; i < sc.n_seeds; ++i)
        {
            const SumRow &row = per[i].sums[g];
            out.sums.push_back(row);
            for (const RateRow &r : per[i].rates)
                if (r.scheme == row.scheme && r.power_dbm == row.power_dbm)
                    out.rates.push_back(r);
        }
    return out;
}

std::vector<NmseRow> nmse_sweep(const Scenario &sc, int user)
{
    Scenario base = sc;
    base.schemes = {Scheme::optimal_perfect};
    std::vector<NmseRow> rows;
    std::vector<ChannelSet> channels;
    for (int i = 0; i < sc.n_seeds; ++i)
        channels.push_back(prepare_trial(base, i).optimal_channels);
    for (double snr : sc.nmse_snrs_db)
        for (int i = 0; i < sc.n_seeds; ++i)
        {
            const ChannelSet &ch = channels[i];
            if (user < 0 || user >= ch.K())
                throw DomainError("nmse_sweep: user index out of range");
            const std::uint64_t seed = derive_seed(trial_seed(sc, i), {kTrain, static_cast<std::uint64_t>(snr * 1000)});
            const CMat W = analog_precoder(ch);
            const int R = ch.star.elements();
            const TrainingProtocol p = make_protocol(ch.LB(), R);
            const SeparatedChannel truth = true_factors(ch, W, user);
            const auto slices = simulate_training(truth.U, truth.A, p, snr, derive_seed(seed, {1}));
            const FactorEstimates raw = bals_fit(slices, p, R, 500, 1e-8, derive_seed(seed, {2}));
            const FactorEstimates est =
                eliminate_ambiguity(raw, sense_anchor(truth.A, p, user, snr, derive_seed(seed, {3})));
            rows.push_back({snr, "cascaded", nmse(cascaded(est.U_hat, est.A_hat), cascaded(truth.U, truth.A)), i});
            rows.push_back({snr, "U", nmse(est.U_hat, truth.U), i});
            rows.push_back({snr, "A", nmse(est.A_hat, truth.A), i});
        }
    return rows;
}

double median(std::vector<double> v)
{
    v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return std::isnan(x); }), v.end());
    if (v.empty())
        return kNaN;
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<SummaryRow> summarize(const SweepResult &r)
{
    std::vector<SummaryRow> out;
    std::vector<std::pair<Scheme, double>> keys;
    std::map<std::pair<int, double>, std::vector<double>> vals;
    for (const SumRow &s : r.sums)
    {
        const auto key = std::make_pair(static_cast<int>(s.scheme), s.power_dbm);
        if (!vals.count(key))
            keys.emplace_back(s.scheme, s.power_dbm);
        if (s.status == "ok")
            vals[key].push_back(s.sum_rate);
        else
            vals[key];
    }
    for (const auto &[scheme, power] : keys)
    {
        const auto &v = vals[{static_cast<int>(scheme), power}];
        double mean = kNaN;
        if (!v.empty())
        {
            mean = 0.0;
            for (double x : v)
                mean += x;
            mean /= static_cast<double>(v.size());
        }
        out.push_back({scheme, power, mean, median(v), static_cast<int>(v.size())});
    }
    return out;
}

std::string rates_csv(const SweepResult &r)
{
    CsvTable t({"power_dbm", "scheme", "user", "rate", "sir_db", "seed"});
    for (const RateRow &x : r.rates)
        t.add({fmt_double(x.power_dbm), scheme_name(x.scheme), std::to_string(x.user), fmt_double(x.rate),
               fmt_double(x.sir_db), std::to_string(x.seed)});
    return t.str();
}

std::string sums_csv(const SweepResult &r)
{
    CsvTable t({"scheme", "power_dbm", "seed", "sum_rate", "objective", "status"});
    for (const SumRow &x : r.sums)
    {
        std::string status = x.status;
        std::replace(status.begin(), status.end(), ',', ';');
        t.add({scheme_name(x.scheme), fmt_double(x.power_dbm), std::to_string(x.seed), fmt_double(x.sum_rate),
               fmt_double(x.objective), status});
    }
    return t.str();
}

std::string summary_csv(const std::vector<SummaryRow> &s)
{
    CsvTable t({"scheme", "power_dbm", "mean_sum_rate", "median_sum_rate", "n"});
    for (const SummaryRow &x : s)
        t.add({scheme_name(x.scheme), fmt_double(x.power_dbm), fmt_double(x.mean), fmt_double(x.median),
               std::to_string(x.n)});
    return t.str();
}

std::string nmse_csv(const std::vector<NmseRow> &rows)
{
    CsvTable t({"snr_db", "channel", "nmse", "seed"});
    for (const NmseRow &x : rows)
        t.add({fmt_double(x.snr_db), x.channel, fmt_double(x.nmse), std::to_string(x.seed)});
    return t.str();
}

std::string rate_plot(const std::vector<SummaryRow> &s, const std::string &title)
{
    std::vector<Series> series;
    for (const SummaryRow &x : s)
    {
        auto it = std::find_if(series.begin(), series.end(), [&](const Series &ser) { return ser.label == scheme_name(x.scheme); });
        if (it == series.end())
        {
            series.push_back({scheme_name(x.scheme), {}, {}});
            it = series.end() - 1;
        }
        it->x.push_back(x.power_dbm);
        it->y.push_back(x.mean);
    }
    return svg_line_plot(title, "transmit power (dBm)", "sum rate (bps/Hz)", series);
}

std::string nmse_plot(const std::vector<NmseRow> &rows, const std::string &title)
{
    std::vector<Series> series;
    for (const char *name : {"cascaded", "U", "A"})
    {
        Series ser{name, {}, {}};
        std::map<double, std::vector<double>> by_snr;
        for (const NmseRow &r : rows)
            if (r.channel == name)
                by_snr[r.snr_db].push_back(r.nmse);
        for (const auto &[snr, v] : by_snr)
        {
            ser.x.push_back(snr);
            ser.y.push_back(median(v));
        }
        series.push_back(ser);
    }
    return svg_line_plot(title, "training SNR (dB)", "median NMSE", series, true);
}

} // namespace starsim
