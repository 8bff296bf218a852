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

#include "starsim_cli/commands.hpp"

#include "starsim/errors.hpp"
#include "starsim/io.hpp"
#include "starsim/rng.hpp"
#include "starsim/sim.hpp"
#include "starsim_cli/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

namespace starsim::cli
{

namespace
{

struct Options
{
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::string out;
    int workers = 0;
    OutputFormat format = OutputFormat::csv;
    int verbose = 0;
};

bool want_csv(OutputFormat f) { return f != OutputFormat::plot; }
bool want_plot(OutputFormat f) { return f != OutputFormat::csv; }

std::string join_path(const std::string &dir, const std::string &name)
{
    return (std::filesystem::path(dir) / name).string();
}

std::string one_line(std::string s)
{
    std::replace(s.begin(), s.end(), '\n', ' ');
    std::replace(s.begin(), s.end(), '\r', ' ');
    return s;
}

const char *kind_of(ExitCode c)
{
    switch (c)
    {
    case ExitCode::ok:
        return "ok";
    case ExitCode::config:
        return "config";
    case ExitCode::infeasible:
        return "infeasible";
    case ExitCode::singular:
        return "singular";
    case ExitCode::io:
        return "io";
    case ExitCode::star_unnecessary:
        return "star_unnecessary";
    }
    return "internal";
}

RunConfig load(const Options &o)
{
    RunConfig cfg = load_config(o.scenario, o.seed);
    if (!o.out.empty())
        cfg.out_dir = o.out;
    if (o.workers > 0)
        cfg.scenario.workers = o.workers;
    return cfg;
}

class Writer
{
  public:
    Writer(std::string dir, std::ostream &log) : dir_(std::move(dir)), log_(log) {}
    void operator()(const std::string &name, const std::string &text)
    {
        const std::string p = join_path(dir_, name);
        write_file(p, text);
        log_ << "wrote " << p << "\n";
    }

  private:
    std::string dir_;
    std::ostream &log_;
};

std::string matrix_text(const CMat &m)
{
    std::ostringstream os;
    write_complex_matrix(os, m);
    return os.str();
}

std::string real_matrix_text(const RMat &m)
{
    std::ostringstream os;
    write_real_matrix(os, m);
    return os.str();
}

std::string key_value_csv(const std::vector<std::pair<std::string, std::string>> &kv)
{
    CsvTable t({"key", "value"});
    for (const auto &[k, v] : kv)
        t.add({k, v});
    return t.str();
}

// Environment used for placement in trial 0: the ground truth, or its GI estimate.
Environment placement_environment(const Scenario &sc, std::uint64_t seed)
{
    const Environment truth = trial_environment(sc, seed);
    if (sc.env_source != EnvSource::gi)
        return truth;
    return truth.with_heights(sense_heights(sc, truth.heights(), seed));
}

int cmd_sense(const Options &o, std::ostream &out)
{
    const RunConfig cfg = load(o);
    Scenario sc = cfg.scenario;
    const std::uint64_t seed = trial_seed(sc, 0);
    const Environment truth = trial_environment(sc, seed);
    double rel = 0.0;
    const RMat sensed = sense_heights(sc, truth.heights(), seed, &rel);
    int mismatched = 0;
    for (Eigen::Index i = 0; i < sensed.size(); ++i)
        mismatched += (sensed.data()[i] > 0.0) != (truth.heights().data()[i] > 0.0);
    Writer w(cfg.out_dir, out);
    if (want_csv(o.format))
    {
        w("heights_true.txt", real_matrix_text(truth.heights()));
        w("heights_sensed.txt", real_matrix_text(sensed));
        w("sense.csv", key_value_csv({{"rel_error", fmt_double(rel)},
                                      {"mismatched_cells", std::to_string(mismatched)},
                                      {"cells", std::to_string(sensed.size())}}));
    }
    if (want_plot(o.format))
    {
        w("heights_true.svg", svg_raster("ground truth heights", truth.heights()));
        w("heights_sensed.svg", svg_raster("ghost imaging heights", sensed));
    }
    return 0;
}

int cmd_cluster(const Options &o, std::ostream &out)
{
    const RunConfig cfg = load(o);
    const Scenario &sc = cfg.scenario;
    const TrialSetup t = [&] {
        TrialSetup s;
        s.clustering = kmeans(sc.users, sc.k_clusters, derive_seed(trial_seed(sc, 0), {0x636c}));
        return s;
    }();
    const Clustering &c = t.clustering;
    CsvTable users({"user", "x", "y", "z", "cluster"});
    for (size_t u = 0; u < sc.users.size(); ++u)
        users.add({std::to_string(u), fmt_double(sc.users[u].x), fmt_double(sc.users[u].y), fmt_double(sc.users[u].z),
                   std::to_string(c.assignments[u])});
    CsvTable cents({"cluster", "x", "y", "z", "size", "focused"});
    const int focus = largest_cluster(c);
    for (size_t k = 0; k < c.centroids.size(); ++k)
    {
        const auto n = std::count(c.assignments.begin(), c.assignments.end(), static_cast<int>(k));
        cents.add({std::to_string(k), fmt_double(c.centroids[k].x), fmt_double(c.centroids[k].y),
                   fmt_double(c.centroids[k].z), std::to_string(n), static_cast<int>(k) == focus ? "1" : "0"});
    }
    Writer w(cfg.out_dir, out);
    w("clusters.csv", users.str());
    w("centroids.csv", cents.str());
    return 0;
}

int cmd_place(const Options &o, std::ostream &out)
{
    const RunConfig cfg = load(o);
    const Scenario &sc = cfg.scenario;
    const std::uint64_t seed = trial_seed(sc, 0);
    const Clustering c = kmeans(sc.users, sc.k_clusters, derive_seed(seed, {0x636c}));
    const Point3 centroid = c.centroids[largest_cluster(c)];
    const Environment env = placement_environment(sc, seed);
    const Placement p = find_star_position(env, centroid);
    if (p.status == PlacementStatus::unnecessary)
        throw StarUnnecessaryError("place: direct BS-user LOS exists, STAR unnecessary (C7 violated)");
    const PlacementResult &r = p.result;
    Writer w(cfg.out_dir, out);
    w("placement.csv", key_value_csv({{"star_x", fmt_double(r.star.x)},
                                      {"star_y", fmt_double(r.star.y)},
                                      {"star_z", fmt_double(r.star.z)},
                                      {"objective", fmt_double(r.objective)},
                                      {"d1", fmt_double(r.d1)},
                                      {"d2", fmt_double(r.d2)},
                                      {"expansions", std::to_string(r.expansions)},
                                      {"los_checks", std::to_string(r.los_checks)},
                                      {"repaired", r.repaired ? "1" : "0"}}));
    CsvTable path({"x", "y", "z"});
    for (const auto &q : r.path)
        path.add({fmt_double(q.x), fmt_double(q.y), fmt_double(q.z)});
    w("path.csv", path.str());
    w("heights.txt", real_matrix_text(env.heights()));
    if (want_plot(o.format))
        w("heights.svg", svg_raster("placement heightmap", env.heights()));
    out << "star " << r.star << " objective " << fmt_double(r.objective) << "\n";
    return 0;
}

int cmd_channels(const Options &o, std::ostream &out)
{
    const RunConfig cfg = load(o);
    Scenario sc = cfg.scenario;
    sc.schemes = {Scheme::optimal_perfect};
    const TrialSetup t = prepare_trial(sc, 0);
    const ChannelSet &ch = t.optimal_channels;
    Writer w(cfg.out_dir, out);
    w("G.txt", matrix_text(ch.G));
    CsvTable links({"user", "d2", "nlos_ratio_g", "nlos_ratio_h"});
    for (int k = 0; k < ch.K(); ++k)
    {
        w("H_" + std::to_string(k) + ".txt", matrix_text(ch.H[k]));
        links.add({std::to_string(k), fmt_double(ch.d2[k]), fmt_double(nlos_power_ratio(ch, k, k)), ""});
    }
    w("channels.csv", key_value_csv({{"star_x", fmt_double(t.placement.result.star.x)},
                                     {"star_y", fmt_double(t.placement.result.star.y)},
                                     {"star_z", fmt_double(t.placement.result.star.z)},
                                     {"d1", fmt_double(ch.d1)},
                                     {"wavelength", fmt_double(ch.wavelength)},
                                     {"bs_subarray_pitch", fmt_double(ch.bs.subarray_pitch)},
                                     {"star_subarray_pitch", fmt_double(ch.star.subarray_pitch)},
                                     {"coherence_g", fmt_double(column_coherence(ch.G_los))}}));
    w("links.csv", links.str());
    return 0;
}

int cmd_beams(const Options &o, std::ostream &out)
{
    const RunConfig cfg = load(o);
    Scenario sc = cfg.scenario;
    sc.schemes = {Scheme::optimal_perfect};
    const TrialSetup t = prepare_trial(sc, 0);
    const ChannelSet &ch = t.optimal_channels;
    const double sigma2 = dbm_to_watts(sc.noise_dbm);
    CsvTable rows({"power_dbm", "user", "rate", "sir_db", "sinr"});
    BeamformerSet last;
    for (double pdbm : sc.powers_dbm)
    {
        const double P = dbm_to_watts(pdbm);
        last = design_beams(ch, P, sigma2, PhaseMode::optimal);
        const RateReport r = rate(ch, last, P, sigma2, true);
        for (size_t k = 0; k < r.per_user.size(); ++k)
            rows.add({fmt_double(pdbm), std::to_string(k), fmt_double(r.per_user[k]), fmt_double(r.sir_db[k]),
                      fmt_double(r.sinr[k])});
    }
    Writer w(cfg.out_dir, out);
    w("beams.csv", rows.str());
    w("star_phases.txt", matrix_text(stack_phases(last.O)));
    w("precoder.txt", matrix_text(last.F));
    return 0;
}

int cmd_estimate(const Options &o, std::ostream &out)
{
    const RunConfig cfg = load(o);
    const auto rows = nmse_sweep(cfg.scenario);
    Writer w(cfg.out_dir, out);
    if (want_csv(o.format))
        w("nmse.csv", nmse_csv(rows));
    if (want_plot(o.format))
        w("nmse.svg", nmse_plot(rows, "channel estimation NMSE"));
    return 0;
}

void write_sweep(const SweepResult &r, const std::string &prefix, const std::string &title, OutputFormat f,
                 Writer &w)
{
    const auto summary = summarize(r);
    if (want_csv(f))
    {
        w(prefix + "rates.csv", rates_csv(r));
        w(prefix + "sums.csv", sums_csv(r));
        w(prefix + "summary.csv", summary_csv(summary));
    }
    if (want_plot(f))
        w(prefix + "rates.svg", rate_plot(summary, title));
}

int report_failures(const SweepResult &r, std::ostream &out)
{
    int failed = 0;
    for (const auto &s : r.sums)
        failed += s.status != "ok";
    if (failed)
        out << failed << " of " << r.sums.size() << " sweep points failed; see status column\n";
    return failed;
}

int cmd_sweep(const Options &o, std::ostream &out)
{
    const RunConfig cfg = load(o);
    const SweepResult r = sweep(cfg.scenario);
    Writer w(cfg.out_dir, out);
    write_sweep(r, "", "sum rate versus transmit power", o.format, w);
    report_failures(r, out);
    return 0;
}

// Mean sum rate per (scheme, power) over trials that succeeded.
std::map<std::pair<Scheme, double>, std::vector<double>> by_point(const SweepResult &r)
{
    std::map<std::pair<Scheme, double>, std::vector<double>> m;
    for (const auto &s : r.sums)
        if (s.status == "ok")
            m[{s.scheme, s.power_dbm}].push_back(s.sum_rate);
    return m;
}

int cmd_repro(const Options &o, std::ostream &out)
{
    std::optional<RunConfig> base;
    if (!o.scenario.empty())
        base = load(o);
    if (!o.seed && !base)
        throw ConfigError("run.seed: missing; a seed is required (pass --seed)");
    const std::string out_dir = !o.out.empty() ? o.out : base ? base->out_dir : "out";
    Writer w(out_dir, out);
    bool all_ok = true;
    for (int side : {4, 6, 8})
    {
        Scenario sc = reference_scenario(side);
        if (base)
        {
            sc = base->scenario;
            sc.channel.bs.m = sc.channel.bs.n = side;
            sc.channel.star.m = sc.channel.star.n = side;
            sc.channel.user.m = sc.channel.user.n = side;
        }
        if (o.seed)
            sc.master_seed = *o.seed;
        if (o.workers > 0)
            sc.workers = o.workers;
        const std::string tag = std::to_string(side) + "x" + std::to_string(side);
        const SweepResult r = sweep(sc);
        const auto summary = summarize(r);
        if (want_csv(o.format))
            w("repro_" + tag + ".csv", summary_csv(summary));
        if (want_plot(o.format))
            w("repro_" + tag + ".svg", rate_plot(summary, tag + " arrays: sum rate versus transmit power"));

        // Expected rate per (scheme, power) is the mean over seeds. Optimal must beat deviated
        // and random phase at every power.
        const auto means = by_point(r);
        auto mean_of = [&](Scheme sch, double p) {
            const auto it = means.find({sch, p});
            if (it == means.end() || it->second.empty())
                return std::numeric_limits<double>::quiet_NaN();
            double m = 0.0;
            for (double x : it->second)
                m += x / it->second.size();
            return m;
        };
        int violations = 0, points = 0;
        double gain_dev = 0.0, gain_rand = 0.0;
        for (double p : sc.powers_dbm)
        {
            const double a = mean_of(Scheme::optimal_perfect, p);
            const double c = mean_of(Scheme::deviated_perfect, p);
            const double d = mean_of(Scheme::random_phase, p);
            ++points;
            violations += !(a > c && a > d);
            gain_dev += 100.0 * (a - c) / c / sc.powers_dbm.size();
            gain_rand += 100.0 * (a - d) / d / sc.powers_dbm.size();
        }
        const int failed = report_failures(r, out);
        out << tag << ": ordering " << (violations == 0 && points > 0 ? "ok" : "VIOLATED") << " (" << violations
            << "/" << points << " powers), mean gain over deviated " << fmt_double(gain_dev) << "%, over random phase "
            << fmt_double(gain_rand) << "%\n";
        all_ok = all_ok && violations == 0 && points > 0 && failed == 0;
    }
    return all_ok ? 0 : 1;
}

} // namespace

int exit_code_of(const std::exception &e)
{
    if (const auto *se = dynamic_cast<const Error *>(&e))
        return static_cast<int>(se->code());
    return 1;
}

std::string error_line(const std::exception &e)
{
    const auto *se = dynamic_cast<const Error *>(&e);
    std::string line = "starsim: error code=" + std::to_string(exit_code_of(e)) +
                       " kind=" + (se ? kind_of(se->code()) : "internal");
    if (const auto *st = dynamic_cast<const StageError *>(&e))
        line += " stage=" + st->stage();
    if (const auto *ie = dynamic_cast<const InfeasibleError *>(&e))
    {
        std::string v;
        for (const auto &c : ie->violated())
            v += (v.empty() ? "" : ",") + c;
        line += " violated=" + v;
    }
    return line + " message=" + one_line(e.what());
}

int parse_and_dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"starsim: link-level simulator for UAV-mounted STAR-RIS aided THz multi-user MIMO"};
    app.require_subcommand(1);
    Options o;
    std::string format = "csv";

    using Handler = std::function<int(const Options &, std::ostream &)>;
    std::vector<std::pair<CLI::App *, Handler>> commands;
    auto add = [&](const std::string &name, const std::string &help, Handler h, bool scenario_required) {
        CLI::App *sub = app.add_subcommand(name, help);
        auto *opt = sub->add_option("--scenario", o.scenario, "Scenario INI file");
        if (scenario_required)
            opt->required();
        sub->add_option("--seed", o.seed, "Master seed (overrides [run] seed)");
        sub->add_option("--out", o.out, "Output directory (overrides [run] out)");
        sub->add_option("--workers", o.workers, "Worker threads (affects wall time only)")->check(CLI::PositiveNumber);
        sub->add_option("--format", format, "Artifacts to write")->check(CLI::IsMember({"csv", "plot", "both"}));
        sub->add_flag("-v,--verbose", o.verbose, "More progress output");
        commands.emplace_back(sub, std::move(h));
    };
    add("sense", "Ghost-imaging reconstruction of the trial environment", cmd_sense, true);
    add("cluster", "K-means clustering of the users", cmd_cluster, true);
    add("place", "Optimal STAR position by Lazy Theta*", cmd_place, true);
    add("channels", "Synthesize the BS-STAR-user channels", cmd_channels, true);
    add("beams", "Joint active and passive beamforming with perfect CSI", cmd_beams, true);
    add("estimate", "Separated-channel estimation NMSE versus training SNR", cmd_estimate, true);
    add("sweep", "Monte Carlo rate sweep over seeds, powers and schemes", cmd_sweep, true);
    add("repro-paper", "Reference scenario at 4x4, 6x6 and 8x8 arrays", cmd_repro, false);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &)
    {
        out << app.help();
        return 0;
    }
    catch (const CLI::CallForAllHelp &)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    }
    catch (const CLI::ParseError &e)
    {
        err << "starsim: error code=2 kind=config message=" << one_line(e.what()) << "\n";
        return static_cast<int>(ExitCode::config);
    }
    o.format = format == "plot" ? OutputFormat::plot : format == "both" ? OutputFormat::both : OutputFormat::csv;

    for (const auto &[sub, handler] : commands)
    {
        if (!sub->parsed())
            continue;
        try
        {
            return handler(o, out);
        }
        catch (const std::exception &e)
        {
            err << error_line(e) << "\n";
            return exit_code_of(e);
        }
    }
    return 0;
}

} // namespace starsim::cli
