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

#include "starsim_cli/config.hpp"

#include "starsim/errors.hpp"
#include "starsim/io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace starsim::cli
{

namespace pt = boost::property_tree;

namespace
{

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        out.push_back(trim(cur));
    return out;
}

bool parse_number(const std::string &s, double &v)
{
    const std::string t = trim(s);
    if (t.empty())
        return false;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    return r.ec == std::errc() && r.ptr == t.data() + t.size() && std::isfinite(v);
}

template <class Int> bool parse_integer(const std::string &s, Int &v)
{
    const std::string t = trim(s);
    if (t.empty())
        return false;
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    return r.ec == std::errc() && r.ptr == t.data() + t.size();
}

// Typed access to the ptree with error collection and unknown-key detection.
class Reader
{
  public:
    explicit Reader(const pt::ptree &tree) : tree_(tree) {}

    std::vector<std::string> errors;

    std::optional<std::string> raw(const std::string &key)
    {
        seen_.insert(key);
        if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.')))
            return trim(*v);
        return std::nullopt;
    }

    void real(const std::string &key, double &out)
    {
        if (auto v = raw(key))
            if (!parse_number(*v, out))
                errors.push_back(key + ": expected a finite number, got '" + *v + "'");
    }

    void integer(const std::string &key, int &out)
    {
        if (auto v = raw(key))
            if (!parse_integer(*v, out))
                errors.push_back(key + ": expected an integer, got '" + *v + "'");
    }

    void flag(const std::string &key, bool &out)
    {
        if (auto v = raw(key))
        {
            if (*v == "true" || *v == "1")
                out = true;
            else if (*v == "false" || *v == "0")
                out = false;
            else
                errors.push_back(key + ": expected true or false, got '" + *v + "'");
        }
    }

    void text(const std::string &key, std::string &out)
    {
        if (auto v = raw(key))
            out = *v;
    }

    void point(const std::string &key, Point3 &out)
    {
        if (auto v = raw(key))
            if (!parse_point(*v, out))
                errors.push_back(key + ": expected 'x, y, z', got '" + *v + "'");
    }

    void points(const std::string &key, std::vector<Point3> &out)
    {
        if (auto v = raw(key))
        {
            std::vector<Point3> pts;
            for (const auto &item : split(*v, ';'))
            {
                Point3 p;
                if (!parse_point(item, p))
                {
                    errors.push_back(key + ": expected 'x, y, z; x, y, z; ...', got '" + *v + "'");
                    return;
                }
                pts.push_back(p);
            }
            out = std::move(pts);
        }
    }

    void reals(const std::string &key, std::vector<double> &out)
    {
        if (auto v = raw(key))
        {
            std::vector<double> xs;
            for (const auto &item : split(*v, ','))
            {
                double x = 0.0;
                if (!parse_number(item, x))
                {
                    errors.push_back(key + ": expected a comma-separated list of numbers, got '" + *v + "'");
                    return;
                }
                xs.push_back(x);
            }
            out = std::move(xs);
        }
    }

    void unknown_keys()
    {
        for (const auto &[section, body] : tree_)
        {
            if (body.empty() && !body.data().empty())
                errors.push_back(section + ": key outside a section");
            for (const auto &[key, value] : body)
                if (!seen_.count(section + "." + key))
                    errors.push_back(section + "." + key + ": unknown key");
        }
    }

  private:
    static bool parse_point(const std::string &s, Point3 &p)
    {
        const auto parts = split(s, ',');
        return parts.size() == 3 && parse_number(parts[0], p.x) && parse_number(parts[1], p.y) &&
               parse_number(parts[2], p.z);
    }

    const pt::ptree &tree_;
    std::set<std::string> seen_;
};

void read_array(Reader &r, const std::string &prefix, ArrayGeometry &a)
{
    r.integer("channel." + prefix + "_m", a.m);
    r.integer("channel." + prefix + "_n", a.n);
    r.real("channel." + prefix + "_pitch", a.pitch);
    r.integer("channel." + prefix + "_M", a.M);
    r.integer("channel." + prefix + "_N", a.N);
    r.real("channel." + prefix + "_subarray_pitch", a.subarray_pitch);
}

void check_array(std::vector<std::string> &e, const std::string &prefix, const ArrayGeometry &a)
{
    const std::string k = "channel." + prefix;
    if (a.m < 1 || a.n < 1)
        e.push_back(k + "_m/_n: array dimensions must be >= 1");
    if (a.M < 1 || a.N < 1)
        e.push_back(k + "_M/_N: subarray grid must be >= 1");
    if (a.pitch < 0.0)
        e.push_back(k + "_pitch: must be >= 0 (0 selects half a wavelength)");
    if (a.subarray_pitch < 0.0)
        e.push_back(k + "_subarray_pitch: must be >= 0 (0 selects the decorrelating subarray spacing)");
}

const char *source_name(EnvSource s)
{
    switch (s)
    {
    case EnvSource::random:
        return "random";
    case EnvSource::heightmap:
        return "heightmap";
    case EnvSource::gi:
        return "gi";
    }
    return "random";
}

std::string join_points(const std::vector<Point3> &pts)
{
    std::string s;
    for (size_t i = 0; i < pts.size(); ++i)
        s += (i ? "; " : "") + fmt_double(pts[i].x) + ", " + fmt_double(pts[i].y) + ", " + fmt_double(pts[i].z);
    return s;
}

std::string join_reals(const std::vector<double> &xs)
{
    std::string s;
    for (size_t i = 0; i < xs.size(); ++i)
        s += (i ? ", " : "") + fmt_double(xs[i]);
    return s;
}

std::string join_schemes(const std::vector<Scheme> &xs)
{
    std::string s;
    for (size_t i = 0; i < xs.size(); ++i)
        s += (i ? ", " : "") + std::string(scheme_name(xs[i]));
    return s;
}

} // namespace

RunConfig validate_config(const std::string &text, std::optional<std::uint64_t> seed_override)
{
    pt::ptree tree;
    try
    {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    }
    catch (const pt::ini_parser_error &e)
    {
        throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message());
    }

    RunConfig cfg;
    Scenario &sc = cfg.scenario;
    Reader r(tree);

    // [run]
    if (auto v = r.raw("run.seed"))
    {
        if (!parse_integer(*v, sc.master_seed))
            r.errors.push_back("run.seed: expected a non-negative integer, got '" + *v + "'");
    }
    else if (!seed_override)
        r.errors.push_back("run.seed: missing; a seed is required (set [run] seed or pass --seed)");
    if (seed_override)
        sc.master_seed = *seed_override;
    r.integer("run.n_seeds", sc.n_seeds);
    r.integer("run.workers", sc.workers);
    r.integer("run.verbosity", cfg.verbosity);
    r.text("run.out", cfg.out_dir);
    if (auto v = r.raw("run.schemes"))
    {
        std::vector<Scheme> schemes;
        for (const auto &item : split(*v, ','))
        {
            try
            {
                schemes.push_back(parse_scheme(item));
            }
            catch (const Error &e)
            {
                r.errors.push_back(std::string("run.schemes: ") + e.what());
            }
        }
        sc.schemes = std::move(schemes);
    }
    r.reals("run.powers_dbm", sc.powers_dbm);
    r.real("run.noise_dbm", sc.noise_dbm);
    r.real("run.deviation", sc.deviation);
    r.real("run.training_snr_db", sc.training_snr_db);
    r.reals("run.nmse_snrs_db", sc.nmse_snrs_db);

    // [env]
    r.integer("env.nx", sc.grid.nx);
    r.integer("env.ny", sc.grid.ny);
    r.integer("env.nz", sc.grid.nz);
    r.real("env.cell", sc.grid.cell);
    r.real("env.z_min", sc.grid.z_min);
    r.real("env.z_max", sc.grid.z_max);
    r.point("env.bs", sc.bs);
    r.points("env.users", sc.users);
    if (auto v = r.raw("env.source"))
    {
        if (*v == "random")
            sc.env_source = EnvSource::random;
        else if (*v == "heightmap")
            sc.env_source = EnvSource::heightmap;
        else if (*v == "gi")
            sc.env_source = EnvSource::gi;
        else
            r.errors.push_back("env.source: expected random, heightmap or gi, got '" + *v + "'");
    }
    r.text("env.heightmap", sc.heightmap_file);
    r.integer("env.n_blocks", sc.n_blocks);
    r.real("env.max_height", sc.max_height);
    r.integer("env.attempts", sc.env_attempts);

    // [gi]
    GISettings &g = sc.gi;
    r.integer("gi.pixels_i", g.grid.I);
    r.integer("gi.pixels_j", g.grid.J);
    r.real("gi.pitch", g.grid.pitch);
    r.real("gi.x0", g.grid.x0);
    r.real("gi.y0", g.grid.y0);
    r.integer("gi.emitters_per_side", g.emitters_per_side);
    r.real("gi.aperture", g.aperture);
    r.real("gi.standoff", g.standoff);
    r.real("gi.bandwidth", g.bandwidth);
    r.real("gi.carrier", g.carrier);
    r.integer("gi.n_meas", g.n_meas);
    r.real("gi.snr_db", g.snr_db);
    r.real("gi.ridge", g.ridge);
    r.real("gi.threshold", g.threshold);

    // [cluster]
    r.integer("cluster.k", sc.k_clusters);

    // [channel]
    ChannelConfig &c = sc.channel;
    r.real("channel.freq", c.freq);
    r.real("channel.mu", c.mu);
    read_array(r, "bs", c.bs);
    read_array(r, "star", c.star);
    read_array(r, "user", c.user);
    r.integer("channel.n_nl", c.n_nl);
    r.real("channel.nl_spread_deg", c.nl_spread_deg);
    r.real("channel.nl_gain_db", c.nl_gain_db);
    r.flag("channel.geometric_phase", c.geometric_phase);
    r.flag("channel.direct", c.direct);
    r.real("channel.direct_db", c.direct_db);
    r.real("channel.design_d1", c.design_d1);

    r.unknown_keys();

    // Range checks.
    auto &e = r.errors;
    if (sc.n_seeds < 1)
        e.push_back("run.n_seeds: must be >= 1");
    if (sc.workers < 1)
        e.push_back("run.workers: must be >= 1");
    if (cfg.out_dir.empty())
        e.push_back("run.out: must not be empty");
    if (sc.schemes.empty())
        e.push_back("run.schemes: at least one scheme is required");
    if (sc.powers_dbm.empty())
        e.push_back("run.powers_dbm: at least one power is required");
    if (!(sc.deviation > 0.0 && sc.deviation < 1.0))
        e.push_back("run.deviation: must lie in (0, 1)");
    if (sc.nmse_snrs_db.empty())
        e.push_back("run.nmse_snrs_db: at least one SNR is required");
    if (sc.grid.nx < 2 || sc.grid.ny < 2 || sc.grid.nz < 2)
        e.push_back("env.nx/ny/nz: grid needs at least 2 vertices per axis");
    if (!(sc.grid.cell > 0.0))
        e.push_back("env.cell: must be > 0");
    if (!(sc.grid.z_min <= sc.grid.z_max))
        e.push_back("env.z_min/z_max: z_min must not exceed z_max");
    if (sc.users.empty())
        e.push_back("env.users: at least one user is required");
    if (sc.env_source == EnvSource::heightmap && sc.heightmap_file.empty())
        e.push_back("env.heightmap: required when env.source = heightmap");
    if (sc.n_blocks < 0)
        e.push_back("env.n_blocks: must be >= 0");
    if (!(sc.max_height > 0.0))
        e.push_back("env.max_height: must be > 0");
    if (sc.env_attempts < 1)
        e.push_back("env.attempts: must be >= 1");
    if (g.grid.I < 1 || g.grid.J < 1)
        e.push_back("gi.pixels_i/pixels_j: must be >= 1");
    if (sc.env_source == EnvSource::gi && (g.grid.I != sc.grid.nx || g.grid.J != sc.grid.ny))
        e.push_back("gi.pixels_i/pixels_j: must equal env.nx/env.ny when env.source = gi");
    if (!(g.grid.pitch > 0.0))
        e.push_back("gi.pitch: must be > 0");
    if (g.emitters_per_side < 0)
        e.push_back("gi.emitters_per_side: must be >= 0");
    if (!(g.aperture > 0.0))
        e.push_back("gi.aperture: must be > 0");
    if (!(g.standoff > 0.0))
        e.push_back("gi.standoff: must be > 0");
    if (!(g.bandwidth > 0.0))
        e.push_back("gi.bandwidth: must be > 0");
    if (!(g.carrier > 0.0))
        e.push_back("gi.carrier: must be > 0");
    if (g.n_meas < 0)
        e.push_back("gi.n_meas: must be >= 0 (0 selects 2M)");
    if (g.ridge < 0.0)
        e.push_back("gi.ridge: must be >= 0");
    if (!(g.threshold > 0.0 && g.threshold <= 1.0))
        e.push_back("gi.threshold: must lie in (0, 1]");
    if (sc.k_clusters < 1)
        e.push_back("cluster.k: must be >= 1");
    else if (static_cast<size_t>(sc.k_clusters) > sc.users.size())
        e.push_back("cluster.k: exceeds the number of users");
    if (!(c.freq > 0.0))
        e.push_back("channel.freq: must be > 0");
    if (!(c.mu >= 0.0))
        e.push_back("channel.mu: must be >= 0");
    check_array(e, "bs", c.bs);
    check_array(e, "star", c.star);
    check_array(e, "user", c.user);
    if (c.n_nl < 0)
        e.push_back("channel.n_nl: must be >= 0");
    if (c.nl_spread_deg < 0.0)
        e.push_back("channel.nl_spread_deg: must be >= 0");
    if (c.design_d1 < 0.0)
        e.push_back("channel.design_d1: must be >= 0 (0 selects the actual distance)");

    if (!e.empty())
        throw ConfigError(e);
    return cfg;
}

RunConfig load_config(const std::string &path, std::optional<std::uint64_t> seed_override)
{
    std::ifstream f(path);
    if (!f)
        throw IoError("cannot open scenario '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    RunConfig cfg = validate_config(ss.str(), seed_override);
    cfg.scenario_path = path;
    std::string &hm = cfg.scenario.heightmap_file;
    if (!hm.empty() && std::filesystem::path(hm).is_relative())
        hm = (std::filesystem::path(path).parent_path() / hm).lexically_normal().string();
    return cfg;
}

std::string serialize_config(const RunConfig &cfg)
{
    const Scenario &sc = cfg.scenario;
    const GISettings &g = sc.gi;
    const ChannelConfig &c = sc.channel;
    auto num = [](double v) { return fmt_double(v); };
    std::ostringstream o;
    o << "[run]\n"
      << "seed = " << sc.master_seed << "\n"
      << "n_seeds = " << sc.n_seeds << "\n"
      << "workers = " << sc.workers << "\n"
      << "verbosity = " << cfg.verbosity << "\n"
      << "out = " << cfg.out_dir << "\n"
      << "schemes = " << join_schemes(sc.schemes) << "\n"
      << "powers_dbm = " << join_reals(sc.powers_dbm) << "\n"
      << "noise_dbm = " << num(sc.noise_dbm) << "\n"
      << "deviation = " << num(sc.deviation) << "\n"
      << "training_snr_db = " << num(sc.training_snr_db) << "\n"
      << "nmse_snrs_db = " << join_reals(sc.nmse_snrs_db) << "\n\n";
    o << "[env]\n"
      << "nx = " << sc.grid.nx << "\n"
      << "ny = " << sc.grid.ny << "\n"
      << "nz = " << sc.grid.nz << "\n"
      << "cell = " << num(sc.grid.cell) << "\n"
      << "z_min = " << num(sc.grid.z_min) << "\n"
      << "z_max = " << num(sc.grid.z_max) << "\n"
      << "bs = " << join_points({sc.bs}) << "\n"
      << "users = " << join_points(sc.users) << "\n"
      << "source = " << source_name(sc.env_source) << "\n";
    if (!sc.heightmap_file.empty())
        o << "heightmap = " << sc.heightmap_file << "\n";
    o << "n_blocks = " << sc.n_blocks << "\n"
      << "max_height = " << num(sc.max_height) << "\n"
      << "attempts = " << sc.env_attempts << "\n\n";
    o << "[gi]\n"
      << "pixels_i = " << g.grid.I << "\n"
      << "pixels_j = " << g.grid.J << "\n"
      << "pitch = " << num(g.grid.pitch) << "\n"
      << "x0 = " << num(g.grid.x0) << "\n"
      << "y0 = " << num(g.grid.y0) << "\n"
      << "emitters_per_side = " << g.emitters_per_side << "\n"
      << "aperture = " << num(g.aperture) << "\n"
      << "standoff = " << num(g.standoff) << "\n"
      << "bandwidth = " << num(g.bandwidth) << "\n"
      << "carrier = " << num(g.carrier) << "\n"
      << "n_meas = " << g.n_meas << "\n"
      << "snr_db = " << num(g.snr_db) << "\n"
      << "ridge = " << num(g.ridge) << "\n"
      << "threshold = " << num(g.threshold) << "\n\n";
    o << "[cluster]\n"
      << "k = " << sc.k_clusters << "\n\n";
    o << "[channel]\n"
      << "freq = " << num(c.freq) << "\n"
      << "mu = " << num(c.mu) << "\n";
    for (const auto &[name, a] : {std::pair<const char *, const ArrayGeometry &>{"bs", c.bs},
                                  {"star", c.star},
                                  {"user", c.user}})
    {
        o << name << "_m = " << a.m << "\n"
          << name << "_n = " << a.n << "\n"
          << name << "_pitch = " << num(a.pitch) << "\n"
          << name << "_M = " << a.M << "\n"
          << name << "_N = " << a.N << "\n"
          << name << "_subarray_pitch = " << num(a.subarray_pitch) << "\n";
    }
    o << "n_nl = " << c.n_nl << "\n"
      << "nl_spread_deg = " << num(c.nl_spread_deg) << "\n"
      << "nl_gain_db = " << num(c.nl_gain_db) << "\n"
      << "geometric_phase = " << (c.geometric_phase ? "true" : "false") << "\n"
      << "direct = " << (c.direct ? "true" : "false") << "\n"
      << "direct_db = " << num(c.direct_db) << "\n"
      << "design_d1 = " << num(c.design_d1) << "\n";
    return o.str();
}

Scenario reference_scenario(int side)
{
    if (side < 1)
        throw ConfigError("array side must be >= 1");
    Scenario sc;
    sc.channel.bs.m = sc.channel.bs.n = side;
    sc.channel.star.m = sc.channel.star.n = side;
    sc.channel.user.m = sc.channel.user.n = side;
    return sc;
}

} // namespace starsim::cli
