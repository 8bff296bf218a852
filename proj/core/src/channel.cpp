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

#include "starsim/channel.hpp"

#include "starsim/errors.hpp"
#include "starsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace starsim
{

namespace
{
constexpr double kDeg = kPi / 180.0;

void check_geometry(const ArrayGeometry &g, const char *what)
{
    if (g.m < 1 || g.n < 1 || g.M < 1 || g.N < 1)
        throw DomainError(std::string(what) + " array needs positive element and subarray counts");
    if (!(g.pitch > 0.0))
        throw DomainError(std::string(what) + " element pitch must be positive");
    if (g.subarrays() > 1 && !(g.subarray_pitch > 0.0))
        throw DomainError(std::string(what) + " subarray pitch must be positive");
}

// Reference element (x = y = 0) of each subarray, subarray index a * N + b.
std::vector<Point3> subarray_refs(const ArrayGeometry &g, const Frame &f, const Point3 &center)
{
    std::vector<Point3> out;
    const Point3 half = f.u * (0.5 * (g.m - 1) * g.pitch) + f.v * (0.5 * (g.n - 1) * g.pitch);
    for (int a = 0; a < g.M; ++a)
        for (int b = 0; b < g.N; ++b)
            out.push_back(center + f.u * ((a - 0.5 * (g.M - 1)) * g.subarray_pitch) +
                          f.v * ((b - 0.5 * (g.N - 1)) * g.subarray_pitch) - half);
    return out;
}

void fold_angles(double &az, double &el)
{
    if (el < 0.0)
    {
        el = -el;
        az += kPi;
    }
    if (el > kPi)
    {
        el = 2.0 * kPi - el;
        az += kPi;
    }
    az = std::remainder(az, 2.0 * kPi);
    if (az >= kPi)
        az -= 2.0 * kPi;
}

LinkParams link(const Point3 &tx, const Frame &ftx, const Point3 &rx, const Frame &frx)
{
    LinkParams p;
    p.distance = distance(tx, rx);
    if (!(p.distance > 0.0))
        throw DomainError("coincident transmit and receive arrays");
    // Both ends describe the ray by the direction opposite to propagation.
    const Point3 dir = (tx - rx).normalized();
    direction_angles(ftx, dir, p.tx.azimuth, p.tx.elevation);
    direction_angles(frx, dir, p.rx.azimuth, p.rx.elevation);
    return p;
}

// sqrt(m n m' n') beta a_rx a_tx^H
CMat rank_one(const ArrayGeometry &rxg, const ArrayGeometry &txg, double lambda, const PathParams &rx,
              const PathParams &tx, cdouble beta)
{
    const CVec ar = steering_upa(rxg, lambda, rx.azimuth, rx.elevation);
    const CVec at = steering_upa(txg, lambda, tx.azimuth, tx.elevation);
    const double scale = std::sqrt(static_cast<double>(rxg.elements()) * txg.elements());
    return (scale * beta) * ar * at.adjoint();
}

CMat nlos_block(const ArrayGeometry &rxg, const ArrayGeometry &txg, double lambda, const LinkParams &los,
                double los_mag, const ChannelConfig &cfg, Rng &rng, const CMat &los_block)
{
    CMat nl = CMat::Zero(rxg.elements(), txg.elements());
    if (cfg.n_nl <= 0)
        return nl;
    const double spread = cfg.nl_spread_deg * kDeg;
    const double mag = los_mag * std::pow(10.0, cfg.nl_gain_db / 20.0);
    for (int r = 0; r < cfg.n_nl; ++r)
    {
        PathParams tx = los.tx, rx = los.rx;
        tx.azimuth += rng.uniform(-spread, spread);
        tx.elevation += rng.uniform(-spread, spread);
        rx.azimuth += rng.uniform(-spread, spread);
        rx.elevation += rng.uniform(-spread, spread);
        fold_angles(tx.azimuth, tx.elevation);
        fold_angles(rx.azimuth, rx.elevation);
        tx.is_los = rx.is_los = false;
        nl += rank_one(rxg, txg, lambda, rx, tx, mag * rng.unit_phase());
    }
    // Rays adding coherently can exceed the per-ray power rule; cap the total.
    const double cap = cfg.n_nl * std::pow(10.0, cfg.nl_gain_db / 10.0) * los_block.squaredNorm();
    const double pw = nl.squaredNorm();
    if (pw > cap && pw > 0.0)
        nl *= std::sqrt(cap / pw);
    return nl;
}
} // namespace

Frame facing(const Point3 &normal)
{
    Frame f;
    f.n = normal.normalized();
    Point3 u = Point3{0, 0, 1}.cross(f.n);
    if (u.norm() < 1e-9)
        u = Point3{1, 0, 0};
    f.u = u.normalized();
    f.v = f.n.cross(f.u);
    return f;
}

void direction_angles(const Frame &frame, const Point3 &dir, double &azimuth, double &elevation)
{
    const Point3 d = dir.normalized();
    elevation = std::acos(std::clamp(d.dot(frame.n), -1.0, 1.0));
    azimuth = std::atan2(d.dot(frame.v), d.dot(frame.u));
    if (azimuth >= kPi)
        azimuth -= 2.0 * kPi;
}

CVec steering_upa(int m, int n, double pitch, double wavelength, double azimuth, double elevation)
{
    if (m < 1 || n < 1 || !(pitch > 0.0) || !(wavelength > 0.0))
        throw DomainError("steering_upa: invalid geometry");
    CVec a(m * n);
    const double k = 2.0 * kPi * pitch / wavelength;
    const double cx = std::cos(azimuth) * std::sin(elevation);
    const double cy = std::sin(azimuth) * std::sin(elevation);
    const double s = 1.0 / std::sqrt(static_cast<double>(m * n));
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < n; ++y)
            a(x * n + y) = std::polar(s, k * (x * cx + y * cy));
    return a;
}

CVec steering_upa(const ArrayGeometry &g, double wavelength, double azimuth, double elevation)
{
    return steering_upa(g.m, g.n, g.pitch, wavelength, azimuth, elevation);
}

double los_gain(double d, double f, double mu)
{
    if (!(d > 0.0))
        throw DomainError("los_gain: distance must be positive (far field)");
    if (!(f > 0.0))
        throw DomainError("los_gain: frequency must be positive");
    if (!(mu >= 0.0))
        throw DomainError("los_gain: absorption coefficient must be non-negative");
    const double a = kSpeedOfLight / (4.0 * kPi * d * f);
    return a * a * std::exp(-mu * d);
}

double lemma1_spacing(double d1, double f, int M, int N, int q)
{
    if (!(d1 > 0.0) || !(f > 0.0) || M < 1 || N < 1 || q < 1)
        throw DomainError("lemma1_spacing: arguments must be positive");
    const double delta = 1.0 / std::gcd(M, N);
    return std::sqrt(q * (kSpeedOfLight * d1 / f) * delta);
}

double column_coherence(const CMat &G)
{
    if (G.cols() < 2)
        throw DomainError("column_coherence needs at least two columns");
    RVec norms(G.cols());
    for (Eigen::Index c = 0; c < G.cols(); ++c)
    {
        norms(c) = G.col(c).norm();
        if (!(norms(c) > 0.0))
            throw DomainError("column_coherence: column " + std::to_string(c) + " is zero");
    }
    double worst = 0.0;
    for (Eigen::Index i = 0; i < G.cols(); ++i)
        for (Eigen::Index j = i + 1; j < G.cols(); ++j)
            worst = std::max(worst, std::abs(G.col(i).dot(G.col(j))) / (norms(i) * norms(j)));
    return std::min(worst, 1.0);
}

ChannelConfig resolve_geometry(const ChannelConfig &cfg, double d1)
{
    ChannelConfig c = cfg;
    const double lambda = kSpeedOfLight / c.freq;
    for (ArrayGeometry *g : {&c.bs, &c.star, &c.user})
        if (!(g->pitch > 0.0))
            g->pitch = lambda / 2.0;
    const double dd = c.design_d1 > 0.0 ? c.design_d1 : d1;
    for (ArrayGeometry *g : {&c.bs, &c.star})
        if (!(g->subarray_pitch > 0.0) && g->subarrays() > 1)
            g->subarray_pitch = lemma1_spacing(dd, c.freq, g->M, g->N);
    return c;
}

CMat ChannelSet::G_block(int s, int l) const
{
    return G.block(s * star.elements(), l * bs.elements(), star.elements(), bs.elements());
}

CMat ChannelSet::H_block(int k, int s) const
{
    return H[k].block(0, s * star.elements(), user.elements(), star.elements());
}

CMat ChannelSet::H_los_block(int k, int s) const
{
    return H_los[k].block(0, s * star.elements(), user.elements(), star.elements());
}

ChannelSet synth_channels(const Point3 &bs, const Point3 &star, const std::vector<Point3> &users,
                          const ChannelConfig &config, std::uint64_t seed)
{
    if (!(config.freq > 0.0))
        throw DomainError("carrier frequency must be positive");
    if (!(config.mu >= 0.0))
        throw DomainError("absorption coefficient must be non-negative");
    if (!bs.finite() || !star.finite())
        throw DomainError("non-finite array position");
    const double d1 = distance(bs, star);
    if (!(d1 > 0.0))
        throw DomainError("BS and STAR coincide");
    const ChannelConfig cfg = resolve_geometry(config, d1);
    check_geometry(cfg.bs, "BS");
    check_geometry(cfg.star, "STAR");
    check_geometry(cfg.user, "user");
    if (cfg.bs.subarrays() != cfg.star.subarrays())
        throw DomainError("BS subarray count must equal subSTAR count");
    if (static_cast<int>(users.size()) != cfg.star.subarrays())
        throw DomainError("expected " + std::to_string(cfg.star.subarrays()) + " users (one per subSTAR), got " +
                          std::to_string(users.size()));

    ChannelSet ch;
    ch.bs = cfg.bs;
    ch.star = cfg.star;
    ch.user = cfg.user;
    ch.freq = cfg.freq;
    ch.mu = cfg.mu;
    ch.wavelength = kSpeedOfLight / cfg.freq;
    ch.d1 = d1;
    const double lambda = ch.wavelength;

    ch.bs_frame = facing(star - bs);
    ch.star_frame = facing(bs - star);
    const int L = cfg.star.subarrays();
    const int Ns = cfg.star.elements(), Nt = cfg.bs.elements(), Nr = cfg.user.elements();
    const auto bs_refs = subarray_refs(cfg.bs, ch.bs_frame, bs);
    const auto star_refs = subarray_refs(cfg.star, ch.star_frame, star);

    // BS -> STAR, geometric phase on every block.
    ch.G = CMat::Zero(L * Ns, L * Nt);
    ch.G_los = ch.G;
    Rng grng(derive_seed(seed, {1}));
    for (int s = 0; s < L; ++s)
        for (int l = 0; l < L; ++l)
        {
            LinkParams lp = link(bs_refs[l], ch.bs_frame, star_refs[s], ch.star_frame);
            const double mag = std::sqrt(los_gain(lp.distance, cfg.freq, cfg.mu));
            const cdouble beta = std::polar(mag, -2.0 * kPi * lp.distance / lambda);
            lp.tx.gain = lp.rx.gain = beta;
            const CMat los = rank_one(cfg.star, cfg.bs, lambda, lp.rx, lp.tx, beta);
            ch.G_los.block(s * Ns, l * Nt, Ns, Nt) = los;
            ch.G.block(s * Ns, l * Nt, Ns, Nt) = los + nlos_block(cfg.star, cfg.bs, lambda, lp, mag, cfg, grng, los);
            ch.g_links.push_back(lp);
        }

    for (size_t k = 0; k < users.size(); ++k)
    {
        if (!users[k].finite())
            throw DomainError("non-finite user position");
        const double d2 = distance(star, users[k]);
        if (!(d2 > 0.0))
            throw DomainError("user " + std::to_string(k) + " coincides with the STAR");
        ch.d2.push_back(d2);
        const Frame uf = facing(star - users[k]);
        ch.user_frames.push_back(uf);
        const Point3 uref = subarray_refs(cfg.user, uf, users[k]).front();
        Rng hrng(derive_seed(seed, {2, k}));
        CMat H = CMat::Zero(Nr, L * Ns), Hl = H;
        for (int s = 0; s < L; ++s)
        {
            LinkParams lp = link(star_refs[s], ch.star_frame, uref, uf);
            const double mag = std::sqrt(los_gain(lp.distance, cfg.freq, cfg.mu));
            const double phase = cfg.geometric_phase ? -2.0 * kPi * lp.distance / lambda : hrng.uniform(-kPi, kPi);
            const cdouble beta = std::polar(mag, phase);
            lp.tx.gain = lp.rx.gain = beta;
            const CMat los = rank_one(cfg.user, cfg.star, lambda, lp.rx, lp.tx, beta);
            Hl.block(0, s * Ns, Nr, Ns) = los;
            H.block(0, s * Ns, Nr, Ns) = los + nlos_block(cfg.user, cfg.star, lambda, lp, mag, cfg, hrng, los);
            ch.h_links.push_back(lp);
        }
        ch.H.push_back(std::move(H));
        ch.H_los.push_back(std::move(Hl));

        if (cfg.direct)
        {
            Rng qrng(derive_seed(seed, {3, k}));
            CMat Q = CMat::Zero(Nr, L * Nt);
            const double spread = cfg.nl_spread_deg * kDeg;
            const int rays = std::max(cfg.n_nl, 1);
            for (int l = 0; l < L; ++l)
            {
                const LinkParams lp = link(bs_refs[l], ch.bs_frame, uref, uf);
                for (int r = 0; r < rays; ++r)
                {
                    PathParams tx = lp.tx, rx = lp.rx;
                    tx.azimuth += qrng.uniform(-spread, spread);
                    tx.elevation += qrng.uniform(-spread, spread);
                    rx.azimuth += qrng.uniform(-spread, spread);
                    rx.elevation += qrng.uniform(-spread, spread);
                    fold_angles(tx.azimuth, tx.elevation);
                    fold_angles(rx.azimuth, rx.elevation);
                    Q.block(0, l * Nt, Nr, Nt) += rank_one(cfg.user, cfg.bs, lambda, rx, tx, qrng.unit_phase());
                }
            }
            const double ref = (ch.H_los[k] * ch.G_los).squaredNorm();
            const double qn = Q.squaredNorm();
            if (qn > 0.0)
                Q *= std::sqrt(ref * std::pow(10.0, cfg.direct_db / 10.0) / qn);
            ch.Q.push_back(std::move(Q));
        }
    }
    return ch;
}

double nlos_power_ratio(const ChannelSet &ch, int s, int l)
{
    const int Ns = ch.star.elements(), Nt = ch.bs.elements();
    const CMat los = ch.G_los.block(s * Ns, l * Nt, Ns, Nt);
    const CMat nl = ch.G.block(s * Ns, l * Nt, Ns, Nt) - los;
    return nl.squaredNorm() / los.squaredNorm();
}

} // namespace starsim
