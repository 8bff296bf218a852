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

#ifndef STARSIM_CHANNEL_HPP
#define STARSIM_CHANNEL_HPP

#include "starsim/types.hpp"

#include <cstdint>
#include <vector>

namespace starsim
{

// Uniform planar array made of an M x N grid of identical m x n subarrays.
struct ArrayGeometry
{
    int m = 4;
    int n = 4;
    double pitch = 0.0;          // element spacing, meters
    int M = 1;                   // subarray grid
    int N = 1;
    double subarray_pitch = 0.0; // spacing between subarray reference elements, meters

    int elements() const { return m * n; }
    int subarrays() const { return M * N; }

    friend bool operator==(const ArrayGeometry &, const ArrayGeometry &) = default;
};

struct PathParams
{
    double azimuth = 0.0;   // radians, [-pi, pi)
    double elevation = 0.0; // radians, [0, pi]
    cdouble gain{0.0, 0.0};
    bool is_los = true;
};

// Orthonormal array frame: elements lie in the (u, v) plane; n is the array normal.
struct Frame
{
    Point3 u{1, 0, 0};
    Point3 v{0, 1, 0};
    Point3 n{0, 0, 1};
};

// Frame whose normal points along `normal`; u is horizontal where possible.
Frame facing(const Point3 &normal);
// Angles of the unit direction `dir` in `frame`.
void direction_angles(const Frame &frame, const Point3 &dir, double &azimuth, double &elevation);

// a[x*n + y] = exp(j 2 pi pitch / lambda (x cos(az) sin(el) + y sin(az) sin(el))) / sqrt(m n).
CVec steering_upa(int m, int n, double pitch, double wavelength, double azimuth, double elevation);
CVec steering_upa(const ArrayGeometry &g, double wavelength, double azimuth, double elevation);

// |beta|^2 = c^2 / (4 pi d f)^2 exp(-mu d).
double los_gain(double d, double f, double mu);

// sqrt(q (c d1 / f) Delta) with Delta = lcm(1/M, 1/N) = 1/gcd(M, N).
double lemma1_spacing(double d1, double f, int M, int N, int q = 1);

// Largest normalized |<g_i, g_j>| over distinct columns.
double column_coherence(const CMat &G);

struct ChannelConfig
{
    double freq = 350e9;
    double mu = 2.13e-6;
    ArrayGeometry bs{4, 4, 0.0, 2, 2, 0.0};   // zero pitches resolve to lambda/2 and lemma1_spacing
    ArrayGeometry star{4, 4, 0.0, 2, 2, 0.0};
    ArrayGeometry user{4, 4, 0.0, 1, 1, 0.0};
    int n_nl = 3;
    double nl_spread_deg = 20.0;
    double nl_gain_db = -10.0;
    bool geometric_phase = false; // LOS phase of H: exp(-j 2 pi d / lambda) instead of random
    bool direct = false;          // synthesize the BS-user channel Q
    double direct_db = -20.0;
    // Distance used for lemma1_spacing when subarray pitches are zero; <= 0 uses the
    // actual BS-STAR distance.
    double design_d1 = 0.0;

    friend bool operator==(const ChannelConfig &, const ChannelConfig &) = default;
};

// Geometry of one LOS link between a transmit and a receive (sub)array.
struct LinkParams
{
    PathParams tx; // departure, transmitter frame
    PathParams rx; // arrival, receiver frame
    double distance = 0.0;
};

struct ChannelSet
{
    CMat G;     // (L_s m_s n_s) x (L_B m_t n_t)
    CMat G_los;
    std::vector<CMat> H;     // per user: (m_r n_r) x (L_s m_s n_s)
    std::vector<CMat> H_los;
    std::vector<CMat> Q;     // per user: (m_r n_r) x (L_B m_t n_t); empty when disabled
    std::vector<LinkParams> g_links; // [s * L_B + l]: BS subarray l -> subSTAR s
    std::vector<LinkParams> h_links; // [k * L_s + s]: subSTAR s -> user k
    ArrayGeometry bs, star, user;
    double freq = 0.0;
    double mu = 0.0;
    double wavelength = 0.0;
    double d1 = 0.0;              // BS center to STAR center
    std::vector<double> d2;       // STAR center to user k
    Frame bs_frame, star_frame;
    std::vector<Frame> user_frames;

    int K() const { return static_cast<int>(H.size()); }
    int LB() const { return bs.subarrays(); }
    int LS() const { return star.subarrays(); }
    const LinkParams &g_link(int s, int l) const { return g_links[s * LB() + l]; }
    const LinkParams &h_link(int k, int s) const { return h_links[k * LS() + s]; }
    // Block of G from BS subarray l into subSTAR s.
    CMat G_block(int s, int l) const;
    // Block of H_k from subSTAR s.
    CMat H_block(int k, int s) const;
    CMat H_los_block(int k, int s) const;
};

// Array centers and user positions in meters. users.size() must equal the number of
// subSTARs; user k is served by BS subarray k and subSTAR k.
ChannelSet synth_channels(const Point3 &bs, const Point3 &star, const std::vector<Point3> &users,
                          const ChannelConfig &cfg, std::uint64_t seed);

// Fills zero pitches: lambda/2 elements, lemma1_spacing for distance d1.
ChannelConfig resolve_geometry(const ChannelConfig &cfg, double d1);

// Ratio ||G - G_los||^2 / ||G_los||^2 for the block (s, l).
double nlos_power_ratio(const ChannelSet &ch, int s, int l);

} // namespace starsim

#endif
