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

#ifndef STARSIM_SIM_HPP
#define STARSIM_SIM_HPP

#include "starsim/beam.hpp"
#include "starsim/channel.hpp"
#include "starsim/cluster.hpp"
#include "starsim/env.hpp"
#include "starsim/gi.hpp"
#include "starsim/place.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace starsim
{

enum class Scheme
{
    optimal_perfect,   // (a)
    optimal_estimated, // (b)
    deviated_perfect,  // (c)
    random_phase,      // (d)
};

const char *scheme_name(Scheme s);
Scheme parse_scheme(const std::string &name);

enum class EnvSource
{
    random,    // random urban blocks per trial
    heightmap, // fixed heightmap file
    gi,        // random ground truth, sensed by ghost imaging
};

struct GISettings
{
    PixelGrid grid{20, 20, 0.1, 0.0, 0.0};
    int emitters_per_side = 0; // 0: spectral layout, one emitter per pixel
    double aperture = 200.0;   // meters, square grid layout only
    double standoff = 100.0;  // meters
    double bandwidth = 100e6; // Hz
    double carrier = 2.6e9;
    int n_meas = 0;           // 0: 2M
    double snr_db = 30.0;
    double ridge = 0.0;       // 0: noise variance estimate
    double threshold = 0.5;   // fraction of max |eps_hat|

    friend bool operator==(const GISettings &, const GISettings &) = default;
};

struct Scenario
{
    GridSpec grid;
    Point3 bs{7, 13, 7};
    std::vector<Point3> users{{11, 8, 1}, {13, 9, 0.94}, {12, 8, 1.5}, {14, 7, 0.8}};
    EnvSource env_source = EnvSource::random;
    std::string heightmap_file;
    int n_blocks = 40;
    double max_height = 12.0;
    int env_attempts = 200;
    GISettings gi;

    int k_clusters = 1;
    ChannelConfig channel;
    double noise_dbm = -75.0;
    std::vector<double> powers_dbm{-10, -5, 0, 5, 10, 15, 20, 25, 30};
    std::uint64_t master_seed = 0;
    int n_seeds = 10;
    std::vector<Scheme> schemes{Scheme::optimal_perfect, Scheme::optimal_estimated, Scheme::deviated_perfect,
                                Scheme::random_phase};
    double training_snr_db = 20.0;
    double deviation = 0.1;
    std::vector<double> nmse_snrs_db{0, 10, 20, 30};
    int workers = 1;

    friend bool operator==(const Scenario &, const Scenario &) = default;
};

// Per-trial seed derived from the master seed.
std::uint64_t trial_seed(const Scenario &sc, int trial);

// Everything a single trial needs before rates are evaluated.
struct TrialSetup
{
    std::uint64_t seed = 0;
    RMat heights;               // ground-truth heightmap
    RMat sensed_heights;        // heightmap used for placement
    Clustering clustering;
    Point3 centroid;
    Point3 bs_vertex;       // snapped BS
    Point3 centroid_vertex; // snapped centroid
    Placement placement;
    Point3 deviated;
    double deviated_objective = 0.0;
    ChannelSet optimal_channels;
    ChannelSet deviated_channels;
    std::vector<CVec> estimated_phases; // scheme (b)
    std::vector<double> nmse_u, nmse_a; // per user, scheme (b) estimates
};

// sense/load -> cluster -> place -> channels -> estimation for one trial.
TrialSetup prepare_trial(const Scenario &sc, int trial);

// Environment for a trial (ground truth), honoring the obstruction requirement.
Environment trial_environment(const Scenario &sc, std::uint64_t seed);

// Heightmap recovered by ghost imaging of the ground-truth scene.
RMat sense_heights(const Scenario &sc, const RMat &truth, std::uint64_t seed, double *rel_error = nullptr);

struct RateRow
{
    Scheme scheme;
    double power_dbm;
    int seed;
    int user;
    double rate;
    double sir_db;
};

struct SumRow
{
    Scheme scheme;
    double power_dbm;
    int seed;
    double sum_rate;
    double objective;
    std::string status; // "ok" or the error message
};

struct NmseRow
{
    double snr_db;
    std::string channel; // cascaded | U | A
    double nmse;
    int seed;
};

struct SweepResult
{
    std::vector<RateRow> rates;
    std::vector<SumRow> sums;
};

// Rows for one trial, ordered by (scheme, power).
SweepResult run_pipeline(const Scenario &sc, int trial);

// All trials, merged in (scheme, power, seed) order regardless of worker count.
SweepResult sweep(const Scenario &sc);

// BALS + anchor NMSE against training SNR, rows ordered by (snr, seed, channel).
std::vector<NmseRow> nmse_sweep(const Scenario &sc, int user = 0);

struct SummaryRow
{
    Scheme scheme;
    double power_dbm;
    double mean;
    double median;
    int n;
};
std::vector<SummaryRow> summarize(const SweepResult &r);

std::string rates_csv(const SweepResult &r);
std::string sums_csv(const SweepResult &r);
std::string summary_csv(const std::vector<SummaryRow> &s);
std::string nmse_csv(const std::vector<NmseRow> &rows);
std::string rate_plot(const std::vector<SummaryRow> &s, const std::string &title);
std::string nmse_plot(const std::vector<NmseRow> &rows, const std::string &title);

double median(std::vector<double> v);

} // namespace starsim

#endif
