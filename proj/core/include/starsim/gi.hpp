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

#ifndef STARSIM_GI_HPP
#define STARSIM_GI_HPP

#include "starsim/types.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace starsim
{

// I x J imaging pixels on the plane z = plane_height. Pixel (i, j) is centered at
// origin + (i*pitch, j*pitch). Linear index m = i*J + j.
struct PixelGrid
{
    int I = 20;
    int J = 20;
    double pitch = 0.1; // meters
    double x0 = 0.0;
    double y0 = 0.0;

    int size() const { return I * J; }
    Point3 center(int m, double z) const { return {x0 + (m / J) * pitch, y0 + (m % J) * pitch, z}; }

    friend bool operator==(const PixelGrid &, const PixelGrid &) = default;
};

struct FieldOptions
{
    double carrier = 2.6e9;      // Hz
    int oversample = 4;          // sampling interval in units of 1/bandwidth
    int kernel_half_width = 4;   // interpolation kernel half width (samples)
};

struct IlluminationEnsemble
{
    CMat E; // N_m x M
    PixelGrid grid;
    std::vector<Point3> emitters;
    double plane_height = 0.0;
    double carrier = 0.0;
    double bandwidth = 0.0;
    double sample_interval = 0.0;

    Eigen::Index measurements() const { return E.rows(); }
    Eigen::Index pixels() const { return E.cols(); }
};

struct Scene
{
    CVec eps;
    RVec rho;
};

struct GIResult
{
    CVec eps_hat;
    double rel_error = std::numeric_limits<double>::quiet_NaN();
    std::pair<double, double> resolution_bounds{0.0, 0.0};
};

// Square grid of n x n emitters spanning `aperture` meters, centered above (cx, cy) at
// height z. Stands in for the CRAN radiating points.
std::vector<Point3> emitter_grid(int n, double aperture, double cx, double cy, double z);

// I x J emitters at height `standoff` above the pixel-grid center, placed so their
// direction cosines seen from the grid center step by wavelength / (I pitch) and
// wavelength / (J pitch). The emitter plane wave spectra then tile the pixel grid's
// spatial frequencies, which keeps E well conditioned.
std::vector<Point3> emitter_spectral_layout(const PixelGrid &grid, double standoff, double wavelength);

// Field samples E[n, m] = sum_i s_i(t_n - tau_im) l_im with s_i bandlimited complex
// Gaussian waveforms (windowed-sinc interpolation of unit-variance samples at the
// bandwidth rate) and free-space 1/d attenuation. The carrier phase exp(-j 2 pi f tau)
// is folded into l_im.
IlluminationEnsemble synthesize_field(const std::vector<Point3> &emitters, const PixelGrid &grid,
                                      double plane_height, int n_meas, double bandwidth, std::uint64_t seed,
                                      const FieldOptions &opt = {});

// Largest normalized inner product between two distinct rows of E.
double max_row_correlation(const CMat &E);

// Noise variance giving the requested per-measurement SNR for the clean signal Ax.
double noise_variance(const CMat &A, const CVec &x, double snr_db);

// y = E (eps .* rho) + n. snr_db = +inf gives a noiseless measurement.
CVec measure(const IlluminationEnsemble &ens, const Scene &scene, double snr_db, std::uint64_t seed);
CVec measure(const CMat &E, const Scene &scene, double snr_db, std::uint64_t seed);

// Ridge-regularized least squares. ridge = 0 requires E diag(rho) to have full column
// rank. `truth` fills rel_error.
GIResult reconstruct(const IlluminationEnsemble &ens, const CVec &y, const RVec &rho, double ridge,
                     const std::optional<CVec> &truth = std::nullopt);
GIResult reconstruct(const CMat &E, const CVec &y, const RVec &rho, double ridge,
                     const std::optional<CVec> &truth = std::nullopt);

// (D lambda / (2 Y), D lambda / Y) for source extent Y and standoff D.
std::pair<double, double> resolution_bounds(double source_extent, double wavelength, double standoff);

// Free-space receive attenuation 1/d from each pixel center to the receiver.
RVec receiver_attenuation(const PixelGrid &grid, double plane_height, const Point3 &receiver);

// Pixels with |eps_hat| >= threshold take the matching entry of `height_channel`; the
// rest are zero. Returns an I x J heightmap.
RMat scene_to_environment(const GIResult &result, const PixelGrid &grid, double threshold,
                          const RVec &height_channel);

// Block-averages an I x J heightmap down to nx x ny grid columns (max pooling).
RMat downsample_heights(const RMat &fine, int nx, int ny);

} // namespace starsim

#endif
