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

#include "starsim/gi.hpp"

#include "starsim/errors.hpp"
#include "starsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace starsim
{

namespace
{
double lanczos(double x, int a)
{
    if (x == 0.0)
        return 1.0;
    if (std::abs(x) >= a)
        return 0.0;
    const double px = kPi * x;
    return a * std::sin(px) * std::sin(px / a) / (px * px);
}
} // namespace

std::vector<Point3> emitter_grid(int n, double aperture, double cx, double cy, double z)
{
    if (n < 1)
        throw DomainError("emitter grid needs n >= 1");
    std::vector<Point3> out;
    const double step = n > 1 ? aperture / (n - 1) : 0.0;
    const double start = n > 1 ? -aperture / 2.0 : 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            out.push_back({cx + start + a * step, cy + start + b * step, z});
    return out;
}

std::vector<Point3> emitter_spectral_layout(const PixelGrid &grid, double standoff, double wavelength)
{
    if (!(standoff > 0.0) || !(wavelength > 0.0))
        throw DomainError("emitter layout needs positive standoff and wavelength");
    const double cx = grid.x0 + 0.5 * (grid.I - 1) * grid.pitch;
    const double cy = grid.y0 + 0.5 * (grid.J - 1) * grid.pitch;
    const double dsx = wavelength / (grid.I * grid.pitch);
    const double dsy = wavelength / (grid.J * grid.pitch);
    std::vector<Point3> out;
    for (int a = 0; a < grid.I; ++a)
        for (int b = 0; b < grid.J; ++b)
        {
            const double sx = (a - grid.I / 2) * dsx;
            const double sy = (b - grid.J / 2) * dsy;
            const double sz2 = 1.0 - sx * sx - sy * sy;
            if (!(sz2 > 0.0))
                throw DomainError("pixel pitch is below the half-wavelength limit for this layout");
            const double sz = std::sqrt(sz2);
            out.push_back({cx + standoff * sx / sz, cy + standoff * sy / sz, standoff});
        }
    return out;
}

IlluminationEnsemble synthesize_field(const std::vector<Point3> &emitters, const PixelGrid &grid,
                                      double plane_height, int n_meas, double bandwidth, std::uint64_t seed,
                                      const FieldOptions &opt)
{
    if (n_meas < 1)
        throw ConfigError("N_m must be at least 1");
    if (emitters.empty())
        throw ConfigError("at least one emitter is required");
    if (!(bandwidth > 0.0))
        throw ConfigError("bandwidth must be positive");
    if (opt.oversample <= 1)
        throw ConfigError("sampling interval must exceed the coherence time 1/bandwidth");
    if (grid.I < 1 || grid.J < 1 || !(grid.pitch > 0.0))
        throw ConfigError("invalid pixel grid");

    const int M = grid.size();
    const int r = opt.oversample;
    const int a = opt.kernel_half_width;

    // Delays in units of 1/bandwidth, and complex attenuation with carrier phase.
    RMat btau(emitters.size(), M);
    CMat gain(emitters.size(), M);
    for (size_t i = 0; i < emitters.size(); ++i)
        for (int m = 0; m < M; ++m)
        {
            const double d = distance(emitters[i], grid.center(m, plane_height));
            if (!(d > 0.0))
                throw DomainError("emitter coincides with a pixel center");
            const double tau = d / kSpeedOfLight;
            btau(i, m) = tau * bandwidth;
            gain(i, m) = std::polar(1.0 / d, -2.0 * kPi * opt.carrier * tau);
        }

    // Per emitter, offsets j = n*r - k between measurement index and waveform sample index k
    // cover the kernel support of that emitter's delays.
    IlluminationEnsemble ens;
    ens.E = CMat::Zero(n_meas, M);
    for (size_t i = 0; i < emitters.size(); ++i)
    {
        const int jmin = static_cast<int>(std::floor(btau.row(i).minCoeff())) - a;
        const int jmax = static_cast<int>(std::ceil(btau.row(i).maxCoeff())) + a;
        const int taps = jmax - jmin + 1;
        const int n_wave = (n_meas - 1) * r + taps + 1;
        Rng rng(derive_seed(seed, {0x6769, i}));
        const CVec wave = rng.complex_normal_vec(n_wave);
        // s(t_n - tau) = sum_k c_k L(n r - B tau - k); substitute k = n r - j.
        CMat C(n_meas, taps);
        CMat K(taps, M);
        for (int n = 0; n < n_meas; ++n)
            for (int t = 0; t < taps; ++t)
                C(n, t) = wave(n * r - (jmin + t) + jmax);
        for (int t = 0; t < taps; ++t)
            for (int m = 0; m < M; ++m)
                K(t, m) = lanczos((jmin + t) - btau(i, m), a) * gain(i, m);
        ens.E.noalias() += C * K;
    }

    ens.grid = grid;
    ens.emitters = emitters;
    ens.plane_height = plane_height;
    ens.carrier = opt.carrier;
    ens.bandwidth = bandwidth;
    ens.sample_interval = r / bandwidth;
    return ens;
}

double max_row_correlation(const CMat &E)
{
    CMat N = E;
    for (Eigen::Index n = 0; n < N.rows(); ++n)
    {
        const double nn = N.row(n).norm();
        if (nn > 0.0)
            N.row(n) /= nn;
    }
    const CMat G = N * N.adjoint();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < G.rows(); ++i)
        for (Eigen::Index j = i + 1; j < G.cols(); ++j)
            worst = std::max(worst, std::abs(G(i, j)));
    return worst;
}

double noise_variance(const CMat &A, const CVec &x, double snr_db)
{
    if (std::isinf(snr_db) && snr_db > 0)
        return 0.0;
    double p = (A * x).squaredNorm() / static_cast<double>(A.rows());
    if (!(p > 0.0))
        p = A.squaredNorm() / static_cast<double>(A.rows() * A.cols());
    return p / db_to_linear(snr_db);
}

CVec measure(const CMat &E, const Scene &scene, double snr_db, std::uint64_t seed)
{
    if (scene.eps.size() != E.cols() || scene.rho.size() != E.cols())
        throw DomainError("scene has " + std::to_string(scene.eps.size()) + " pixels, field has " +
                          std::to_string(E.cols()));
    const CVec x = scene.eps.cwiseProduct(scene.rho.cast<cdouble>());
    CVec y = E * x;
    const double var = noise_variance(E, x, snr_db);
    if (var > 0.0)
    {
        Rng rng(seed);
        y += rng.complex_normal_vec(y.size(), var);
    }
    return y;
}

CVec measure(const IlluminationEnsemble &ens, const Scene &scene, double snr_db, std::uint64_t seed)
{
    return measure(ens.E, scene, snr_db, seed);
}

GIResult reconstruct(const CMat &E, const CVec &y, const RVec &rho, double ridge, const std::optional<CVec> &truth)
{
    if (!(ridge >= 0.0))
        throw DomainError("ridge must be non-negative");
    if (y.size() != E.rows() || rho.size() != E.cols())
        throw DomainError("reconstruct: dimension mismatch");
    const CMat A = E * rho.cast<cdouble>().asDiagonal();
    GIResult out;
    if (ridge == 0.0)
    {
        Eigen::ColPivHouseholderQR<CMat> qr(A);
        if (qr.rank() < A.cols())
            throw SingularityError("illumination matrix has rank " + std::to_string(qr.rank()) + " < M = " +
                                   std::to_string(A.cols()) + " pixels; use ridge > 0 or more measurements");
        out.eps_hat = qr.solve(y);
    }
    else
    {
        CMat gram = A.adjoint() * A;
        gram.diagonal().array() += ridge;
        Eigen::LDLT<CMat> ldlt(gram);
        if (ldlt.info() != Eigen::Success)
            throw SingularityError("regularized Gram matrix is singular");
        out.eps_hat = ldlt.solve(A.adjoint() * y);
    }
    if (truth)
    {
        if (truth->size() != out.eps_hat.size())
            throw DomainError("truth has wrong length");
        const double tn = truth->norm();
        const double en = (out.eps_hat - *truth).norm();
        out.rel_error = tn > 0.0 ? en / tn : en;
    }
    return out;
}

GIResult reconstruct(const IlluminationEnsemble &ens, const CVec &y, const RVec &rho, double ridge,
                     const std::optional<CVec> &truth)
{
    GIResult out = reconstruct(ens.E, y, rho, ridge, truth);
    if (!ens.emitters.empty() && ens.carrier > 0.0)
    {
        double lo_x = ens.emitters[0].x, hi_x = lo_x, lo_y = ens.emitters[0].y, hi_y = lo_y, z = 0.0;
        for (const auto &e : ens.emitters)
        {
            lo_x = std::min(lo_x, e.x);
            hi_x = std::max(hi_x, e.x);
            lo_y = std::min(lo_y, e.y);
            hi_y = std::max(hi_y, e.y);
            z += e.z;
        }
        const double extent = std::max(hi_x - lo_x, hi_y - lo_y);
        const double standoff = std::abs(z / ens.emitters.size() - ens.plane_height);
        if (extent > 0.0 && standoff > 0.0)
            out.resolution_bounds = resolution_bounds(extent, kSpeedOfLight / ens.carrier, standoff);
    }
    return out;
}

std::pair<double, double> resolution_bounds(double source_extent, double wavelength, double standoff)
{
    if (!(source_extent > 0.0) || !(wavelength > 0.0) || !(standoff > 0.0))
        throw DomainError("resolution_bounds: arguments must be positive");
    const double upper = standoff * wavelength / source_extent;
    return {upper / 2.0, upper};
}

RVec receiver_attenuation(const PixelGrid &grid, double plane_height, const Point3 &receiver)
{
    RVec rho(grid.size());
    for (int m = 0; m < grid.size(); ++m)
    {
        const double d = distance(grid.center(m, plane_height), receiver);
        if (!(d > 0.0))
            throw DomainError("receiver coincides with a pixel center");
        rho(m) = 1.0 / d;
    }
    return rho;
}

RMat scene_to_environment(const GIResult &result, const PixelGrid &grid, double threshold,
                          const RVec &height_channel)
{
    if (!(threshold > 0.0))
        throw DomainError("threshold must be positive");
    if (result.eps_hat.size() != grid.size() || height_channel.size() != grid.size())
        throw DomainError("scene_to_environment: dimension mismatch");
    RMat h = RMat::Zero(grid.I, grid.J);
    for (int m = 0; m < grid.size(); ++m)
        if (std::abs(result.eps_hat(m)) >= threshold)
            h(m / grid.J, m % grid.J) = height_channel(m);
    return h;
}

RMat downsample_heights(const RMat &fine, int nx, int ny)
{
    if (nx < 1 || ny < 1 || fine.rows() % nx != 0 || fine.cols() % ny != 0)
        throw DomainError("heightmap of " + std::to_string(fine.rows()) + "x" + std::to_string(fine.cols()) +
                          " does not tile into " + std::to_string(nx) + "x" + std::to_string(ny));
    const Eigen::Index bx = fine.rows() / nx, by = fine.cols() / ny;
    RMat out(nx, ny);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            out(i, j) = fine.block(i * bx, j * by, bx, by).maxCoeff();
    return out;
}

} // namespace starsim
