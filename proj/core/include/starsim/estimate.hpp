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

#ifndef STARSIM_ESTIMATE_HPP
#define STARSIM_ESTIMATE_HPP

#include "starsim/channel.hpp"

#include <cstdint>
#include <vector>

namespace starsim
{

struct TrainingProtocol
{
    int B = 0;               // blocks
    int T = 0;               // slots per block
    CMat X;                  // T x L_B pilots, orthogonal columns
    CMat phase_schedule;     // B x R, row i is q[i]
};

// DFT pilots and DFT phase schedule. Zero T or B default to L_B and R.
TrainingProtocol make_protocol(int L_B, int R, int T = 0, int B = 0);

// U: (m_r n_r) x R receive-side factor (training combiner V = I, so U = H_kk).
// A: L_B x R transmit-side factor; row l is G_{k,l} w_l seen across the R elements of
// subSTAR k.
struct SeparatedChannel
{
    CMat U;
    CMat A;
};

SeparatedChannel true_factors(const ChannelSet &ch, const CMat &W, int k);

// Slices Y[i] = U diag(q[i]) A^T X^T plus complex Gaussian noise at the requested
// per-entry SNR (+inf: noiseless).
std::vector<CMat> simulate_training(const CMat &U, const CMat &A, const TrainingProtocol &p, double snr_db,
                                    std::uint64_t seed);
std::vector<CMat> simulate_training(const ChannelSet &ch, const CMat &W, int k, const TrainingProtocol &p,
                                    double snr_db, std::uint64_t seed);

struct FactorEstimates
{
    CMat U_hat;
    CMat A_hat;
    int iterations = 0;
    double residual = 0.0; // sum_i ||Y[i] - U diag(q[i]) A^T X^T||^2
    bool converged = false;
    std::vector<double> residual_trace;
};

// Block alternating least squares with the phase schedule known. Random complex Gaussian
// start drawn from seed.
FactorEstimates bals_fit(const std::vector<CMat> &slices, const TrainingProtocol &p, int rank, int max_iter = 500,
                         double tol = 1e-8, std::uint64_t seed = 0);

// Residual of a factor pair against the slices.
double slice_residual(const std::vector<CMat> &slices, const TrainingProtocol &p, const CMat &U, const CMat &A);

enum class AnchorFactor
{
    U,
    A,
};
enum class AnchorSource
{
    sensed,
    oracle,
};

struct AnchorRow
{
    int z = 0;
    CVec values;
    AnchorFactor factor = AnchorFactor::A;
    AnchorSource source = AnchorSource::sensed;
};

// Row z of A observed by the receive-capable STAR element chain: least squares on the
// training pilots with noise at snr_db.
AnchorRow sense_anchor(const CMat &A, const TrainingProtocol &p, int z, double snr_db, std::uint64_t seed);
AnchorRow sense_anchor(const ChannelSet &ch, const CMat &W, int k, const TrainingProtocol &p, int z, double snr_db,
                       std::uint64_t seed);

// Removes the diagonal scaling so that the anchored row matches exactly.
FactorEstimates eliminate_ambiguity(const FactorEstimates &est, const AnchorRow &anchor);

// ||est - truth||^2 / ||truth||^2
double nmse(const CMat &est, const CMat &truth);
// Column-wise Kronecker product u_r (x) a_r; invariant to the scaling ambiguity.
CMat cascaded(const CMat &U, const CMat &A);

} // namespace starsim

#endif
