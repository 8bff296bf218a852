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

#ifndef STARSIM_BEAM_HPP
#define STARSIM_BEAM_HPP

#include "starsim/channel.hpp"

#include <cstdint>
#include <vector>

namespace starsim
{

struct BeamformerSet
{
    CMat W;              // block diagonal (L_B m_t n_t) x L_B, unit-norm analog beams
    CMat F;              // L_B x K digital precoder, ||W f_k|| = 1
    std::vector<CVec> v; // receive combiners, entries of magnitude 1/sqrt(m_r n_r)
    std::vector<CVec> O; // per-subSTAR unit-modulus phases
    double power = 0.0;  // total transmit power P, watts
};

struct RateReport
{
    std::vector<double> per_user; // bits/s/Hz
    double sum = 0.0;
    std::vector<double> sir_db;
    std::vector<double> sinr;
    double noise_power = 0.0;
};

// sqrt(p) a_t(azimuth, elevation).
CVec active_tx_beam(const ArrayGeometry &g, double wavelength, double azimuth, double elevation, double p);
// sqrt(m_r n_r) a_r(azimuth, elevation), unit-modulus entries.
CVec active_rx_beam(const ArrayGeometry &g, double wavelength, double azimuth, double elevation);

// Unit-modulus phases q_e = conj((H^T v*)_e a_e) / |beta2| normalized per entry, where a is
// the field incident on the subSTAR. Makes v^H H diag(q) a real and positive.
CVec star_phase(const CMat &H_hat, const CVec &v_hat, const CVec &a, cdouble beta2_hat);

// (T^H T + (K sigma2 / P) W^H W)^{-1} T^H with columns scaled so ||W f_k|| = 1.
// P = 0 returns the limit (W^H W)^{-1} T^H, normalized the same way.
CMat mmse_precoder(const CMat &T, const CMat &W, double P, double sigma2);

// Block-diagonal analog precoder aimed from BS subarray k at subSTAR k.
CMat analog_precoder(const ChannelSet &ch);
// Combiners of every user aimed at its own subSTAR.
std::vector<CVec> combiners(const ChannelSet &ch);
// Field from BS subarray k (beam w_k) incident on subSTAR k.
CVec incident_field(const ChannelSet &ch, const CMat &W, int k, bool los_only = false);
// Geometric arrival steering vector at subSTAR k from BS subarray k.
CVec arrival_steering(const ChannelSet &ch, int k);

// Block-diagonal O^TR applied as a vector over all STAR elements.
CVec stack_phases(const std::vector<CVec> &O);

// T[k, :] = v_k^H H_k O G W (+ v_k^H Q_k W when include_direct).
CMat effective_channel(const ChannelSet &ch, const BeamformerSet &b, bool include_direct = false);

enum class PhaseMode
{
    optimal, // perfect CSI
    random,
};

// Analog beams, STAR phases and MMSE precoder for the whole system.
BeamformerSet design_beams(const ChannelSet &ch, double P, double sigma2, PhaseMode mode, std::uint64_t seed = 0);
// Same, with STAR phases supplied by the caller.
BeamformerSet design_beams(const ChannelSet &ch, double P, double sigma2, std::vector<CVec> phases);

// Per-user rates. With interference: SINR of the full received signal. Without: the
// interference term is dropped.
RateReport rate(const ChannelSet &ch, const BeamformerSet &b, double P, double sigma2, bool include_interference,
                bool include_direct = false);
RateReport rate_from_effective(const CMat &T, const BeamformerSet &b, double P, double sigma2,
                               bool include_interference);

} // namespace starsim

#endif
