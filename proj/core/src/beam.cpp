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

#include "starsim/beam.hpp"

#include "starsim/errors.hpp"
#include "starsim/rng.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace starsim
{

CVec active_tx_beam(const ArrayGeometry &g, double wavelength, double azimuth, double elevation, double p)
{
    if (!(p > 0.0))
        throw DomainError("transmit power per beam must be positive");
    return std::sqrt(p) * steering_upa(g, wavelength, azimuth, elevation);
}

CVec active_rx_beam(const ArrayGeometry &g, double wavelength, double azimuth, double elevation)
{
    return std::sqrt(static_cast<double>(g.elements())) * steering_upa(g, wavelength, azimuth, elevation);
}

CVec star_phase(const CMat &H_hat, const CVec &v_hat, const CVec &a, cdouble beta2_hat)
{
    if (H_hat.rows() != v_hat.size() || H_hat.cols() != a.size())
        throw DomainError("star_phase: dimension mismatch");
    if (std::abs(beta2_hat) == 0.0)
        throw SingularityError("star_phase: estimated LOS gain is zero");
    const CVec g = (H_hat.transpose() * v_hat.conjugate()).cwiseProduct(a);
    const double inv = 1.0 / std::abs(beta2_hat);
    CVec q(g.size());
    for (Eigen::Index e = 0; e < g.size(); ++e)
    {
        const cdouble c = std::conj(g(e)) * inv;
        q(e) = std::abs(c) > 0.0 ? c / std::abs(c) : cdouble(1.0, 0.0);
    }
    return q;
}

CMat mmse_precoder(const CMat &T, const CMat &W, double P, double sigma2)
{
    const Eigen::Index K = T.rows();
    if (T.cols() != W.cols())
        throw DomainError("mmse_precoder: T has " + std::to_string(T.cols()) + " columns, W has " +
                          std::to_string(W.cols()));
    if (!(P >= 0.0) || !(sigma2 >= 0.0))
        throw DomainError("mmse_precoder: power and noise must be non-negative");
    const CMat WW = W.adjoint() * W;
    CMat F0;
    if (P == 0.0)
    {
        Eigen::LLT<CMat> llt(WW);
        if (llt.info() != Eigen::Success)
            throw SingularityError("mmse_precoder: W^H W is singular");
        F0 = llt.solve(T.adjoint());
    }
    else
    {
        const CMat A = T.adjoint() * T + (static_cast<double>(K) * sigma2 / P) * WW;
        Eigen::LLT<CMat> llt(A);
        if (llt.info() != Eigen::Success)
            throw SingularityError("mmse_precoder: regularized Gram matrix is singular");
        F0 = llt.solve(T.adjoint());
        // LLT accepts numerically semidefinite input; check the solve.
        if (!F0.allFinite())
            throw SingularityError("mmse_precoder: regularized Gram matrix is singular");
    }
    for (Eigen::Index k = 0; k < F0.cols(); ++k)
    {
        const double n = (W * F0.col(k)).norm();
        if (!(n > 0.0) || !std::isfinite(n))
            throw SingularityError("mmse_precoder: precoder column " + std::to_string(k) + " vanishes");
        F0.col(k) /= n;
    }
    return F0;
}

CMat analog_precoder(const ChannelSet &ch)
{
    const int L = ch.LB(), Nt = ch.bs.elements();
    CMat W = CMat::Zero(L * Nt, L);
    for (int k = 0; k < L; ++k)
    {
        const PathParams &tx = ch.g_link(k, k).tx;
        W.block(k * Nt, k, Nt, 1) = steering_upa(ch.bs, ch.wavelength, tx.azimuth, tx.elevation);
    }
    return W;
}

std::vector<CVec> combiners(const ChannelSet &ch)
{
    std::vector<CVec> v;
    for (int k = 0; k < ch.K(); ++k)
    {
        const PathParams &rx = ch.h_link(k, k).rx;
        v.push_back(steering_upa(ch.user, ch.wavelength, rx.azimuth, rx.elevation));
    }
    return v;
}

CVec incident_field(const ChannelSet &ch, const CMat &W, int k, bool los_only)
{
    const int Ns = ch.star.elements(), Nt = ch.bs.elements();
    const CMat &G = los_only ? ch.G_los : ch.G;
    return G.block(k * Ns, k * Nt, Ns, Nt) * W.block(k * Nt, k, Nt, 1);
}

CVec arrival_steering(const ChannelSet &ch, int k)
{
    const PathParams &rx = ch.g_link(k, k).rx;
    return steering_upa(ch.star, ch.wavelength, rx.azimuth, rx.elevation);
}

CVec stack_phases(const std::vector<CVec> &O)
{
    Eigen::Index n = 0;
    for (const auto &o : O)
        n += o.size();
    CVec out(n);
    Eigen::Index at = 0;
    for (const auto &o : O)
    {
        out.segment(at, o.size()) = o;
        at += o.size();
    }
    return out;
}

CMat effective_channel(const ChannelSet &ch, const BeamformerSet &b, bool include_direct)
{
    const CVec o = stack_phases(b.O);
    if (o.size() != ch.G.rows())
        throw DomainError("effective_channel: STAR phase count does not match the channel");
    const CMat OGW = o.asDiagonal() * (ch.G * b.W);
    CMat T(ch.K(), b.W.cols());
    for (int k = 0; k < ch.K(); ++k)
    {
        T.row(k) = b.v[k].adjoint() * ch.H[k] * OGW;
        if (include_direct && !ch.Q.empty())
            T.row(k) += b.v[k].adjoint() * ch.Q[k] * b.W;
    }
    return T;
}

namespace
{
BeamformerSet finish(const ChannelSet &ch, BeamformerSet b, double P, double sigma2)
{
    b.power = P;
    const CMat T = effective_channel(ch, b);
    b.F = mmse_precoder(T, b.W, P, sigma2);
    return b;
}
} // namespace

BeamformerSet design_beams(const ChannelSet &ch, double P, double sigma2, PhaseMode mode, std::uint64_t seed)
{
    BeamformerSet b;
    b.W = analog_precoder(ch);
    b.v = combiners(ch);
    Rng rng(seed);
    for (int k = 0; k < ch.K(); ++k)
    {
        if (mode == PhaseMode::random)
        {
            CVec q(ch.star.elements());
            for (Eigen::Index e = 0; e < q.size(); ++e)
                q(e) = rng.unit_phase();
            b.O.push_back(q);
            continue;
        }
        b.O.push_back(star_phase(ch.H_block(k, k), b.v[k], incident_field(ch, b.W, k), ch.h_link(k, k).rx.gain));
    }
    return finish(ch, std::move(b), P, sigma2);
}

BeamformerSet design_beams(const ChannelSet &ch, double P, double sigma2, std::vector<CVec> phases)
{
    BeamformerSet b;
    b.W = analog_precoder(ch);
    b.v = combiners(ch);
    if (static_cast<int>(phases.size()) != ch.LS())
        throw DomainError("design_beams: need one phase vector per subSTAR");
    b.O = std::move(phases);
    return finish(ch, std::move(b), P, sigma2);
}

RateReport rate_from_effective(const CMat &T, const BeamformerSet &b, double P, double sigma2,
                               bool include_interference)
{
    if (!(sigma2 > 0.0))
        throw DomainError("noise power must be positive");
    if (!(P >= 0.0))
        throw DomainError("transmit power must be non-negative");
    const Eigen::Index K = T.rows();
    if (b.F.rows() != T.cols() || b.F.cols() != K || static_cast<Eigen::Index>(b.v.size()) != K)
        throw DomainError("rate: dimension mismatch");
    RateReport r;
    r.noise_power = sigma2;
    const CMat TF = T * b.F;
    const double pk = P / static_cast<double>(K);
    for (Eigen::Index k = 0; k < K; ++k)
    {
        const double sig = pk * std::norm(TF(k, k));
        double intf = 0.0;
        for (Eigen::Index i = 0; i < K; ++i)
            if (i != k)
                intf += pk * std::norm(TF(k, i));
        const double noise = sigma2 * b.v[k].squaredNorm();
        const double sinr = sig / ((include_interference ? intf : 0.0) + noise);
        r.sinr.push_back(sinr);
        r.per_user.push_back(std::log2(1.0 + sinr));
        r.sir_db.push_back(intf > 0.0 ? 10.0 * std::log10(sig / intf) : std::numeric_limits<double>::infinity());
        r.sum += r.per_user.back();
    }
    return r;
}

RateReport rate(const ChannelSet &ch, const BeamformerSet &b, double P, double sigma2, bool include_interference,
                bool include_direct)
{
    return rate_from_effective(effective_channel(ch, b, include_direct), b, P, sigma2, include_interference);
}

} // namespace starsim
