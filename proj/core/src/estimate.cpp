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

#include "starsim/estimate.hpp"

#include "starsim/errors.hpp"
#include "starsim/rng.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace starsim
{

namespace
{
CMat dft(int rows, int cols)
{
    CMat F(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            F(r, c) = std::polar(1.0, -2.0 * kPi * r * c / rows);
    return F;
}

double total_power(const std::vector<CMat> &s)
{
    double p = 0.0;
    for (const auto &m : s)
        p += m.squaredNorm();
    return p;
}

// Z[i] = Y[i] X^* (X^T X^*)^{-1} = U diag(q[i]) A^T for noiseless data.
std::vector<CMat> project(const std::vector<CMat> &slices, const CMat &X)
{
    const CMat Xc = X.conjugate();
    const CMat gram = X.transpose() * Xc;
    Eigen::FullPivLU<CMat> lu(gram);
    if (!lu.isInvertible())
        throw SingularityError("pilot matrix does not have full column rank");
    const CMat P = Xc * lu.inverse();
    std::vector<CMat> Z;
    for (const auto &y : slices)
        Z.push_back(y * P);
    return Z;
}

CMat ls_right(const CMat &Zcat, const CMat &K)
{
    // Zcat = F K  ->  F = Zcat K^H (K K^H)^{-1}
    const CMat KK = K * K.adjoint();
    Eigen::LDLT<CMat> ldlt(KK);
    return ldlt.solve(K * Zcat.adjoint()).adjoint();
}
} // namespace

TrainingProtocol make_protocol(int L_B, int R, int T, int B)
{
    if (L_B < 1 || R < 1)
        throw DomainError("make_protocol: L_B and R must be positive");
    TrainingProtocol p;
    p.T = T > 0 ? T : L_B;
    p.B = B > 0 ? B : R;
    if (p.T < L_B)
        throw DomainError("training needs T >= L_B slots per block");
    if (p.B < R)
        throw DomainError("training needs B >= R blocks");
    p.X = dft(p.T, L_B);
    p.phase_schedule = dft(p.B, R);
    return p;
}

SeparatedChannel true_factors(const ChannelSet &ch, const CMat &W, int k)
{
    if (k < 0 || k >= ch.K())
        throw DomainError("user index out of range");
    const int Ns = ch.star.elements();
    SeparatedChannel f;
    f.U = ch.H_block(k, k);
    f.A = (ch.G.block(k * Ns, 0, Ns, ch.G.cols()) * W).transpose();
    return f;
}

std::vector<CMat> simulate_training(const CMat &U, const CMat &A, const TrainingProtocol &p, double snr_db,
                                    std::uint64_t seed)
{
    const Eigen::Index R = U.cols();
    if (A.cols() != R || p.phase_schedule.cols() != R || p.X.cols() != A.rows())
        throw DomainError("simulate_training: dimension mismatch");
    std::vector<CMat> Y;
    const CMat AX = A.transpose() * p.X.transpose();
    for (int i = 0; i < p.B; ++i)
        Y.push_back(U * p.phase_schedule.row(i).transpose().asDiagonal() * AX);
    if (!(std::isinf(snr_db) && snr_db > 0))
    {
        const double n = static_cast<double>(Y.size()) * Y.front().size();
        const double var = total_power(Y) / n / db_to_linear(snr_db);
        Rng rng(seed);
        for (auto &y : Y)
            y += rng.complex_normal_mat(y.rows(), y.cols(), var);
    }
    return Y;
}

std::vector<CMat> simulate_training(const ChannelSet &ch, const CMat &W, int k, const TrainingProtocol &p,
                                    double snr_db, std::uint64_t seed)
{
    const SeparatedChannel f = true_factors(ch, W, k);
    return simulate_training(f.U, f.A, p, snr_db, seed);
}

double slice_residual(const std::vector<CMat> &slices, const TrainingProtocol &p, const CMat &U, const CMat &A)
{
    const CMat AX = A.transpose() * p.X.transpose();
    double r = 0.0;
    for (int i = 0; i < static_cast<int>(slices.size()); ++i)
        r += (slices[i] - U * p.phase_schedule.row(i).transpose().asDiagonal() * AX).squaredNorm();
    return r;
}

FactorEstimates bals_fit(const std::vector<CMat> &slices, const TrainingProtocol &p, int rank, int max_iter,
                         double tol, std::uint64_t seed)
{
    if (static_cast<int>(slices.size()) != p.B || p.B < 1)
        throw DomainError("bals_fit: expected " + std::to_string(p.B) + " slices");
    if (rank != p.phase_schedule.cols())
        throw DomainError("bals_fit: rank must equal the phase schedule width");
    const Eigen::Index Nr = slices.front().rows();
    const Eigen::Index LB = p.X.cols();
    if (rank > Nr * LB)
        throw DomainError("bals_fit: rank exceeds the slice dimensions");
    for (const auto &y : slices)
        if (y.rows() != Nr || y.cols() != p.T)
            throw DomainError("bals_fit: slice dimension mismatch");

    const std::vector<CMat> Z = project(slices, p.X);
    const int B = p.B;
    CMat Zu(Nr, B * LB), Za(LB, B * Nr);
    for (int i = 0; i < B; ++i)
    {
        Zu.block(0, i * LB, Nr, LB) = Z[i];
        Za.block(0, i * Nr, LB, Nr) = Z[i].transpose();
    }

    Rng rng(seed);
    FactorEstimates est;
    est.A_hat = rng.complex_normal_mat(LB, rank);
    est.U_hat = CMat::Zero(Nr, rank);
    const double scale = std::max(total_power(slices), 1e-300);
    double prev = std::numeric_limits<double>::infinity();
    CMat Ku(rank, B * LB), Ka(rank, B * Nr);
    for (int it = 1; it <= max_iter; ++it)
    {
        for (int i = 0; i < B; ++i)
            Ku.block(0, i * LB, rank, LB) = p.phase_schedule.row(i).transpose().asDiagonal() * est.A_hat.transpose();
        est.U_hat = ls_right(Zu, Ku);
        for (int i = 0; i < B; ++i)
            Ka.block(0, i * Nr, rank, Nr) = p.phase_schedule.row(i).transpose().asDiagonal() * est.U_hat.transpose();
        est.A_hat = ls_right(Za, Ka);

        est.residual = slice_residual(slices, p, est.U_hat, est.A_hat);
        est.residual_trace.push_back(est.residual);
        est.iterations = it;
        const double rel = est.residual / scale;
        if (rel < 1e-28 || std::abs(prev - est.residual) <= tol * prev)
        {
            est.converged = true;
            break;
        }
        prev = est.residual;
    }
    return est;
}

AnchorRow sense_anchor(const CMat &A, const TrainingProtocol &p, int z, double snr_db, std::uint64_t seed)
{
    if (z < 0 || z >= A.rows())
        throw DomainError("anchor row index out of range");
    if (p.X.cols() != A.rows())
        throw DomainError("sense_anchor: pilot width does not match L_B");
    const CMat gram = p.X.adjoint() * p.X;
    Eigen::JacobiSVD<CMat> svd(gram);
    const RVec sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > 0.0) || sv(0) / sv(sv.size() - 1) > 1e12)
        throw SingularityError("pilot matrix is ill-conditioned");
    // Each element observes r_e = X A[:, e] + n; all R elements at once.
    CMat Rx = p.X * A;
    if (!(std::isinf(snr_db) && snr_db > 0))
    {
        const double var = Rx.squaredNorm() / static_cast<double>(Rx.size()) / db_to_linear(snr_db);
        Rng rng(seed);
        Rx += rng.complex_normal_mat(Rx.rows(), Rx.cols(), var);
    }
    const CMat Ahat = gram.ldlt().solve(p.X.adjoint() * Rx);
    AnchorRow a;
    a.z = z;
    a.values = Ahat.row(z).transpose();
    a.factor = AnchorFactor::A;
    a.source = AnchorSource::sensed;
    return a;
}

AnchorRow sense_anchor(const ChannelSet &ch, const CMat &W, int k, const TrainingProtocol &p, int z, double snr_db,
                       std::uint64_t seed)
{
    return sense_anchor(true_factors(ch, W, k).A, p, z, snr_db, seed);
}

FactorEstimates eliminate_ambiguity(const FactorEstimates &est, const AnchorRow &anchor)
{
    const CMat &F = anchor.factor == AnchorFactor::U ? est.U_hat : est.A_hat;
    if (anchor.z < 0 || anchor.z >= F.rows() || anchor.values.size() != F.cols())
        throw DomainError("anchor row does not match the factor dimensions");
    // U_hat = U D, A_hat = A D^{-1}; d holds the diagonal of D.
    CVec d(F.cols());
    for (Eigen::Index r = 0; r < F.cols(); ++r)
    {
        const cdouble known = anchor.values(r);
        const cdouble fit = F(anchor.z, r);
        if (std::abs(known) == 0.0 || std::abs(fit) == 0.0)
            throw SingularityError("anchor entry in column " + std::to_string(r) + " is zero");
        d(r) = anchor.factor == AnchorFactor::U ? fit / known : known / fit;
    }
    FactorEstimates out = est;
    out.U_hat = est.U_hat * d.cwiseInverse().asDiagonal();
    out.A_hat = est.A_hat * d.asDiagonal();
    return out;
}

double nmse(const CMat &est, const CMat &truth)
{
    if (est.rows() != truth.rows() || est.cols() != truth.cols())
        throw DomainError("nmse: dimension mismatch");
    const double t = truth.squaredNorm();
    if (!(t > 0.0))
        throw DomainError("nmse: reference is zero");
    return (est - truth).squaredNorm() / t;
}

CMat cascaded(const CMat &U, const CMat &A)
{
    if (U.cols() != A.cols())
        throw DomainError("cascaded: column mismatch");
    CMat C(U.rows() * A.rows(), U.cols());
    for (Eigen::Index r = 0; r < U.cols(); ++r)
        for (Eigen::Index i = 0; i < U.rows(); ++i)
            C.block(i * A.rows(), r, A.rows(), 1) = U(i, r) * A.col(r);
    return C;
}

} // namespace starsim
