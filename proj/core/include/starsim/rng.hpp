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

#ifndef STARSIM_RNG_HPP
#define STARSIM_RNG_HPP

#include "starsim/types.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace starsim
{

// Derives an independent stream seed from a master seed and a path of labels.
// Pure function of its inputs, so results never depend on scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

// Thin wrapper over mt19937_64 with the draws used throughout the simulator.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0)
    {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

    // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    cdouble complex_normal(double variance = 1.0)
    {
        const double s = std::sqrt(variance / 2.0);
        const double re = normal();
        const double im = normal();
        return {s * re, s * im};
    }
    cdouble unit_phase() { return std::polar(1.0, uniform(-kPi, kPi)); }

    CVec complex_normal_vec(Eigen::Index n, double variance = 1.0);
    CMat complex_normal_mat(Eigen::Index rows, Eigen::Index cols, double variance = 1.0);

    std::mt19937_64 &engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
};

} // namespace starsim

#endif
