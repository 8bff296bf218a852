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

#ifndef STARSIM_CLI_CONFIG_HPP
#define STARSIM_CLI_CONFIG_HPP

#include "starsim/sim.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace starsim::cli
{

struct RunConfig
{
    Scenario scenario;
    std::string scenario_path;
    std::string out_dir = "out";
    int verbosity = 0;

    friend bool operator==(const RunConfig &, const RunConfig &) = default;
};

// Parses INI scenario text. Every problem is collected and reported in one
// ConfigError. A seed must come from [run] seed or from `seed_override`.
RunConfig validate_config(const std::string &text, std::optional<std::uint64_t> seed_override = std::nullopt);

// Reads and validates a scenario file. Relative heightmap paths resolve against the
// file's directory.
RunConfig load_config(const std::string &path, std::optional<std::uint64_t> seed_override = std::nullopt);

// INI text that validate_config parses back to an equal RunConfig.
std::string serialize_config(const RunConfig &cfg);

// Simulation parameters of the reference scenario with side x side BS subarrays, subSTARs
// and user arrays.
Scenario reference_scenario(int side);

} // namespace starsim::cli

#endif
