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

#ifndef STARSIM_CLI_COMMANDS_HPP
#define STARSIM_CLI_COMMANDS_HPP

#include <exception>
#include <ostream>
#include <string>

namespace starsim::cli
{

enum class OutputFormat
{
    csv,
    plot,
    both,
};

// Runs one subcommand. Returns the process exit status. Failures print a single line
//   starsim: error code=<n> kind=<kind> message=<text>
// to `err`.
int parse_and_dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

// The single-line error report for an exception, without trailing newline.
std::string error_line(const std::exception &e);
int exit_code_of(const std::exception &e);

} // namespace starsim::cli

#endif
