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

#ifndef STARSIM_ERRORS_HPP
#define STARSIM_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace starsim
{

// Process exit codes used by the command-line tool.
enum class ExitCode : int
{
    ok = 0,
    config = 2,
    infeasible = 3,
    singular = 4,
    io = 5,
    star_unnecessary = 6,
};

// Base class of all library errors. Carries the exit code the CLI maps it to.
class Error : public std::runtime_error
{
  public:
    Error(ExitCode code, const std::string &msg) : std::runtime_error(msg), code_(code) {}
    ExitCode code() const noexcept { return code_; }

  private:
    ExitCode code_;
};

// Invalid argument or out-of-domain input.
class DomainError : public Error
{
  public:
    explicit DomainError(const std::string &msg) : Error(ExitCode::config, msg) {}
};

// Malformed textual input (heightmaps, matrices).
class FormatError : public Error
{
  public:
    explicit FormatError(const std::string &msg) : Error(ExitCode::config, msg) {}
};

// Invalid configuration; may aggregate several problems.
class ConfigError : public Error
{
  public:
    explicit ConfigError(const std::string &msg) : Error(ExitCode::config, msg) {}
    explicit ConfigError(std::vector<std::string> problems)
        : Error(ExitCode::config, join(problems)), problems_(std::move(problems))
    {
    }
    const std::vector<std::string> &problems() const noexcept { return problems_; }

  private:
    static std::string join(const std::vector<std::string> &p)
    {
        std::string s;
        for (size_t i = 0; i < p.size(); ++i)
            s += (i ? "; " : "") + p[i];
        return s;
    }
    std::vector<std::string> problems_;
};

// No STAR position satisfies the placement constraints.
class InfeasibleError : public Error
{
  public:
    InfeasibleError(const std::string &msg, std::vector<std::string> violated)
        : Error(ExitCode::infeasible, msg), violated_(std::move(violated))
    {
    }
    const std::vector<std::string> &violated() const noexcept { return violated_; }

  private:
    std::vector<std::string> violated_;
};

// Singular or rank-deficient linear system.
class SingularityError : public Error
{
  public:
    explicit SingularityError(const std::string &msg) : Error(ExitCode::singular, msg) {}
};

// Direct BS-user line of sight exists, so no STAR is needed.
class StarUnnecessaryError : public Error
{
  public:
    explicit StarUnnecessaryError(const std::string &msg) : Error(ExitCode::star_unnecessary, msg) {}
};

class IoError : public Error
{
  public:
    explicit IoError(const std::string &msg) : Error(ExitCode::io, msg) {}
};

// Error raised inside a pipeline stage, tagged with the stage name.
class StageError : public Error
{
  public:
    StageError(std::string stage, const Error &inner)
        : Error(inner.code(), stage + ": " + inner.what()), stage_(std::move(stage))
    {
    }
    const std::string &stage() const noexcept { return stage_; }

  private:
    std::string stage_;
};

} // namespace starsim

#endif
