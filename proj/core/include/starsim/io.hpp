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

#ifndef STARSIM_IO_HPP
#define STARSIM_IO_HPP

#include "starsim/types.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace starsim
{

// Shortest round-trip text for a double ("inf", "-inf", "nan" for non-finite values).
std::string fmt_double(double v);

// Complex matrix as rows of interleaved "re im" pairs.
void write_complex_matrix(std::ostream &out, const CMat &M);
CMat read_complex_matrix(std::istream &in);
void write_real_matrix(std::ostream &out, const RMat &M);

// Writes `text` to path, creating parent directories. Throws IoError.
void write_file(const std::string &path, const std::string &text);

// Plain CSV table built row by row.
class CsvTable
{
  public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
    void add(std::vector<std::string> row);
    std::string str() const;
    size_t rows() const { return rows_.size(); }

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

struct Series
{
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Minimal SVG line chart.
std::string svg_line_plot(const std::string &title, const std::string &xlabel, const std::string &ylabel,
                          const std::vector<Series> &series, bool log_y = false);
// Grayscale raster of a real matrix (row 0 at the top).
std::string svg_raster(const std::string &title, const RMat &values);

} // namespace starsim

#endif
