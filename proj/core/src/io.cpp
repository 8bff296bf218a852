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

#include "starsim/io.hpp"

#include "starsim/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace starsim
{

std::string fmt_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_complex_matrix(std::ostream &out, const CMat &M)
{
    for (Eigen::Index r = 0; r < M.rows(); ++r)
    {
        for (Eigen::Index c = 0; c < M.cols(); ++c)
            out << (c ? " " : "") << fmt_double(M(r, c).real()) << ' ' << fmt_double(M(r, c).imag());
        out << '\n';
    }
}

CMat read_complex_matrix(std::istream &in)
{
    std::vector<std::vector<cdouble>> rows;
    std::string line;
    while (std::getline(in, line))
    {
        std::istringstream ls(line);
        std::vector<double> vals;
        double v;
        while (ls >> v)
            vals.push_back(v);
        if (!ls.eof())
            throw FormatError("complex matrix: non-numeric entry");
        if (vals.empty())
            continue;
        if (vals.size() % 2)
            throw FormatError("complex matrix: odd number of values in a row");
        std::vector<cdouble> row;
        for (size_t i = 0; i < vals.size(); i += 2)
            row.emplace_back(vals[i], vals[i + 1]);
        if (!rows.empty() && row.size() != rows.front().size())
            throw FormatError("complex matrix: ragged rows");
        rows.push_back(std::move(row));
    }
    CMat M(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < rows[r].size(); ++c)
            M(r, c) = rows[r][c];
    return M;
}

void write_real_matrix(std::ostream &out, const RMat &M)
{
    for (Eigen::Index r = 0; r < M.rows(); ++r)
    {
        for (Eigen::Index c = 0; c < M.cols(); ++c)
            out << (c ? " " : "") << fmt_double(M(r, c));
        out << '\n';
    }
}

void write_file(const std::string &path, const std::string &text)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    const fs::path p(path);
    if (p.has_parent_path())
        fs::create_directories(p.parent_path(), ec);
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot write '" + path + "'");
    f << text;
    if (!f)
        throw IoError("write failed for '" + path + "'");
}

void CsvTable::add(std::vector<std::string> row)
{
    if (row.size() != header_.size())
        throw DomainError("CSV row has " + std::to_string(row.size()) + " fields, header has " +
                          std::to_string(header_.size()));
    rows_.push_back(std::move(row));
}

std::string CsvTable::str() const
{
    std::ostringstream os;
    auto put = [&](const std::vector<std::string> &r) {
        for (size_t i = 0; i < r.size(); ++i)
            os << (i ? "," : "") << r[i];
        os << '\n';
    };
    put(header_);
    for (const auto &r : rows_)
        put(r);
    return os.str();
}

namespace
{
const char *kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string esc(const std::string &s)
{
    std::string o;
    for (char c : s)
    {
        if (c == '<')
            o += "&lt;";
        else if (c == '>')
            o += "&gt;";
        else if (c == '&')
            o += "&amp;";
        else
            o += c;
    }
    return o;
}
} // namespace

std::string svg_line_plot(const std::string &title, const std::string &xlabel, const std::string &ylabel,
                          const std::vector<Series> &series, bool log_y)
{
    const double W = 640, H = 420, L = 70, R = 150, T = 40, B = 50;
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    auto ty = [&](double y) { return log_y ? std::log10(std::max(y, 1e-300)) : y; };
    for (const auto &s : series)
        for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
        {
            if (!std::isfinite(s.y[i]))
                continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    if (x0 > x1)
        x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0)
        x1 = x0 + 1;
    if (y1 == y0)
        y1 = y0 + 1;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (ty(y) - y0) / (y1 - y0) * (H - T - B); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << esc(title) << "</text>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i)
    {
        const double xv = x0 + (x1 - x0) * i / 4.0, yv = y0 + (y1 - y0) * i / 4.0;
        const double xp = L + (W - L - R) * i / 4.0, yp = H - B - (H - T - B) * i / 4.0;
        os << "<text x=\"" << xp << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\" font-size=\"11\">"
           << fmt_double(std::round(xv * 100) / 100) << "</text>\n";
        os << "<text x=\"" << L - 6 << "\" y=\"" << yp + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
           << (log_y ? "1e" : "") << fmt_double(std::round(yv * 100) / 100) << "</text>\n";
    }
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\" font-size=\"12\">"
       << esc(xlabel) << "</text>\n";
    os << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
       << (T + H - B) / 2 << ")\">" << esc(ylabel) << "</text>\n";
    for (size_t s = 0; s < series.size(); ++s)
    {
        const char *col = kColors[s % 6];
        os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\" points=\"";
        for (size_t i = 0; i < series[s].x.size() && i < series[s].y.size(); ++i)
            if (std::isfinite(series[s].y[i]))
                os << px(series[s].x[i]) << ',' << py(series[s].y[i]) << ' ';
        os << "\"/>\n";
        const double ly = T + 16 + 18 * s;
        os << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly
           << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << W - R + 34 << "\" y=\"" << ly + 4 << "\" font-size=\"11\">" << esc(series[s].label)
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string svg_raster(const std::string &title, const RMat &values)
{
    const double cell = 12, top = 30;
    const double lo = values.size() ? values.minCoeff() : 0.0;
    const double hi = values.size() ? values.maxCoeff() : 1.0;
    const double span = hi > lo ? hi - lo : 1.0;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << values.cols() * cell + 20 << "\" height=\""
       << values.rows() * cell + top + 10 << "\">\n";
    os << "<text x=\"10\" y=\"20\" font-size=\"13\">" << esc(title) << "</text>\n";
    for (Eigen::Index r = 0; r < values.rows(); ++r)
        for (Eigen::Index c = 0; c < values.cols(); ++c)
        {
            const int g = static_cast<int>(std::lround(255.0 * (values(r, c) - lo) / span));
            os << "<rect x=\"" << 10 + c * cell << "\" y=\"" << top + r * cell << "\" width=\"" << cell
               << "\" height=\"" << cell << "\" fill=\"rgb(" << g << ',' << g << ',' << g << ")\"/>\n";
        }
    os << "</svg>\n";
    return os.str();
}

} // namespace starsim
