/*
   Copyright 2026 The hbtsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "hbt/errors.hpp"

namespace hbt::cli {

namespace fs = std::filesystem;

std::string fnv1a_hex(const std::string& text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

OutputSet::OutputSet(fs::path dir) : dir_(std::move(dir))
{
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) {
        throw Error("cannot create output directory " + dir_.string() + ": " + ec.message());
    }
}

OutputSet::~OutputSet()
{
    if (committed_) {
        return;
    }
    std::error_code ec;
    for (const auto& p : written_) {
        fs::remove(p, ec);
    }
}

namespace {

void write_text(OutputSet& out, const std::string& name, const std::string& text)
{
    const fs::path p = out.path(name);
    out.track(p);
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    f << text;
    f.close();
    if (!f) {
        throw Error(p.string() + ": write failed");
    }
}

std::string xml_escape(const std::string& s)
{
    std::string o;
    for (char c : s) {
        switch (c) {
        case '&': o += "&amp;"; break;
        case '<': o += "&lt;"; break;
        case '>': o += "&gt;"; break;
        case '"': o += "&quot;"; break;
        default: o.push_back(c);
        }
    }
    return o;
}

} // namespace

std::string format_number(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(OutputSet& out, const std::string& name, const CsvTable& table,
               const std::vector<std::string>& header_comments)
{
    std::string text;
    for (const auto& c : header_comments) {
        text += "# " + c + "\n";
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        text += (i ? "," : "") + table.columns[i];
    }
    text += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            text += (i ? "," : "") + format_number(row[i]);
        }
        text += "\n";
    }
    write_text(out, name, text);
}

std::string render_svg(const Plot& plot, const std::string& comment)
{
    constexpr double W = 720, H = 450, L = 70, R = 20, T = 40, B = 55;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : plot.series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) {
                continue;
            }
            const double e = s.err.empty() ? 0.0 : s.err[i];
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i] - e);
            ymax = std::max(ymax, s.y[i] + e);
        }
    }
    if (!std::isfinite(xmin)) {
        xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    }
    if (xmax == xmin) {
        xmax = xmin + 1;
    }
    if (ymax == ymin) {
        ymax = ymin + 1;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"};
    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    if (!comment.empty()) {
        o << "<!-- " << xml_escape(comment) << " -->\n";
    }
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << xml_escape(plot.title) << "</text>\n";
    o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
      << H - T - B << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = ymin + (ymax - ymin) * i / 5.0;
        o << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
          << format_number(std::round(xv * 1000) / 1000) << "</text>\n";
        o << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
          << format_number(std::round(yv * 1000) / 1000) << "</text>\n";
    }
    o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">"
      << xml_escape(plot.x_label) << "</text>\n";
    o << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (T + H - B) / 2 << ")\">" << xml_escape(plot.y_label) << "</text>\n";

    for (std::size_t si = 0; si < plot.series.size(); ++si) {
        const auto& s = plot.series[si];
        const char* color = colors[si % 5];
        if (s.markers) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.y[i])) {
                    continue;
                }
                if (!s.err.empty()) {
                    o << "<line x1=\"" << px(s.x[i]) << "\" x2=\"" << px(s.x[i]) << "\" y1=\""
                      << py(s.y[i] - s.err[i]) << "\" y2=\"" << py(s.y[i] + s.err[i])
                      << "\" stroke=\"" << color << "\"/>\n";
                }
                o << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i])
                  << "\" r=\"2.5\" fill=\"none\" stroke=\"" << color << "\"/>\n";
            }
        } else {
            o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
              << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (std::isfinite(s.y[i])) {
                    o << px(s.x[i]) << "," << py(s.y[i]) << " ";
                }
            }
            o << "\"/>\n";
        }
        const double ly = T + 16 + 16.0 * static_cast<double>(si);
        o << "<text x=\"" << W - R - 8 << "\" y=\"" << ly << "\" text-anchor=\"end\" fill=\"" << color
          << "\">" << xml_escape(s.label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

void write_svg(OutputSet& out, const std::string& name, const Plot& plot, const std::string& comment)
{
    write_text(out, name, render_svg(plot, comment));
}

void write_json(OutputSet& out, const std::string& name, const nlohmann::json& doc)
{
    write_text(out, name, doc.dump(2) + "\n");
}

} // namespace hbt::cli
