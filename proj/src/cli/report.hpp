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

#pragma once

// CSV / SVG / JSON emission for the command-line front end.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace hbt::cli {

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

/// Files written during one command. Unless committed, they are deleted when
/// the set goes out of scope (a failed run leaves no partial output).
class OutputSet {
public:
    explicit OutputSet(std::filesystem::path dir);
    ~OutputSet();
    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path path(const std::string& name) const { return dir_ / name; }
    void track(const std::filesystem::path& p) { written_.push_back(p); }
    void commit() { committed_ = true; }
    const std::vector<std::filesystem::path>& written() const { return written_; }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> written_;
    bool committed_ = false;
};

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Fixed "%.17g" formatting (NaN as "nan") so identical inputs give identical bytes.
std::string format_number(double v);

void write_csv(OutputSet& out, const std::string& name, const CsvTable& table,
               const std::vector<std::string>& header_comments);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> err; ///< optional error bars, drawn when non-empty
    bool markers = false;    ///< points instead of a line
    bool dashed = false;
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
};

/// Self-contained SVG line plot.
std::string render_svg(const Plot& plot, const std::string& comment);
void write_svg(OutputSet& out, const std::string& name, const Plot& plot,
               const std::string& comment);

void write_json(OutputSet& out, const std::string& name, const nlohmann::json& doc);

} // namespace hbt::cli
