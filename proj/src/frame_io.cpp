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

#include "hbt/frame_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"

#include "hbt/errors.hpp"

namespace hbt::frames {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kIndexDigits = 5;

[[noreturn]] void parse_fail(const fs::path& path, std::size_t offset, const std::string& what)
{
    throw ParseError(path.string() + ": byte offset " + std::to_string(offset) + ": " + what);
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(path.string() + ": cannot open file");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::ofstream open_out(const fs::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(path.string() + ": cannot open for writing");
    }
    return out;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

/// Reads one decimal header field, skipping whitespace and '#' comments.
int pgm_header_int(const std::string& data, std::size_t& pos, const fs::path& path,
                   const char* field)
{
    for (;;) {
        while (pos < data.size() && is_space(data[pos])) {
            ++pos;
        }
        if (pos < data.size() && data[pos] == '#') {
            while (pos < data.size() && data[pos] != '\n') {
                ++pos;
            }
            continue;
        }
        break;
    }
    const std::size_t start = pos;
    int value = 0;
    const auto [ptr, ec] = std::from_chars(data.data() + pos, data.data() + data.size(), value);
    if (ec != std::errc{} || value <= 0) {
        parse_fail(path, start, std::string("malformed PGM header: expected positive ") + field);
    }
    pos = static_cast<std::size_t>(ptr - data.data());
    return value;
}

std::string format_double(double v)
{
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return {buf, static_cast<std::size_t>(n)};
}

} // namespace

std::string_view to_string(FrameFormat f) { return f == FrameFormat::pgm ? "pgm" : "csv"; }

FrameFormat frame_format_from_string(std::string_view name)
{
    if (name == "pgm") {
        return FrameFormat::pgm;
    }
    if (name == "csv") {
        return FrameFormat::csv;
    }
    throw ConfigError("unknown frame format '" + std::string(name) + "' (expected pgm or csv)");
}

std::string frame_filename(std::size_t index, FrameFormat format)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%0*zu.%s", kIndexDigits, index,
                  format == FrameFormat::pgm ? "pgm" : "csv");
    return buf;
}

PgmImage read_pgm(const fs::path& path)
{
    const std::string data = read_file(path);
    if (data.size() < 2 || data[0] != 'P' || data[1] != '5') {
        parse_fail(path, 0, "not a binary PGM (expected magic 'P5')");
    }
    std::size_t pos = 2;
    PgmImage img;
    img.width = pgm_header_int(data, pos, path, "width");
    img.height = pgm_header_int(data, pos, path, "height");
    img.maxval = pgm_header_int(data, pos, path, "maxval");
    if (img.maxval > 65535) {
        parse_fail(path, pos, "maxval " + std::to_string(img.maxval) + " exceeds 65535");
    }
    if (pos >= data.size() || !is_space(data[pos])) {
        parse_fail(path, pos, "expected a single whitespace byte after maxval");
    }
    ++pos;

    const std::size_t bytes_per_sample = img.maxval > 255 ? 2 : 1;
    const std::size_t count = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
    const std::size_t expected = count * bytes_per_sample;
    const std::size_t available = data.size() - pos;
    if (available < expected) {
        parse_fail(path, pos,
                   "truncated pixel data: expected " + std::to_string(expected) + " bytes, found " +
                       std::to_string(available));
    }
    img.samples.resize(count);
    const auto* bytes = reinterpret_cast<const unsigned char*>(data.data() + pos);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint16_t v = 0;
        if (bytes_per_sample == 2) {
            v = static_cast<std::uint16_t>((bytes[2 * i] << 8) | bytes[2 * i + 1]);
        } else {
            v = bytes[i];
        }
        if (v > img.maxval) {
            parse_fail(path, pos + i * bytes_per_sample,
                       "sample " + std::to_string(v) + " exceeds maxval " + std::to_string(img.maxval));
        }
        img.samples[i] = v;
    }
    return img;
}

void write_pgm(const fs::path& path, const PgmImage& image, const std::string& comment)
{
    if (image.maxval < 1 || image.maxval > 65535) {
        throw Error("PGM maxval must be in [1, 65535]");
    }
    if (image.samples.size() != static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height)) {
        throw Error("PGM sample count does not match dimensions");
    }
    std::string out = "P5\n";
    if (!comment.empty()) {
        out += "# " + comment + "\n";
    }
    out += std::to_string(image.width) + " " + std::to_string(image.height) + "\n" +
           std::to_string(image.maxval) + "\n";
    const bool wide = image.maxval > 255;
    out.reserve(out.size() + image.samples.size() * (wide ? 2 : 1));
    for (std::uint16_t v : image.samples) {
        if (wide) {
            out.push_back(static_cast<char>(v >> 8));
        }
        out.push_back(static_cast<char>(v & 0xff));
    }
    auto f = open_out(path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) {
        throw Error(path.string() + ": write failed");
    }
}

Image read_csv_frame(const fs::path& path)
{
    const std::string data = read_file(path);
    Image img;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos < data.size()) {
        const std::size_t line_start = pos;
        std::size_t eol = data.find('\n', pos);
        if (eol == std::string::npos) {
            eol = data.size();
        }
        ++line_no;
        std::string_view line(data.data() + pos, eol - pos);
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::vector<double> row;
        std::size_t col_start = 0;
        while (col_start <= line.size()) {
            std::size_t comma = line.find(',', col_start);
            if (comma == std::string_view::npos) {
                comma = line.size();
            }
            std::string_view cell = line.substr(col_start, comma - col_start);
            while (!cell.empty() && is_space(cell.front())) {
                cell.remove_prefix(1);
            }
            while (!cell.empty() && is_space(cell.back())) {
                cell.remove_suffix(1);
            }
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
                parse_fail(path, line_start + col_start,
                           "line " + std::to_string(line_no) + ": malformed number '" +
                               std::string(cell) + "'");
            }
            row.push_back(v);
            col_start = comma + 1;
        }
        if (img.width == 0) {
            img.width = static_cast<int>(row.size());
        } else if (static_cast<int>(row.size()) != img.width) {
            parse_fail(path, line_start,
                       "line " + std::to_string(line_no) + ": expected " + std::to_string(img.width) +
                           " columns, found " + std::to_string(row.size()));
        }
        img.pixels.insert(img.pixels.end(), row.begin(), row.end());
        ++img.height;
    }
    if (img.height == 0) {
        parse_fail(path, 0, "no pixel rows");
    }
    return img;
}

void write_csv_frame(const fs::path& path, const Image& image, const std::string& comment)
{
    std::string out;
    if (!comment.empty()) {
        out += "# " + comment + "\n";
    }
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            if (x > 0) {
                out.push_back(',');
            }
            out += format_double(image.at(x, y));
        }
        out.push_back('\n');
    }
    auto f = open_out(path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) {
        throw Error(path.string() + ": write failed");
    }
}

std::vector<fs::path> save_stack(const FrameStack& stack, const fs::path& dir, FrameFormat format,
                                 const std::string& config_hash)
{
    stack.validate();
    fs::create_directories(dir);
    const int maxval = stack.meta.bit_depth > 0 && stack.meta.bit_depth <= 8 ? 255 : 65535;
    const std::string comment = config_hash.empty() ? std::string{} : "config_hash: " + config_hash;

    std::vector<fs::path> written;
    try {
        for (std::size_t j = 0; j < stack.frames.size(); ++j) {
            const fs::path path = dir / frame_filename(j, format);
            const Image& f = stack.frames[j];
            if (format == FrameFormat::pgm) {
                PgmImage img;
                img.width = f.width;
                img.height = f.height;
                img.maxval = maxval;
                img.samples.reserve(f.pixels.size());
                for (double v : f.pixels) {
                    const double q = std::min<double>(maxval, std::round(v * stack.meta.intensity_scale));
                    img.samples.push_back(static_cast<std::uint16_t>(q));
                }
                written.push_back(path);
                write_pgm(path, img, comment);
            } else {
                written.push_back(path);
                write_csv_frame(path, f, comment);
            }
        }

        json side;
        side["format"] = std::string(to_string(format));
        side["width"] = stack.width();
        side["height"] = stack.height();
        side["n_frames"] = stack.frames.size();
        side["index_digits"] = kIndexDigits;
        side["pixel_pitch_mm"] = stack.pixel_pitch_mm;
        side["center_x"] = stack.center_x;
        side["seed"] = stack.meta.seed;
        side["statistics"] = stack.meta.statistics;
        side["fringe_period_px"] = stack.meta.fringe_period_px;
        side["bit_depth"] = stack.meta.bit_depth;
        side["intensity_scale"] = stack.meta.intensity_scale;
        side["speckle_rho_px"] = stack.meta.speckle_rho_px;
        if (format == FrameFormat::pgm) {
            side["maxval"] = maxval;
        }
        if (!config_hash.empty()) {
            side["config_hash"] = config_hash;
        }
        const fs::path sidecar = dir / kSidecarName;
        written.push_back(sidecar);
        auto out = open_out(sidecar);
        out << side.dump(2) << "\n";
        if (!out) {
            throw Error(sidecar.string() + ": write failed");
        }
    } catch (...) {
        std::error_code ec;
        for (const auto& p : written) {
            fs::remove(p, ec);
        }
        throw;
    }
    return written;
}

namespace {

template <class T>
T sidecar_field(const json& side, const fs::path& path, const char* key)
{
    if (!side.contains(key)) {
        throw ParseError(path.string() + ": sidecar is missing required field '" + key + "'");
    }
    try {
        return side.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": sidecar field '" + key + "' has the wrong type: " + e.what());
    }
}

} // namespace

FrameStack load_stack(const fs::path& dir)
{
    const fs::path sidecar = dir / kSidecarName;
    if (!fs::exists(sidecar)) {
        throw ParseError(sidecar.string() + ": metadata sidecar not found");
    }
    json side;
    try {
        side = json::parse(read_file(sidecar));
    } catch (const json::parse_error& e) {
        throw ParseError(sidecar.string() + ": byte offset " + std::to_string(e.byte) +
                         ": invalid JSON");
    }
    const FrameFormat format = frame_format_from_string(sidecar_field<std::string>(side, sidecar, "format"));
    const int width = sidecar_field<int>(side, sidecar, "width");
    const int height = sidecar_field<int>(side, sidecar, "height");
    const auto n_frames = sidecar_field<std::size_t>(side, sidecar, "n_frames");

    FrameStack stack;
    stack.pixel_pitch_mm = sidecar_field<double>(side, sidecar, "pixel_pitch_mm");
    stack.center_x = sidecar_field<int>(side, sidecar, "center_x");
    if (side.contains("seed")) {
        stack.meta.seed = sidecar_field<std::uint64_t>(side, sidecar, "seed");
    }
    stack.meta.statistics = side.value("statistics", std::string("unknown"));
    stack.meta.fringe_period_px = side.value("fringe_period_px", 0.0);
    stack.meta.bit_depth = side.value("bit_depth", 0);
    stack.meta.intensity_scale = side.value("intensity_scale", 1.0);
    stack.meta.speckle_rho_px = side.value("speckle_rho_px", 0.0);
    if (format == FrameFormat::pgm && !(stack.meta.intensity_scale > 0.0)) {
        throw ParseError(sidecar.string() + ": intensity_scale must be positive");
    }

    stack.frames.reserve(n_frames);
    for (std::size_t j = 0; j < n_frames; ++j) {
        const fs::path path = dir / frame_filename(j, format);
        Image img;
        if (format == FrameFormat::pgm) {
            const PgmImage pgm = read_pgm(path);
            img = Image(pgm.width, pgm.height);
            for (std::size_t i = 0; i < pgm.samples.size(); ++i) {
                img.pixels[i] = pgm.samples[i] / stack.meta.intensity_scale;
            }
        } else {
            img = read_csv_frame(path);
        }
        if (img.width != width || img.height != height) {
            throw ParseError(path.string() + ": frame is " + std::to_string(img.width) + "x" +
                             std::to_string(img.height) + ", sidecar says " + std::to_string(width) +
                             "x" + std::to_string(height));
        }
        stack.frames.push_back(std::move(img));
    }
    stack.validate();
    return stack;
}

FrameStack load_stack(const fs::path& dir, FrameFormat format)
{
    const fs::path sidecar = dir / kSidecarName;
    if (fs::exists(sidecar)) {
        const json side = json::parse(read_file(sidecar), nullptr, false);
        if (!side.is_discarded() && side.contains("format") && side["format"].is_string() &&
            side["format"].get<std::string>() != to_string(format)) {
            throw ParseError(sidecar.string() + ": stack is stored as " +
                             side["format"].get<std::string>() + ", not " +
                             std::string(to_string(format)));
        }
    }
    return load_stack(dir);
}

} // namespace hbt::frames
