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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hbt/frames.hpp"

namespace hbt::frames {

enum class FrameFormat { pgm, csv };

std::string_view to_string(FrameFormat f);
FrameFormat frame_format_from_string(std::string_view name);

/// Sidecar with pitch, centre column, seed and quantization metadata.
inline constexpr const char* kSidecarName = "stack.json";

/// frame_00042.pgm and so on.
std::string frame_filename(std::size_t index, FrameFormat format);

/// Raw P5 samples. maxval <= 255 stores one byte per sample, otherwise two
/// bytes, most significant first.
struct PgmImage {
    int width = 0;
    int height = 0;
    int maxval = 255;
    std::vector<std::uint16_t> samples;
};

PgmImage read_pgm(const std::filesystem::path& path);
/// `comment` (if non-empty) is written as a '#' line in the header.
void write_pgm(const std::filesystem::path& path, const PgmImage& image,
               const std::string& comment = {});

/// Comma-separated rows (one per y); lines starting with '#' are comments.
Image read_csv_frame(const std::filesystem::path& path);
void write_csv_frame(const std::filesystem::path& path, const Image& image,
                     const std::string& comment = {});

/// Writes one file per frame plus the sidecar into `dir` (created if needed)
/// and returns every path written. PGM output stores round(value * scale)
/// clipped to maxval, where maxval follows meta.bit_depth (8 bits or less:
/// 255, otherwise 65535).
std::vector<std::filesystem::path> save_stack(const FrameStack& stack,
                                              const std::filesystem::path& dir,
                                              FrameFormat format,
                                              const std::string& config_hash = {});

/// Reads the sidecar and every frame it lists. The sidecar's format must
/// match `format`.
FrameStack load_stack(const std::filesystem::path& dir, FrameFormat format);

/// As above, taking the format from the sidecar.
FrameStack load_stack(const std::filesystem::path& dir);

} // namespace hbt::frames
