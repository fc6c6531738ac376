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

#include <filesystem>
#include <cmath>
#include <fstream>
#include <string>

#include <unistd.h>

#include "doctest.h"
#include "hbt/errors.hpp"
#include "hbt/frame_io.hpp"

using namespace hbt;
using namespace hbt::frames;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / ("hbt_io_" + name + "_" + std::to_string(::getpid())))
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_bytes(const fs::path& p, const std::string& bytes)
{
    std::ofstream f(p, std::ios::binary);
    f << bytes;
}

std::string read_bytes(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

FrameStack tiny_stack()
{
    FrameStack s;
    s.pixel_pitch_mm = 0.017;
    s.center_x = 1;
    s.meta.seed = 77;
    s.meta.statistics = "thermal";
    Image a(3, 2), b(3, 2);
    a.pixels = {0.1, 1.0 / 3.0, 2.0, 5.5, 1e-7, 0.0};
    b.pixels = {3.25, 0.5, 7.0, 1.0, 2.0, 9.75};
    s.frames = {a, b};
    return s;
}

} // namespace

TEST_SUITE("frame_io")
{
    TEST_CASE("16-bit PGM samples are big-endian")
    {
        TempDir d("be16");
        const fs::path p = d.path / "f.pgm";
        write_bytes(p, std::string("P5\n# fixture\n3 1\n65535\n") + std::string("\x01\x02\x00\xff\xff\x00", 6));
        const PgmImage img = read_pgm(p);
        CHECK(img.width == 3);
        CHECK(img.maxval == 65535);
        CHECK(img.samples == std::vector<std::uint16_t>{0x0102, 0x00ff, 0xff00});

        PgmImage out{2, 1, 65535, {0x0102, 0xabcd}};
        write_pgm(p, out, "hash 1234");
        const std::string bytes = read_bytes(p);
        CHECK(bytes.find("# hash 1234") != std::string::npos);
        CHECK(bytes.substr(bytes.size() - 4) == std::string("\x01\x02\xab\xcd", 4));
    }

    TEST_CASE("8-bit PGM round trip")
    {
        TempDir d("pgm8");
        const fs::path p = d.path / "f.pgm";
        PgmImage img{4, 2, 255, {0, 1, 2, 3, 252, 253, 254, 255}};
        write_pgm(p, img);
        CHECK(read_bytes(p).size() == std::string("P5\n4 2\n255\n").size() + 8);
        const PgmImage back = read_pgm(p);
        CHECK(back.samples == img.samples);
        CHECK(back.height == 2);
    }

    TEST_CASE("malformed PGM files produce located parse errors")
    {
        TempDir d("bad");
        const fs::path p = d.path / "f.pgm";
        write_bytes(p, std::string("P5\n4 2\n255\n") + std::string(5, 'x'));
        try {
            read_pgm(p);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("expected 8 bytes") != std::string::npos);
            CHECK(msg.find("found 5") != std::string::npos);
            CHECK(msg.find("byte offset 11") != std::string::npos);
            CHECK(msg.find("f.pgm") != std::string::npos);
        }
        write_bytes(p, "P2\n1 1\n255\n0");
        CHECK_THROWS_AS(read_pgm(p), ParseError);
        write_bytes(p, "P5\n1 x\n255\n0");
        CHECK_THROWS_AS(read_pgm(p), ParseError);
        write_bytes(p, std::string("P5\n1 1\n100\n") + char(200));
        CHECK_THROWS_AS(read_pgm(p), ParseError);
        CHECK_THROWS_AS(read_pgm(d.path / "missing.pgm"), ParseError);
    }

    TEST_CASE("CSV stacks round-trip losslessly")
    {
        TempDir d("csv");
        const FrameStack s = tiny_stack();
        const auto files = save_stack(s, d.path, FrameFormat::csv, "abc");
        CHECK(files.size() == 3);
        CHECK(fs::exists(d.path / "frame_00001.csv"));
        const FrameStack back = load_stack(d.path, FrameFormat::csv);
        REQUIRE(back.frames.size() == 2);
        CHECK(back.frames[0].pixels == s.frames[0].pixels);
        CHECK(back.frames[1].pixels == s.frames[1].pixels);
        CHECK(back.pixel_pitch_mm == s.pixel_pitch_mm);
        CHECK(back.center_x == 1);
        CHECK(back.meta.seed == 77);
        CHECK(back.meta.statistics == "thermal");
        CHECK_THROWS_AS(load_stack(d.path, FrameFormat::pgm), ParseError);
    }

    TEST_CASE("PGM stacks round-trip losslessly when pre-quantized")
    {
        TempDir d("pgmstack");
        FrameStack s = tiny_stack();
        s.meta.bit_depth = 8;
        s.meta.intensity_scale = 20.0;
        for (auto& f : s.frames) {
            for (double& v : f.pixels) {
                v = std::round(v * 20.0) / 20.0;
            }
        }
        save_stack(s, d.path, FrameFormat::pgm);
        const FrameStack back = load_stack(d.path);
        CHECK(back.frames[0].pixels == s.frames[0].pixels);
        CHECK(back.frames[1].pixels == s.frames[1].pixels);
        CHECK(read_pgm(d.path / "frame_00000.pgm").maxval == 255);
    }

    TEST_CASE("missing sidecar and inconsistent frames")
    {
        TempDir d("side");
        CHECK_THROWS_AS(load_stack(d.path), ParseError);
        const FrameStack s = tiny_stack();
        save_stack(s, d.path, FrameFormat::csv);
        write_bytes(d.path / "frame_00001.csv", "1,2\n3,4\n");
        CHECK_THROWS_AS(load_stack(d.path), ParseError);
        write_bytes(d.path / kSidecarName, "{ not json");
        CHECK_THROWS_AS(load_stack(d.path), ParseError);
    }

    TEST_CASE("format names")
    {
        CHECK(frame_format_from_string("pgm") == FrameFormat::pgm);
        CHECK(to_string(FrameFormat::csv) == "csv");
        CHECK_THROWS(frame_format_from_string("png"));
        CHECK(frame_filename(42, FrameFormat::pgm) == "frame_00042.pgm");
    }
}
