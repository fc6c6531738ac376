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

#include "config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

#include "hbt/errors.hpp"
#include "report.hpp"

namespace hbt::cli {

namespace {

std::vector<KeySpec> geometry_keys()
{
    return {
        {"separation_b_mm", KeyType::number, 1.3, "source separation b (mm)", {}},
        {"distance_l_mm", KeyType::number, 1000.0, "source to detector distance l (mm)", {}},
        {"wavelength_nm", KeyType::number, 532.0, "wavelength (nm)", {}},
    };
}

std::vector<KeySpec> output_keys(bool plots)
{
    std::vector<KeySpec> k{
        {"out_dir", KeyType::string, nullptr, "output directory (default $HBTSIM_OUT_DIR or ./hbtsim_out)", {}},
        {"workers", KeyType::integer, 0, "OpenMP workers, 0 = runtime default", {}},
        {"check", KeyType::boolean, true, "run consistency checks and fail on violations", {}},
    };
    if (plots) {
        k.push_back({"svg", KeyType::boolean, true, "write an SVG plot", {}});
    }
    return k;
}

const std::vector<std::string> kModes{"sync3", "single3", "sync4", "pol3", "thermal-extended3"};

std::vector<KeySpec> build(Command c)
{
    std::vector<KeySpec> keys;
    auto add = [&](std::vector<KeySpec> more) {
        keys.insert(keys.end(), more.begin(), more.end());
    };
    switch (c) {
    case Command::analytic:
        add({
            {"mode", KeyType::string, "sync3", "scan path", kModes},
            {"preset", KeyType::string, "coherent", "moment preset", {"coherent", "thermal", "custom"}},
            {"g2", KeyType::number, nullptr, "single-source g2 (custom preset)", {}},
            {"g3", KeyType::number, nullptr, "single-source g3 (custom preset)", {}},
            {"g4", KeyType::number, nullptr, "single-source g4 (custom preset)", {}},
            {"allow_nonclassical", KeyType::boolean, false, "accept moments violating classical bounds", {}},
            {"points", KeyType::integer, 720, "scan grid points", {}},
            {"scan_min", KeyType::number, nullptr, "scan start (rad, or mm for thermal-extended3)", {}},
            {"scan_max", KeyType::number, nullptr, "scan end, excluded", {}},
            {"extent_a_mm", KeyType::number, 0.2, "source extent a (mm), thermal-extended3", {}},
            {"rho_mm", KeyType::number, nullptr, "coherence length (default 2 lambda l / a)", {}},
        });
        add(geometry_keys());
        add(output_keys(true));
        break;
    case Command::mc:
        add({
            {"mode", KeyType::string, "sync3", "scan path", kModes},
            {"preset", KeyType::string, "coherent", "source statistics", {"coherent", "thermal"}},
            {"shots", KeyType::integer, 100000, "field realizations", {}},
            {"seed", KeyType::integer, 1, "random seed", {}},
            {"points", KeyType::integer, 48, "scan grid points", {}},
            {"scan_min", KeyType::number, nullptr, "scan start (rad, or mm for thermal-extended3)", {}},
            {"scan_max", KeyType::number, nullptr, "scan end, excluded", {}},
            {"emitters", KeyType::integer, 64, "emitters per extended source", {}},
            {"extent_a_mm", KeyType::number, 0.2, "source extent a (mm), thermal-extended3", {}},
            {"calibration_points", KeyType::integer, 10, "coherence calibration separations", {}},
        });
        add(geometry_keys());
        add(output_keys(true));
        break;
    case Command::frames_synth:
        add({
            {"preset", KeyType::string, "coherent", "source statistics", {"coherent", "thermal"}},
            {"frames", KeyType::integer, 500, "number of frames", {}},
            {"seed", KeyType::integer, 1, "random seed", {}},
            {"width", KeyType::integer, 640, "frame width (px)", {}},
            {"height", KeyType::integer, 64, "frame height (px)", {}},
            {"fringe_period_px", KeyType::number, 24.0, "fringe period (px)", {}},
            {"speckle_rho_px", KeyType::number, 5000.0, "speckle coherence length (px)", {}},
            {"intensity_b", KeyType::number, 1.0, "mean intensity of source B (A is 1)", {}},
            {"bit_depth", KeyType::integer, 0, "quantization depth, 0 = continuous", {}},
            {"full_scale", KeyType::number, nullptr, "intensity at the top quantization level", {}},
            {"format", KeyType::string, "pgm", "frame file format", {"pgm", "csv"}},
        });
        add(geometry_keys());
        add(output_keys(false));
        break;
    case Command::frames_analyze:
        add({
            {"in_dir", KeyType::string, "", "directory holding the stack", {}},
            {"band", KeyType::integer, 50, "rows averaged in y", {}},
            {"statistics", KeyType::string, "auto", "expected statistics for checks",
             {"auto", "coherent", "thermal", "none"}},
        });
        add(output_keys(true));
        break;
    case Command::repro:
        add({
            {"figure", KeyType::string, "fig4a", "figure to reproduce",
             {"fig4a", "fig4b", "fig5", "fig7", "fig9a", "fig9b", "fig9c", "fig9d"}},
        });
        add(output_keys(true));
        break;
    }
    return keys;
}

const char* type_name(KeyType t)
{
    switch (t) {
    case KeyType::string: return "string";
    case KeyType::integer: return "integer";
    case KeyType::number: return "number";
    case KeyType::boolean: return "boolean";
    }
    return "?";
}

bool type_matches(KeyType t, const json& v)
{
    switch (t) {
    case KeyType::string: return v.is_string();
    case KeyType::integer: return v.is_number_integer();
    case KeyType::number: return v.is_number();
    case KeyType::boolean: return v.is_boolean();
    }
    return false;
}

const KeySpec* find_key(Command c, const std::string& key)
{
    for (const KeySpec& k : schema_for(c)) {
        if (k.key == key) {
            return &k;
        }
    }
    return nullptr;
}

} // namespace

std::string_view command_name(Command c)
{
    switch (c) {
    case Command::analytic: return "analytic";
    case Command::mc: return "mc";
    case Command::frames_synth: return "frames-synth";
    case Command::frames_analyze: return "frames-analyze";
    case Command::repro: return "repro";
    }
    return "?";
}

Command command_from_name(std::string_view name)
{
    for (Command c : {Command::analytic, Command::mc, Command::frames_synth,
                      Command::frames_analyze, Command::repro}) {
        if (command_name(c) == name) {
            return c;
        }
    }
    throw ConfigError("unknown command '" + std::string(name) + "'");
}

const std::vector<KeySpec>& schema_for(Command c)
{
    static const std::vector<KeySpec> tables[] = {
        build(Command::analytic), build(Command::mc), build(Command::frames_synth),
        build(Command::frames_analyze), build(Command::repro)};
    return tables[static_cast<int>(c)];
}

json schema_document()
{
    json doc;
    doc["schema_version"] = kSchemaVersion;
    json commands = json::object();
    for (Command c : {Command::analytic, Command::mc, Command::frames_synth,
                      Command::frames_analyze, Command::repro}) {
        json keys = json::object();
        for (const KeySpec& k : schema_for(c)) {
            json e{{"type", type_name(k.type)}, {"default", k.default_value}, {"help", k.help}};
            if (!k.choices.empty()) {
                e["choices"] = k.choices;
            }
            keys[k.key] = e;
        }
        commands[std::string(command_name(c))] = keys;
    }
    doc["commands"] = commands;
    return doc;
}

json default_config(Command c)
{
    json cfg = json::object();
    for (const KeySpec& k : schema_for(c)) {
        cfg[k.key] = k.default_value;
    }
    return cfg;
}

void validate_config(const json& cfg, Command c)
{
    if (!cfg.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    for (const auto& [key, value] : cfg.items()) {
        const KeySpec* spec = find_key(c, key);
        if (spec == nullptr) {
            throw ConfigError("unknown key '" + key + "' for command " +
                              std::string(command_name(c)));
        }
        if (value.is_null()) {
            if (!spec->default_value.is_null()) {
                throw ConfigError("key '" + key + "' must not be null");
            }
            continue;
        }
        if (!type_matches(spec->type, value)) {
            throw ConfigError("key '" + key + "' must be of type " + type_name(spec->type));
        }
        if (!spec->choices.empty()) {
            const auto s = value.get<std::string>();
            bool ok = false;
            for (const auto& choice : spec->choices) {
                ok = ok || choice == s;
            }
            if (!ok) {
                std::string list;
                for (const auto& choice : spec->choices) {
                    list += (list.empty() ? "" : ", ") + choice;
                }
                throw ConfigError("key '" + key + "' must be one of: " + list);
            }
        }
    }
}

json load_config_file(const std::string& path, Command c)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path + ": cannot open config file");
    }
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw ConfigError(path + ": not a JSON object");
    }
    if (!doc.contains("schema_version")) {
        throw ConfigError(path + ": missing schema_version");
    }
    if (doc["schema_version"] != kSchemaVersion) {
        throw ConfigError(path + ": unsupported schema_version " + doc["schema_version"].dump() +
                          " (expected " + std::to_string(kSchemaVersion) + ")");
    }
    doc.erase("schema_version");
    if (doc.contains("command")) {
        if (doc["command"] != std::string(command_name(c))) {
            throw ConfigError(path + ": config is for command " + doc["command"].dump());
        }
        doc.erase("command");
    }
    try {
        validate_config(doc, c);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return doc;
}

json parse_value(const KeySpec& spec, const std::string& text)
{
    auto fail = [&]() -> json {
        throw ConfigError("--" + spec.key + ": expected " + type_name(spec.type) + ", got '" +
                          text + "'");
    };
    if (text == "null" && spec.default_value.is_null()) {
        return nullptr;
    }
    switch (spec.type) {
    case KeyType::string:
        return text;
    case KeyType::integer: {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(text, &used);
        } catch (const std::exception&) {
            return fail();
        }
        if (used != text.size()) {
            return fail();
        }
        return v;
    }
    case KeyType::number: {
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (text.empty() || *end != '\0' || !std::isfinite(v)) {
            return fail();
        }
        return v;
    }
    case KeyType::boolean:
        if (text == "true" || text == "1") {
            return true;
        }
        if (text == "false" || text == "0") {
            return false;
        }
        return fail();
    }
    return fail();
}

std::string config_hash(const json& cfg)
{
    json h = cfg;
    h.erase("out_dir");
    h.erase("workers");
    return fnv1a_hex(h.dump());
}

std::string resolve_out_dir(const json& cfg)
{
    if (cfg.contains("out_dir") && cfg["out_dir"].is_string() &&
        !cfg["out_dir"].get<std::string>().empty()) {
        return cfg["out_dir"].get<std::string>();
    }
    if (const char* env = std::getenv("HBTSIM_OUT_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return "hbtsim_out";
}

} // namespace hbt::cli
