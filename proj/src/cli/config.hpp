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

// RunConfig: one flat JSON object per command, schema-versioned. The key table
// below is the single source for defaults, CLI flags, validation and --schema.

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace hbt::cli {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

enum class Command { analytic, mc, frames_synth, frames_analyze, repro };

std::string_view command_name(Command c);
Command command_from_name(std::string_view name);

enum class KeyType { string, integer, number, boolean };

struct KeySpec {
    std::string key;
    KeyType type = KeyType::string;
    json default_value; ///< null marks an optional value derived at run time
    std::string help;
    std::vector<std::string> choices;
};

const std::vector<KeySpec>& schema_for(Command c);

/// Machine-readable dump of every command's keys.
json schema_document();

json default_config(Command c);

/// Type and choice checks; throws ConfigError naming the key.
void validate_config(const json& cfg, Command c);

/// Parses a config file, requiring schema_version and rejecting unknown keys.
/// A "command" entry, if present, must match `c`. Returns only the keys given.
json load_config_file(const std::string& path, Command c);

/// Converts a command-line string to the key's JSON type.
json parse_value(const KeySpec& spec, const std::string& text);

/// FNV-1a of the canonical dump, ignoring keys that cannot change results
/// (output location, worker count).
std::string config_hash(const json& cfg);

/// out_dir from the config, else $HBTSIM_OUT_DIR, else "hbtsim_out".
std::string resolve_out_dir(const json& cfg);

} // namespace hbt::cli
