// Copyright 2026 The aedpipe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "aed/pipeline.hpp"

namespace aed::cli {

/// Flat dotted-key configuration; string values, canonical ordering by key.
using KeyValues = std::map<std::string, std::string>;

/// Built-in defaults for every recognized key.
KeyValues default_config();

/// Parses `key = value` lines; '#' starts a comment; blank lines ignored.
KeyValues parse_config_text(const std::string& text);

/// Reads and parses a config file.
KeyValues load_config_file(const std::string& path);

/// Overwrites entries with a named preset ("umn" or "ucsd").
void apply_preset(KeyValues& config, const std::string& preset);

/// Applies overrides (file entries or `--set key=value` flags); keys must be
/// recognized.
void apply_overrides(KeyValues& config, const KeyValues& overrides);

/// Canonical text form: sorted `key=value` lines, one per key.
std::string canonical_config_text(const KeyValues& config);

/// Validates and converts the flat map into the typed pipeline config.
pipeline::Config make_pipeline_config(const KeyValues& config);

}  // namespace aed::cli
