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

#include <string>

#include "aed/pipeline.hpp"

namespace aed::cli {

/// Model container on disk: the trained pipeline model plus the canonical
/// config text it was built from. Round-trips are bit-exact.
struct ModelFile {
  pipeline::Model model;
  std::string config_text;
};

/// Binary container version written by save_model.
inline constexpr std::uint32_t kModelFormatVersion = 1;

void save_model(const std::string& path, const ModelFile& file);
ModelFile load_model(const std::string& path);

}  // namespace aed::cli
