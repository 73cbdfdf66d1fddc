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
#include <vector>

#include "aed/image.hpp"

namespace aed::cli {

/// Decodes one frame to a [0,1] GrayFrame. Binary PGM/PPM are read natively
/// (RGB reduced by BT.601 luminance); other raster formats go through
/// OpenCV when the build has it.
GrayFrame load_gray_frame(const std::string& path);

/// Writes an 8-bit binary PGM (values quantized by round(v * 255)).
void save_pgm(const std::string& path, const Grid& image);

/// Frame files under dir (non-recursive), sorted lexicographically.
std::vector<std::string> list_frame_files(const std::string& dir);

/// Loads every frame in dir; requires >= 2 frames of identical dimensions.
std::vector<GrayFrame> load_frame_dir(const std::string& dir);

}  // namespace aed::cli
