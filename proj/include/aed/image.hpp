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

#include <algorithm>
#include <cstddef>
#include <vector>

#include "aed/error.hpp"

namespace aed {

/// Dense single-channel raster of doubles, row-major.
class Grid {
 public:
  Grid() = default;
  Grid(int height, int width, double fill = 0.0)
      : height_(height), width_(width),
        values_(static_cast<std::size_t>(height) * width, fill) {
    if (height < 1 || width < 1) throw Error("Grid: dimensions must be positive");
  }

  int height() const { return height_; }
  int width() const { return width_; }
  bool empty() const { return values_.empty(); }
  std::size_t size() const { return values_.size(); }

  double& at(int y, int x) { return values_[static_cast<std::size_t>(y) * width_ + x]; }
  double at(int y, int x) const { return values_[static_cast<std::size_t>(y) * width_ + x]; }

  // Replicate-border access, used by stencil code.
  double at_clamped(int y, int x) const {
    y = std::clamp(y, 0, height_ - 1);
    x = std::clamp(x, 0, width_ - 1);
    return at(y, x);
  }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool same_shape(const Grid& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }
  bool all_finite() const;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<double> values_;
};

/// Planar multi-channel image; every plane shares one shape.
class Image {
 public:
  Image() = default;
  Image(int height, int width, int channels, double fill = 0.0) {
    if (channels < 1) throw Error("Image: channel count must be positive");
    planes_.reserve(channels);
    for (int c = 0; c < channels; ++c) planes_.emplace_back(height, width, fill);
  }
  static Image from_plane(Grid plane) {
    Image img;
    img.planes_.push_back(std::move(plane));
    return img;
  }

  void add_plane(Grid plane) {
    if (!planes_.empty() && !planes_[0].same_shape(plane))
      throw Error("Image: plane shapes must agree");
    planes_.push_back(std::move(plane));
  }

  int height() const { return planes_.empty() ? 0 : planes_[0].height(); }
  int width() const { return planes_.empty() ? 0 : planes_[0].width(); }
  int channels() const { return static_cast<int>(planes_.size()); }

  Grid& plane(int c) { return planes_[c]; }
  const Grid& plane(int c) const { return planes_[c]; }

  double& at(int c, int y, int x) { return planes_[c].at(y, x); }
  double at(int c, int y, int x) const { return planes_[c].at(y, x); }

  bool all_finite() const;

 private:
  std::vector<Grid> planes_;
};

/// Intensity frame with values in [0,1]; needs h,w >= 2 for derivative stencils.
using GrayFrame = Grid;

/// Color-encoded motion image: exactly 3 channels, values in [0,1].
using FlowMap = Image;

/// Dense displacement field between two frames, pixels/frame.
struct FlowField {
  Grid u;  // horizontal component
  Grid v;  // vertical component

  int height() const { return u.height(); }
  int width() const { return u.width(); }
};

/// Throws unless the frame is a valid GrayFrame (finite, in [0,1], >= 2x2).
void validate_gray_frame(const GrayFrame& frame);

/// Throws unless the map is a valid FlowMap (3 channels, finite, in [0,1]).
void validate_flow_map(const FlowMap& map);

/// Bilinear interpolation with corner-aligned sampling. Output pixel (0,0)
/// maps to input (0,0) and (out_h-1, out_w-1) to (h-1, w-1); resizing to the
/// input size is the exact identity.
Grid resize_bilinear(const Grid& in, int out_h, int out_w);
Image resize_bilinear(const Image& in, int out_h, int out_w);

}  // namespace aed
