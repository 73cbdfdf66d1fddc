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

#include "aed/image.hpp"

#include <cmath>

namespace aed {

bool Grid::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool Image::all_finite() const {
  for (const Grid& p : planes_) {
    if (!p.all_finite()) return false;
  }
  return true;
}

void validate_gray_frame(const GrayFrame& frame) {
  if (frame.height() < 2 || frame.width() < 2)
    throw Error("GrayFrame: height and width must be >= 2");
  for (double v : frame.values()) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      throw Error("GrayFrame: intensities must be finite and within [0,1]");
  }
}

void validate_flow_map(const FlowMap& map) {
  if (map.channels() != 3) throw Error("FlowMap: channel count must be 3");
  for (int c = 0; c < 3; ++c) {
    for (double v : map.plane(c).values()) {
      if (!std::isfinite(v) || v < 0.0 || v > 1.0)
        throw Error("FlowMap: values must be finite and within [0,1]");
    }
  }
}

namespace {

// Corner-aligned source coordinate for output index i of n samples over m.
inline double sample_coord(int i, int n, int m) {
  if (n <= 1 || m <= 1) return 0.0;
  return static_cast<double>(i) * (m - 1) / (n - 1);
}

}  // namespace

Grid resize_bilinear(const Grid& in, int out_h, int out_w) {
  if (out_h < 1 || out_w < 1) throw Error("resize_bilinear: target dimensions must be >= 1");
  if (in.empty()) throw Error("resize_bilinear: empty input");
  if (out_h == in.height() && out_w == in.width()) return in;

  Grid out(out_h, out_w);
  for (int y = 0; y < out_h; ++y) {
    const double sy = sample_coord(y, out_h, in.height());
    const int y0 = static_cast<int>(sy);
    const int y1 = std::min(y0 + 1, in.height() - 1);
    const double fy = sy - y0;
    for (int x = 0; x < out_w; ++x) {
      const double sx = sample_coord(x, out_w, in.width());
      const int x0 = static_cast<int>(sx);
      const int x1 = std::min(x0 + 1, in.width() - 1);
      const double fx = sx - x0;
      const double top = (1.0 - fx) * in.at(y0, x0) + fx * in.at(y0, x1);
      const double bot = (1.0 - fx) * in.at(y1, x0) + fx * in.at(y1, x1);
      out.at(y, x) = (1.0 - fy) * top + fy * bot;
    }
  }
  return out;
}

Image resize_bilinear(const Image& in, int out_h, int out_w) {
  if (in.channels() < 1) throw Error("resize_bilinear: empty image");
  Image out;
  for (int c = 0; c < in.channels(); ++c)
    out.add_plane(resize_bilinear(in.plane(c), out_h, out_w));
  return out;
}

}  // namespace aed
