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

#include "aed/flow.hpp"

#include <cmath>
#include <utility>

namespace aed::flow {

namespace {

// First differences averaged over the 2x2x2 cube spanned by the frame pair.
void input_derivatives(const GrayFrame& prev, const GrayFrame& next,
                       Grid& ix, Grid& iy, Grid& it) {
  const int h = prev.height();
  const int w = prev.width();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double p00 = prev.at_clamped(y, x);
      const double p01 = prev.at_clamped(y, x + 1);
      const double p10 = prev.at_clamped(y + 1, x);
      const double p11 = prev.at_clamped(y + 1, x + 1);
      const double n00 = next.at_clamped(y, x);
      const double n01 = next.at_clamped(y, x + 1);
      const double n10 = next.at_clamped(y + 1, x);
      const double n11 = next.at_clamped(y + 1, x + 1);
      ix.at(y, x) = 0.25 * ((p01 - p00) + (p11 - p10) + (n01 - n00) + (n11 - n10));
      iy.at(y, x) = 0.25 * ((p10 - p00) + (p11 - p01) + (n10 - n00) + (n11 - n01));
      it.at(y, x) = 0.25 * ((n00 - p00) + (n01 - p01) + (n10 - p10) + (n11 - p11));
    }
  }
}

// Classical Horn-Schunck neighbour average (1/6 edges, 1/12 diagonals).
void local_average(const Grid& in, Grid& out) {
  const int h = in.height();
  const int w = in.width();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      out.at(y, x) =
          (in.at_clamped(y, x - 1) + in.at_clamped(y, x + 1) +
           in.at_clamped(y - 1, x) + in.at_clamped(y + 1, x)) / 6.0 +
          (in.at_clamped(y - 1, x - 1) + in.at_clamped(y - 1, x + 1) +
           in.at_clamped(y + 1, x - 1) + in.at_clamped(y + 1, x + 1)) / 12.0;
    }
  }
}

}  // namespace

FlowField compute_flow(const GrayFrame& prev, const GrayFrame& next, const HsParams& params) {
  if (!prev.same_shape(next))
    throw Error("compute_flow: frame dimensions must match");
  if (prev.height() < 2 || prev.width() < 2)
    throw Error("compute_flow: frames must be at least 2x2");
  if (!prev.all_finite() || !next.all_finite())
    throw Error("compute_flow: non-finite input intensities");
  if (params.alpha <= 0.0 || params.max_iters < 1 || params.tol <= 0.0)
    throw Error("compute_flow: invalid solver parameters");

  const int h = prev.height();
  const int w = prev.width();
  Grid ix(h, w), iy(h, w), it(h, w);
  input_derivatives(prev, next, ix, iy, it);

  Grid u(h, w), v(h, w), ubar(h, w), vbar(h, w);
  const double alpha2 = params.alpha * params.alpha;
  const std::size_t n = u.size();

  for (int iter = 0; iter < params.max_iters; ++iter) {
    local_average(u, ubar);
    local_average(v, vbar);
    double update = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double gx = ix.values()[i];
      const double gy = iy.values()[i];
      const double t = (gx * ubar.values()[i] + gy * vbar.values()[i] + it.values()[i]) /
                       (alpha2 + gx * gx + gy * gy);
      const double nu = ubar.values()[i] - gx * t;
      const double nv = vbar.values()[i] - gy * t;
      update += std::abs(nu - u.values()[i]) + std::abs(nv - v.values()[i]);
      u.values()[i] = nu;
      v.values()[i] = nv;
    }
    if (update / (2.0 * static_cast<double>(n)) < params.tol) break;
  }
  return FlowField{std::move(u), std::move(v)};
}

namespace {

// Wheel segment lengths chosen so hue transitions are perceptually even.
std::array<std::array<double, 3>, 55> make_color_wheel() {
  constexpr int RY = 15, YG = 6, GC = 4, CB = 11, BM = 13, MR = 6;
  static_assert(RY + YG + GC + CB + BM + MR == kColorWheelSize);
  std::array<std::array<double, 3>, 55> wheel{};
  int k = 0;
  for (int i = 0; i < RY; ++i, ++k) wheel[k] = {1.0, i / static_cast<double>(RY), 0.0};
  for (int i = 0; i < YG; ++i, ++k) wheel[k] = {1.0 - i / static_cast<double>(YG), 1.0, 0.0};
  for (int i = 0; i < GC; ++i, ++k) wheel[k] = {0.0, 1.0, i / static_cast<double>(GC)};
  for (int i = 0; i < CB; ++i, ++k) wheel[k] = {0.0, 1.0 - i / static_cast<double>(CB), 1.0};
  for (int i = 0; i < BM; ++i, ++k) wheel[k] = {i / static_cast<double>(BM), 0.0, 1.0};
  for (int i = 0; i < MR; ++i, ++k) wheel[k] = {1.0, 0.0, 1.0 - i / static_cast<double>(MR)};
  return wheel;
}

}  // namespace

const std::array<std::array<double, 3>, 55>& color_wheel() {
  static const auto wheel = make_color_wheel();
  return wheel;
}

FlowMap flow_to_color(const FlowField& field, double magnitude_cap) {
  if (magnitude_cap <= 0.0) throw Error("flow_to_color: magnitude_cap must be positive");
  if (!field.u.all_finite() || !field.v.all_finite())
    throw Error("flow_to_color: non-finite flow entries");
  if (!field.u.same_shape(field.v)) throw Error("flow_to_color: u/v shape mismatch");

  const auto& wheel = color_wheel();
  const int h = field.height();
  const int w = field.width();
  FlowMap out(h, w, 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double fu = field.u.at(y, x);
      const double fv = field.v.at(y, x);
      const double rad = std::min(1.0, std::hypot(fu, fv) / magnitude_cap);
      const double angle = std::atan2(-fv, -fu) / M_PI;  // in [-1,1]
      const double fk = (angle + 1.0) / 2.0 * (kColorWheelSize - 1);
      const int k0 = static_cast<int>(fk);
      const int k1 = (k0 + 1) % kColorWheelSize;
      const double f = fk - k0;
      for (int c = 0; c < 3; ++c) {
        const double col = (1.0 - f) * wheel[k0][c] + f * wheel[k1][c];
        // Saturate toward the wheel color with magnitude; white at rest.
        out.at(c, y, x) = 1.0 - rad * (1.0 - col);
      }
    }
  }
  return out;
}

}  // namespace aed::flow
