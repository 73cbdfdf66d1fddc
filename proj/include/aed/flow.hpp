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

#include <array>

#include "aed/image.hpp"

namespace aed::flow {

/// Horn-Schunck solver parameters. alpha weights the smoothness term and is
/// calibrated for [0,1] intensities; iteration stops at max_iters or once the
/// mean absolute update of (u,v) drops below tol.
struct HsParams {
  double alpha = 1.0;
  int max_iters = 200;
  double tol = 1e-4;
};

/// Iterative Horn-Schunck flow between two frames of identical dimensions.
/// Derivatives use the original 2x2x2 first-difference cube; each Jacobi step
/// uses the classical 1/6-1/12 neighbour averaging stencil.
FlowField compute_flow(const GrayFrame& prev, const GrayFrame& next, const HsParams& params);

/// The fixed 55-entry direction wheel (RGB rows in [0,1]) used by
/// flow_to_color. Entry k is the fully saturated color for wheel angle k.
const std::array<std::array<double, 3>, 55>& color_wheel();

/// Number of wheel entries in color_wheel().
inline constexpr int kColorWheelSize = 55;

/// Encodes direction as hue on the 55-entry wheel and magnitude (clamped at
/// magnitude_cap) as saturation; zero motion renders white. Deterministic for
/// the fixed wheel table.
FlowMap flow_to_color(const FlowField& field, double magnitude_cap);

}  // namespace aed::flow
