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

#include "aed/synth.hpp"

#include <cmath>
#include <random>

namespace aed::cli {

namespace {

constexpr double kBackground = 0.06;
constexpr double kDiscBrightness = 0.85;
constexpr double kDiscRadius = 2.0;

struct Particle {
  double y, x;        // position
  double dir_y, dir_x;  // unit heading during normal motion
  double speed;       // normal px/frame
  double scatter_y, scatter_x;  // unit heading during random_scatter anomaly
};

// Anti-aliased disc: coverage ramps linearly over one pixel at the rim.
void render_disc(Grid& frame, double cy, double cx) {
  const int y0 = std::max(0, static_cast<int>(std::floor(cy - kDiscRadius - 1.0)));
  const int y1 = std::min(frame.height() - 1, static_cast<int>(std::ceil(cy + kDiscRadius + 1.0)));
  const int x0 = std::max(0, static_cast<int>(std::floor(cx - kDiscRadius - 1.0)));
  const int x1 = std::min(frame.width() - 1, static_cast<int>(std::ceil(cx + kDiscRadius + 1.0)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double d = std::hypot(y - cy, x - cx);
      const double coverage = std::clamp(kDiscRadius - d + 0.5, 0.0, 1.0);
      if (coverage <= 0.0) continue;
      double& v = frame.at(y, x);
      v = std::min(1.0, v + kDiscBrightness * coverage);
    }
  }
}

double wrap(double v, double limit) {
  v = std::fmod(v, limit);
  return v < 0.0 ? v + limit : v;
}

}  // namespace

SynthScene generate_scene(const SynthSpec& spec) {
  if (spec.frame_count < 2 || spec.height < 8 || spec.width < 8 || spec.particle_count < 1)
    throw Error("synth: invalid scene dimensions");
  if (spec.speed_min <= 0.0 || spec.speed_max < spec.speed_min)
    throw Error("synth: invalid speed range");
  if (spec.anomaly_start < 0 || spec.anomaly_end > spec.frame_count ||
      spec.anomaly_end < spec.anomaly_start)
    throw Error("synth: anomaly window must lie within [0, frame_count)");

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  // Coherent motion: one shared heading with small per-particle jitter.
  const double base_angle = 2.0 * M_PI * uniform(rng);
  std::vector<Particle> particles(spec.particle_count);
  for (auto& p : particles) {
    p.y = uniform(rng) * spec.height;
    p.x = uniform(rng) * spec.width;
    const double angle = base_angle + 0.15 * (2.0 * uniform(rng) - 1.0);
    p.dir_y = std::sin(angle);
    p.dir_x = std::cos(angle);
    p.speed = spec.speed_min + (spec.speed_max - spec.speed_min) * uniform(rng);
    const double scatter = 2.0 * M_PI * uniform(rng);
    p.scatter_y = std::sin(scatter);
    p.scatter_x = std::cos(scatter);
  }

  const double center_y = spec.height / 2.0;
  const double center_x = spec.width / 2.0;

  SynthScene scene;
  scene.frames.reserve(spec.frame_count);
  scene.labels.reserve(spec.frame_count);
  for (int t = 0; t < spec.frame_count; ++t) {
    const bool anomalous = t >= spec.anomaly_start && t < spec.anomaly_end;
    Grid frame(spec.height, spec.width, kBackground);
    for (const auto& p : particles) render_disc(frame, p.y, p.x);
    scene.frames.push_back(std::move(frame));
    scene.labels.push_back(anomalous ? 1 : 0);

    for (auto& p : particles) {
      double vy = p.dir_y * p.speed;
      double vx = p.dir_x * p.speed;
      if (anomalous) {
        if (spec.style == MotionStyle::divergent) {
          const double ry = p.y - center_y;
          const double rx = p.x - center_x;
          const double norm = std::hypot(ry, rx);
          if (norm > 1e-9) {
            vy = ry / norm * p.speed * spec.anomaly_multiplier;
            vx = rx / norm * p.speed * spec.anomaly_multiplier;
          } else {
            vy = p.dir_y * p.speed * spec.anomaly_multiplier;
            vx = p.dir_x * p.speed * spec.anomaly_multiplier;
          }
        } else {
          vy = p.scatter_y * p.speed * spec.anomaly_multiplier;
          vx = p.scatter_x * p.speed * spec.anomaly_multiplier;
        }
      }
      p.y = wrap(p.y + vy, spec.height);
      p.x = wrap(p.x + vx, spec.width);
    }
  }
  return scene;
}

SynthSpec synth_spec_from_file(const std::string& path) {
  const KeyValues kv = load_config_file(path);
  SynthSpec spec;
  auto get_int = [&](const char* key, int fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stoi(it->second);
  };
  auto get_double = [&](const char* key, double fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stod(it->second);
  };
  spec.frame_count = get_int("synth.frames", spec.frame_count);
  spec.height = get_int("synth.height", spec.height);
  spec.width = get_int("synth.width", spec.width);
  spec.particle_count = get_int("synth.particles", spec.particle_count);
  spec.speed_min = get_double("synth.speed_min", spec.speed_min);
  spec.speed_max = get_double("synth.speed_max", spec.speed_max);
  spec.anomaly_start = get_int("synth.anomaly_start", spec.anomaly_start);
  spec.anomaly_end = get_int("synth.anomaly_end", spec.anomaly_end);
  spec.anomaly_multiplier = get_double("synth.multiplier", spec.anomaly_multiplier);
  auto style = kv.find("synth.style");
  if (style != kv.end()) {
    if (style->second == "divergent")
      spec.style = MotionStyle::divergent;
    else if (style->second == "random")
      spec.style = MotionStyle::random_scatter;
    else
      throw Error("synth: style must be 'divergent' or 'random', got '" + style->second + "'");
  }
  auto seed = kv.find("synth.seed");
  if (seed != kv.end()) spec.seed = std::stoull(seed->second);
  return spec;
}

}  // namespace aed::cli
