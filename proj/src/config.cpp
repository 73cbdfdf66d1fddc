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

#include "aed/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace aed::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

int parse_int(const KeyValues& config, const std::string& key) {
  const std::string& raw = config.at(key);
  try {
    std::size_t pos = 0;
    const int v = std::stoi(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw Error("config: key '" + key + "' has non-integer value '" + raw + "'");
  }
}

double parse_double(const KeyValues& config, const std::string& key) {
  const std::string& raw = config.at(key);
  try {
    std::size_t pos = 0;
    const double v = std::stod(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw Error("config: key '" + key + "' has non-numeric value '" + raw + "'");
  }
}

bool parse_bool(const KeyValues& config, const std::string& key) {
  const std::string& raw = config.at(key);
  if (raw == "true" || raw == "1") return true;
  if (raw == "false" || raw == "0") return false;
  throw Error("config: key '" + key + "' must be true or false, got '" + raw + "'");
}

}  // namespace

KeyValues default_config() {
  return {
      {"flow.alpha", "1"},
      {"flow.max_iters", "200"},
      {"flow.tol", "0.0001"},
      {"flow.cap_percentile", "0.99"},
      {"pcanet.k1", "3"},
      {"pcanet.k2", "3"},
      {"pcanet.l1", "8"},
      {"pcanet.l2", "8"},
      {"pcanet.block_h", "8"},
      {"pcanet.block_w", "8"},
      {"pcanet.lrn_enabled", "false"},
      {"lrn.bias", "2"},
      {"lrn.weight", "0.0001"},
      {"lrn.depth", "5"},
      {"lrn.exponent", "0.75"},
      {"kpca.sigma", "1"},
      {"kpca.q", "16"},
      {"gate.diff_threshold", "0.1"},
      {"gate.min_blob_area", "25"},
      {"gate.min_blob_count", "1"},
      {"pipeline.augment", "true"},
      {"pipeline.eval_mode", "frame"},
      {"pipeline.patch_h", "12"},
      {"pipeline.patch_w", "16"},
      {"pipeline.working_h", "24"},
      {"pipeline.working_w", "32"},
  };
}

KeyValues parse_config_text(const std::string& text) {
  KeyValues out;
  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("config: line " + std::to_string(line_no) + " is not 'key=value': " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw Error("config: empty key on line " + std::to_string(line_no));
    out[key] = value;
  }
  return out;
}

KeyValues load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void apply_preset(KeyValues& config, const std::string& preset) {
  if (preset == "umn") {
    // Lawn-scene classifier settings; indoor and plaza scenes override
    // kpca.sigma / kpca.q per run.
    config["pcanet.k1"] = "3";
    config["pcanet.k2"] = "3";
    config["pcanet.l1"] = "8";
    config["pcanet.l2"] = "8";
    config["pcanet.block_h"] = "8";
    config["pcanet.block_w"] = "8";
    config["kpca.sigma"] = "1";
    config["kpca.q"] = "2800";
    config["gate.min_blob_count"] = "3";
    config["pipeline.augment"] = "true";
    config["pipeline.eval_mode"] = "frame";
    config["pipeline.working_h"] = "24";
    config["pipeline.working_w"] = "32";
  } else if (preset == "ucsd") {
    config["pcanet.k1"] = "5";
    config["pcanet.k2"] = "5";
    config["pcanet.l1"] = "7";
    config["pcanet.l2"] = "7";
    config["pcanet.block_h"] = "7";
    config["pcanet.block_w"] = "7";
    config["kpca.sigma"] = "0.8";
    config["kpca.q"] = "1350";
    config["gate.min_blob_count"] = "1";
    config["pipeline.augment"] = "false";
    config["pipeline.eval_mode"] = "pixel";
    config["pipeline.patch_h"] = "12";
    config["pipeline.patch_w"] = "16";
  } else {
    throw Error("config: unknown preset '" + preset + "' (expected umn or ucsd)");
  }
}

void apply_overrides(KeyValues& config, const KeyValues& overrides) {
  for (const auto& [key, value] : overrides) {
    if (config.find(key) == config.end())
      throw Error("config: unknown key '" + key + "'");
    config[key] = value;
  }
}

std::string canonical_config_text(const KeyValues& config) {
  std::string out;
  for (const auto& [key, value] : config) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

pipeline::Config make_pipeline_config(const KeyValues& config) {
  pipeline::Config pc;
  pc.hs.alpha = parse_double(config, "flow.alpha");
  pc.hs.max_iters = parse_int(config, "flow.max_iters");
  pc.hs.tol = parse_double(config, "flow.tol");
  pc.cap_percentile = parse_double(config, "flow.cap_percentile");
  pc.pcanet.k1 = parse_int(config, "pcanet.k1");
  pc.pcanet.k2 = parse_int(config, "pcanet.k2");
  pc.pcanet.l1 = parse_int(config, "pcanet.l1");
  pc.pcanet.l2 = parse_int(config, "pcanet.l2");
  pc.pcanet.block_h = parse_int(config, "pcanet.block_h");
  pc.pcanet.block_w = parse_int(config, "pcanet.block_w");
  pc.pcanet.lrn_enabled = parse_bool(config, "pcanet.lrn_enabled");
  pc.lrn.bias = parse_double(config, "lrn.bias");
  pc.lrn.weight = parse_double(config, "lrn.weight");
  pc.lrn.depth = parse_int(config, "lrn.depth");
  pc.lrn.exponent = parse_double(config, "lrn.exponent");
  pc.kpca.sigma = parse_double(config, "kpca.sigma");
  pc.kpca.q = parse_int(config, "kpca.q");
  pc.gate.diff_threshold = parse_double(config, "gate.diff_threshold");
  pc.gate.min_blob_area = parse_int(config, "gate.min_blob_area");
  pc.gate.min_blob_count = parse_int(config, "gate.min_blob_count");
  pc.augment_enabled = parse_bool(config, "pipeline.augment");
  const std::string& mode = config.at("pipeline.eval_mode");
  if (mode == "frame")
    pc.eval_mode = pipeline::EvalMode::frame_level;
  else if (mode == "pixel")
    pc.eval_mode = pipeline::EvalMode::pixel_level;
  else
    throw Error("config: pipeline.eval_mode must be 'frame' or 'pixel', got '" + mode + "'");
  pc.patch_h = parse_int(config, "pipeline.patch_h");
  pc.patch_w = parse_int(config, "pipeline.patch_w");
  pc.working_h = parse_int(config, "pipeline.working_h");
  pc.working_w = parse_int(config, "pipeline.working_w");
  return pc;
}

}  // namespace aed::cli
