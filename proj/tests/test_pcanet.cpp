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

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "aed/pcanet.hpp"
#include "reference_impls.hpp"

using namespace aed;
using testref::NaiveForward;
using testref::naive_forward;
using testref::random_map;

TEST_CASE("extract_patches: shapes and direct enumeration") {
  const FlowMap map1 = random_map(4, 4, 1, 1);
  const auto p1 = pcanet::extract_patches(map1, 3, 3);
  CHECK(p1.rows() == 9);
  CHECK(p1.cols() == 4);

  FlowMap map3(4, 4, 3);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 4; ++x) map3.at(c, y, x) = c * 100 + y * 10 + x;
  const auto p3 = pcanet::extract_patches(map3, 3, 3);
  CHECK(p3.rows() == 27);
  CHECK(p3.cols() == 4);
  // Column order is row-major by top-left corner; entries channel-major.
  for (int py = 0; py < 2; ++py)
    for (int px = 0; px < 2; ++px)
      for (int c = 0; c < 3; ++c)
        for (int dy = 0; dy < 3; ++dy)
          for (int dx = 0; dx < 3; ++dx)
            CHECK(p3((c * 3 + dy) * 3 + dx, py * 2 + px) ==
                  doctest::Approx(c * 100 + (py + dy) * 10 + (px + dx)));

  const auto single = pcanet::extract_patches(random_map(3, 3, 1, 2), 3, 3);
  CHECK(single.cols() == 1);
  CHECK_THROWS_AS(pcanet::extract_patches(random_map(2, 5, 1, 3), 3, 3), Error);
}

TEST_CASE("remove_patch_mean: per-column centering") {
  pcanet::PatchMatrix m(3, 2);
  m.col(0) << 1.0, 2.0, 3.0;
  m.col(1) << 5.0, 5.0, 5.0;
  const auto centered = pcanet::remove_patch_mean(m);
  CHECK(centered(0, 0) == doctest::Approx(-1.0));
  CHECK(centered(1, 0) == doctest::Approx(0.0));
  CHECK(centered(2, 0) == doctest::Approx(1.0));
  for (int r = 0; r < 3; ++r) CHECK(centered(r, 1) == doctest::Approx(0.0));

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  pcanet::PatchMatrix random(9, 40);
  for (int i = 0; i < random.size(); ++i) random.data()[i] = uniform(rng);
  const auto c = pcanet::remove_patch_mean(random);
  for (int col = 0; col < c.cols(); ++col)
    CHECK(std::abs(c.col(col).sum()) < 1e-9 * c.rows());
}

TEST_CASE("learn_filters: rank-1 covariance gives the first coordinate axis") {
  pcanet::PatchMatrix s = pcanet::PatchMatrix::Zero(9, 5);
  s.row(0) << 1.0, -2.0, 0.5, 3.0, -1.0;
  const auto bank = pcanet::learn_filters(s, 1, 3, 3, 1);
  CHECK(bank.eigenvalues[0] == doctest::Approx(s.row(0).squaredNorm()));
  CHECK(bank.filters(0, 0) == doctest::Approx(1.0));
  for (int r = 1; r < 9; ++r) CHECK(std::abs(bank.filters(r, 0)) < 1e-12);
}

TEST_CASE("learn_filters: orthonormality and the trace identity") {
  std::mt19937 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  pcanet::PatchMatrix s(9, 60);
  for (int i = 0; i < s.size(); ++i) s.data()[i] = gauss(rng);
  const auto bank = pcanet::learn_filters(s, 9, 3, 3, 1);

  for (int a = 0; a < 9; ++a)
    for (int b = 0; b < 9; ++b) {
      const double dot = bank.filters.col(a).dot(bank.filters.col(b));
      CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-8);
    }
  for (int l = 1; l < 9; ++l) CHECK(bank.eigenvalues[l] <= bank.eigenvalues[l - 1]);
  const double trace = (s * s.transpose()).trace();
  CHECK(bank.eigenvalues.sum() == doctest::Approx(trace).epsilon(1e-6));

  CHECK_THROWS_AS(pcanet::learn_filters(s, 10, 3, 3, 1), Error);
  CHECK_THROWS_AS(pcanet::learn_filters(pcanet::PatchMatrix::Zero(9, 5), 1, 3, 3, 1),
                  DegenerateInputError);
}

TEST_CASE("convolve_bank: delta kernel is the identity") {
  pcanet::FilterBank bank;
  bank.stage = 1;
  bank.k1 = 3;
  bank.k2 = 3;
  bank.channels = 1;
  bank.filters = Eigen::MatrixXd::Zero(9, 1);
  bank.filters(4, 0) = 1.0;  // center tap
  bank.eigenvalues = Eigen::VectorXd::Ones(1);

  const FlowMap map = random_map(6, 7, 1, 5);
  const auto out = pcanet::convolve_bank({map}, bank);
  REQUIRE(out.size() == 1);
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 7; ++x) CHECK(out[0].at(y, x) == doctest::Approx(map.at(0, y, x)));
}

TEST_CASE("convolve_bank: output count is filters x inputs, zero maps to zero") {
  std::mt19937 rng(13);
  std::normal_distribution<double> gauss(0.0, 1.0);
  pcanet::PatchMatrix s(9, 80);
  for (int i = 0; i < s.size(); ++i) s.data()[i] = gauss(rng);
  auto bank = pcanet::learn_filters(s, 8, 3, 3, 1);
  bank.stage = 1;

  const std::vector<Image> maps{random_map(5, 6, 1, 21), random_map(5, 6, 1, 22)};
  const auto out = pcanet::convolve_bank(maps, bank);
  CHECK(out.size() == 16);
  for (const auto& g : out) {
    CHECK(g.height() == 5);
    CHECK(g.width() == 6);
  }

  const auto zeros = pcanet::convolve_bank({Image(5, 6, 1, 0.0)}, bank);
  for (const auto& g : zeros)
    for (double v : g.values()) CHECK(v == 0.0);

  CHECK_THROWS_AS(pcanet::convolve_bank({random_map(5, 6, 3, 23)}, bank), Error);
}

TEST_CASE("lrn_normalize: identity, reference value, and boundary clamp") {
  std::vector<Grid> maps;
  for (int i = 0; i < 8; ++i) maps.push_back(Grid(4, 4, 1.0));

  pcanet::LrnParams identity;
  identity.bias = 1.0;
  identity.weight = 0.0;
  const auto same = pcanet::lrn_normalize(maps, identity);
  for (const auto& g : same)
    for (double v : g.values()) CHECK(v == 1.0);

  // Interior map with all-ones activations and the default parameters.
  pcanet::LrnParams params;  // bias 2, weight 1e-4, depth 5, exponent 0.75
  const auto out = pcanet::lrn_normalize(maps, params);
  const double expected = 1.0 / std::pow(2.0 + 1e-4 * 5.0, 0.75);
  CHECK(out[3].at(1, 1) == doctest::Approx(expected).epsilon(1e-12));

  // Single map: the neighbourhood clamps to {i}.
  Grid lone(2, 2, 3.0);
  const auto single = pcanet::lrn_normalize({lone}, params);
  const double want = 3.0 / std::pow(2.0 + 1e-4 * 9.0, 0.75);
  CHECK(single[0].at(0, 0) == doctest::Approx(want).epsilon(1e-12));

  CHECK_THROWS_AS(pcanet::lrn_normalize({Grid(2, 2), Grid(3, 2)}, params), Error);
}

TEST_CASE("binarize_encode: bit packing and the Heaviside zero rule") {
  std::vector<Grid> all_pos(8, Grid(2, 2, 0.5));
  const auto t255 = pcanet::binarize_encode(all_pos, 8);
  for (auto v : t255.values) CHECK(v == 255u);

  std::vector<Grid> non_pos{Grid(2, 2, 0.0), Grid(2, 2, -1.0)};
  const auto t0 = pcanet::binarize_encode(non_pos);
  for (auto v : t0.values) CHECK(v == 0u);

  std::vector<Grid> mixed{Grid(1, 1, 0.3), Grid(1, 1, -0.2), Grid(1, 1, 2.0)};
  const auto t5 = pcanet::binarize_encode(mixed, 3);
  CHECK(t5.values[0] == 5u);

  CHECK_THROWS_AS(pcanet::binarize_encode(mixed, 4), Error);
}

TEST_CASE("block_histogram: constant map, mass conservation, partial blocks") {
  pcanet::Hyper hyper;
  hyper.l2 = 3;
  hyper.block_h = 8;
  hyper.block_w = 8;

  pcanet::EncodedMap zeros;
  zeros.height = 8;
  zeros.width = 8;
  zeros.values.assign(64, 0);
  const auto hist = pcanet::block_histogram(zeros, hyper);
  REQUIRE(hist.size() == 8);
  CHECK(hist[0] == doctest::Approx(1.0));
  for (int b = 1; b < 8; ++b) CHECK(hist[b] == 0.0);

  // 10x10 map with 8x8 blocks: B = 4 with partial edge blocks of their own mass.
  std::mt19937 rng(31);
  std::uniform_int_distribution<std::uint32_t> bin(0, 7);
  pcanet::EncodedMap map;
  map.height = 10;
  map.width = 10;
  for (int i = 0; i < 100; ++i) map.values.push_back(bin(rng));

  const auto counts = pcanet::block_histogram_counts(map, hyper);
  const int expected_pixels[4] = {64, 16, 16, 4};
  for (int block = 0; block < 4; ++block) {
    double total = 0.0;
    for (int b = 0; b < 8; ++b) total += counts[block * 8 + b];
    CHECK(total == doctest::Approx(expected_pixels[block]));
  }
  const auto normalized = pcanet::block_histogram(map, hyper);
  for (int block = 0; block < 4; ++block) {
    double total = 0.0;
    for (int b = 0; b < 8; ++b) total += normalized[block * 8 + b];
    CHECK(std::abs(total - 1.0) < 1e-9);
  }

  CHECK(pcanet::block_count(16, 16, hyper) == 4);
}

TEST_CASE("train: filter counts follow the hyperparameters") {
  std::vector<FlowMap> maps;
  for (int i = 0; i < 3; ++i) maps.push_back(random_map(12, 14, 3, 100 + i));

  pcanet::Hyper hyper;  // 3x3 filters, 8 per stage
  const auto model = pcanet::train(maps, hyper);
  CHECK(model.bank1.count() == 8);
  CHECK(model.bank2.count() == 8);
  CHECK(model.bank1.filters.rows() == 27);
  CHECK(model.bank2.filters.rows() == 9);

  pcanet::Hyper ucsd;
  ucsd.k1 = 5;
  ucsd.k2 = 5;
  ucsd.l1 = 7;
  ucsd.l2 = 7;
  ucsd.block_h = 7;
  ucsd.block_w = 7;
  std::vector<FlowMap> bigger;
  for (int i = 0; i < 3; ++i) bigger.push_back(random_map(16, 16, 3, 200 + i));
  const auto model5 = pcanet::train(bigger, ucsd);
  CHECK(model5.bank1.count() == 7);
  CHECK(model5.bank2.count() == 7);
  CHECK(model5.bank1.filters.rows() == 75);

  CHECK_THROWS_AS(pcanet::train({FlowMap(12, 14, 3, 0.4)}, hyper), DegenerateInputError);
}

TEST_CASE("extract_feature: lengths, determinism, dimension checks") {
  pcanet::Hyper hyper;  // k3, L8, block 8x8
  std::vector<FlowMap> maps;
  for (int i = 0; i < 3; ++i) maps.push_back(random_map(24, 32, 3, 300 + i));
  const auto model = pcanet::train(maps, hyper);

  const auto feature = pcanet::extract_feature(maps[0], model);
  CHECK(feature.size() == 24576);  // 256 * 8 * 12
  CHECK(pcanet::feature_length(24, 32, hyper) == 24576);

  const auto again = pcanet::extract_feature(maps[0], model);
  for (Eigen::Index i = 0; i < feature.size(); ++i) CHECK(feature[i] == again[i]);

  CHECK_THROWS_AS(pcanet::extract_feature(random_map(23, 32, 3, 9), model), Error);

  pcanet::Hyper patch_hyper;
  patch_hyper.k1 = 5;
  patch_hyper.k2 = 5;
  patch_hyper.l1 = 7;
  patch_hyper.l2 = 7;
  patch_hyper.block_h = 7;
  patch_hyper.block_w = 7;
  std::vector<FlowMap> patches;
  for (int i = 0; i < 3; ++i) patches.push_back(random_map(12, 16, 3, 400 + i));
  const auto patch_model = pcanet::train(patches, patch_hyper);
  const auto patch_feature = pcanet::extract_feature(patches[1], patch_model);
  CHECK(patch_feature.size() == 5376);  // 128 * 7 * 6
}

TEST_CASE("feature length formula holds across random small hyperparameters") {
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> pick_l(1, 4);
  std::uniform_int_distribution<int> pick_block(2, 5);
  for (int trial = 0; trial < 10; ++trial) {
    pcanet::Hyper hyper;
    hyper.k1 = 3;
    hyper.k2 = 3;
    hyper.l1 = pick_l(rng);
    hyper.l2 = pick_l(rng);
    hyper.block_h = pick_block(rng);
    hyper.block_w = pick_block(rng);
    std::vector<FlowMap> maps;
    for (int i = 0; i < 2; ++i)
      maps.push_back(random_map(8, 9, 3, 500 + trial * 10 + i));
    const auto model = pcanet::train(maps, hyper);
    const auto feature = pcanet::extract_feature(maps[0], model);
    CHECK(feature.size() == pcanet::feature_length(8, 9, hyper));

    // Per-block normalized mass is 1 for every 2^l2 segment.
    const int bins = 1 << hyper.l2;
    for (Eigen::Index base = 0; base < feature.size(); base += bins) {
      double total = 0.0;
      for (int b = 0; b < bins; ++b) total += feature[base + b];
      CHECK(std::abs(total - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("forward pass matches the naive nested-loop reference bit for bit") {
  pcanet::Hyper hyper;
  hyper.k1 = 3;
  hyper.k2 = 3;
  hyper.l1 = 2;
  hyper.l2 = 2;
  hyper.block_h = 3;
  hyper.block_w = 3;

  for (bool lrn_enabled : {false, true}) {
    hyper.lrn_enabled = lrn_enabled;
    std::vector<FlowMap> maps;
    for (int i = 0; i < 6; ++i) maps.push_back(random_map(6, 6, 3, 600 + i));
    const auto model = pcanet::train(maps, hyper);

    for (const auto& map : maps) {
      const NaiveForward expected = naive_forward(map, model);

      std::vector<Grid> stage1 = pcanet::convolve_map(map, model.bank1);
      if (lrn_enabled) stage1 = pcanet::lrn_normalize(stage1, model.lrn);
      REQUIRE(stage1.size() == 2);
      for (int l = 0; l < hyper.l1; ++l) {
        std::vector<Grid> stage2 = pcanet::convolve_map(Image::from_plane(stage1[l]), model.bank2);
        if (lrn_enabled) stage2 = pcanet::lrn_normalize(stage2, model.lrn);
        const auto encoded = pcanet::binarize_encode(stage2, hyper.l2);
        REQUIRE(encoded.values.size() == expected.encoded[l].size());
        for (std::size_t px = 0; px < encoded.values.size(); ++px)
          CHECK(encoded.values[px] == expected.encoded[l][px]);

        const auto counts = pcanet::block_histogram_counts(encoded, hyper);
        REQUIRE(counts.size() == expected.counts[l].size());
        for (std::size_t b = 0; b < counts.size(); ++b)
          CHECK(counts[b] == expected.counts[l][b]);
      }
    }
  }
}
