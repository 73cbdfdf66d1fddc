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

#include "aed/model_io.hpp"

#include <cstring>
#include <fstream>

#include "aed/config.hpp"

namespace aed::cli {

namespace {

constexpr char kMagic[8] = {'A', 'E', 'D', 'M', 'O', 'D', 'E', 'L'};

// Little-endian fixed-width primitives; doubles as raw IEEE-754 bytes so
// round-trips are bit-exact.
class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw Error("model_io: cannot write '" + path + "'");
  }
  void bytes(const void* data, std::size_t size) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  }
  void u32(std::uint32_t v) { bytes(&v, sizeof v); }
  void i64(std::int64_t v) { bytes(&v, sizeof v); }
  void f64(double v) { bytes(&v, sizeof v); }
  void text(const std::string& s) {
    i64(static_cast<std::int64_t>(s.size()));
    bytes(s.data(), s.size());
  }
  // Matrices are stored row-major regardless of Eigen's in-memory layout.
  void matrix(const Eigen::MatrixXd& m) {
    i64(m.rows());
    i64(m.cols());
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
    bytes(rm.data(), sizeof(double) * static_cast<std::size_t>(rm.size()));
  }
  void vector(const Eigen::VectorXd& v) {
    i64(v.size());
    bytes(v.data(), sizeof(double) * static_cast<std::size_t>(v.size()));
  }
  void close(const std::string& path) {
    out_.flush();
    if (!out_) throw Error("model_io: write failed for '" + path + "'");
  }

 private:
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw Error("model_io: cannot open '" + path + "'");
  }
  void bytes(void* data, std::size_t size) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
    if (static_cast<std::size_t>(in_.gcount()) != size)
      throw Error("model_io: '" + path_ + "' is truncated (format version " +
                  std::to_string(kModelFormatVersion) + " expected)");
  }
  std::uint32_t u32() {
    std::uint32_t v;
    bytes(&v, sizeof v);
    return v;
  }
  std::int64_t i64() {
    std::int64_t v;
    bytes(&v, sizeof v);
    return v;
  }
  double f64() {
    double v;
    bytes(&v, sizeof v);
    return v;
  }
  std::string text() {
    const std::int64_t size = checked_size(i64());
    std::string s(static_cast<std::size_t>(size), '\0');
    bytes(s.data(), s.size());
    return s;
  }
  Eigen::MatrixXd matrix() {
    const std::int64_t rows = checked_size(i64());
    const std::int64_t cols = checked_size(i64());
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(rows, cols);
    bytes(rm.data(), sizeof(double) * static_cast<std::size_t>(rm.size()));
    return rm;
  }
  Eigen::VectorXd vector() {
    const std::int64_t size = checked_size(i64());
    Eigen::VectorXd v(size);
    bytes(v.data(), sizeof(double) * static_cast<std::size_t>(v.size()));
    return v;
  }

 private:
  std::int64_t checked_size(std::int64_t v) const {
    if (v < 0 || v > (std::int64_t{1} << 40))
      throw Error("model_io: '" + path_ + "' is corrupted (implausible size field; format version " +
                  std::to_string(kModelFormatVersion) + " expected)");
    return v;
  }
  std::ifstream in_;
  std::string path_;
};

void write_bank(Writer& w, const pcanet::FilterBank& bank) {
  w.u32(static_cast<std::uint32_t>(bank.stage));
  w.u32(static_cast<std::uint32_t>(bank.k1));
  w.u32(static_cast<std::uint32_t>(bank.k2));
  w.u32(static_cast<std::uint32_t>(bank.channels));
  w.matrix(bank.filters);
  w.vector(bank.eigenvalues);
}

pcanet::FilterBank read_bank(Reader& r) {
  pcanet::FilterBank bank;
  bank.stage = static_cast<int>(r.u32());
  bank.k1 = static_cast<int>(r.u32());
  bank.k2 = static_cast<int>(r.u32());
  bank.channels = static_cast<int>(r.u32());
  bank.filters = r.matrix();
  bank.eigenvalues = r.vector();
  return bank;
}

}  // namespace

void save_model(const std::string& path, const ModelFile& file) {
  Writer w(path);
  w.bytes(kMagic, sizeof kMagic);
  w.u32(kModelFormatVersion);
  w.text(file.config_text);

  const pipeline::Model& m = file.model;
  w.f64(m.flow_magnitude_cap);
  w.u32(static_cast<std::uint32_t>(m.frame_height));
  w.u32(static_cast<std::uint32_t>(m.frame_width));

  const pcanet::Model& p = m.pcanet;
  w.u32(static_cast<std::uint32_t>(p.input_height));
  w.u32(static_cast<std::uint32_t>(p.input_width));
  w.u32(static_cast<std::uint32_t>(p.input_channels));
  write_bank(w, p.bank1);
  write_bank(w, p.bank2);

  const kpca::Model& k = m.kpca;
  w.matrix(k.train_features);
  w.f64(k.sigma);
  w.u32(static_cast<std::uint32_t>(k.q));
  w.matrix(k.alphas);
  w.vector(k.lambdas);
  w.vector(k.col_means);
  w.f64(k.grand_mean);
  w.f64(k.threshold);
  w.close(path);
}

ModelFile load_model(const std::string& path) {
  Reader r(path);
  char magic[8];
  r.bytes(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw Error("model_io: '" + path + "' is not a model container (bad magic; format version " +
                std::to_string(kModelFormatVersion) + " expected)");
  const std::uint32_t version = r.u32();
  if (version != kModelFormatVersion)
    throw Error("model_io: '" + path + "' has format version " + std::to_string(version) +
                " but this build reads version " + std::to_string(kModelFormatVersion));

  ModelFile file;
  file.config_text = r.text();
  const KeyValues keys = parse_config_text(file.config_text);
  file.model.config = make_pipeline_config(keys);

  file.model.flow_magnitude_cap = r.f64();
  file.model.frame_height = static_cast<int>(r.u32());
  file.model.frame_width = static_cast<int>(r.u32());

  pcanet::Model& p = file.model.pcanet;
  p.hyper = file.model.config.pcanet;
  p.lrn = file.model.config.lrn;
  p.input_height = static_cast<int>(r.u32());
  p.input_width = static_cast<int>(r.u32());
  p.input_channels = static_cast<int>(r.u32());
  p.bank1 = read_bank(r);
  p.bank2 = read_bank(r);

  kpca::Model& k = file.model.kpca;
  k.train_features = r.matrix();
  k.sigma = r.f64();
  k.q = static_cast<int>(r.u32());
  k.alphas = r.matrix();
  k.lambdas = r.vector();
  k.col_means = r.vector();
  k.grand_mean = r.f64();
  k.threshold = r.f64();
  return file;
}

}  // namespace aed::cli
