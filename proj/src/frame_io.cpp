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

#include "aed/frame_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>

#ifdef AED_WITH_OPENCV
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#endif

namespace aed::cli {

namespace {

namespace fs = std::filesystem;

std::string lowercase_extension(const std::string& path) {
  std::string ext = fs::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

// Reads the next whitespace/comment-delimited token of a PNM header.
std::string next_pnm_token(std::istream& in) {
  std::string token;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!token.empty()) return token;
      continue;
    }
    token.push_back(static_cast<char>(c));
  }
  return token;
}

GrayFrame load_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("frame_io: cannot open '" + path + "'");
  const std::string magic = next_pnm_token(in);
  if (magic != "P5" && magic != "P6")
    throw Error("frame_io: '" + path + "' is not a binary PGM/PPM (magic " + magic + ")");
  const int width = std::stoi(next_pnm_token(in));
  const int height = std::stoi(next_pnm_token(in));
  const int maxval = std::stoi(next_pnm_token(in));
  if (width < 1 || height < 1 || maxval < 1 || maxval > 255)
    throw Error("frame_io: unsupported PNM header in '" + path + "'");
  const int channels = magic == "P6" ? 3 : 1;
  std::vector<unsigned char> raw(static_cast<std::size_t>(width) * height * channels);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size())
    throw Error("frame_io: truncated pixel data in '" + path + "'");

  GrayFrame frame(height, width);
  const double scale = 1.0 / maxval;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t base = (static_cast<std::size_t>(y) * width + x) * channels;
      if (channels == 1) {
        frame.at(y, x) = raw[base] * scale;
      } else {
        // BT.601 luminance.
        frame.at(y, x) =
            (0.299 * raw[base] + 0.587 * raw[base + 1] + 0.114 * raw[base + 2]) * scale;
      }
    }
  }
  return frame;
}

bool is_frame_file(const fs::path& path) {
  static const char* kExtensions[] = {".pgm", ".ppm", ".png", ".jpg", ".jpeg",
                                      ".bmp", ".tif", ".tiff"};
  const std::string ext = lowercase_extension(path.string());
  return std::any_of(std::begin(kExtensions), std::end(kExtensions),
                     [&](const char* e) { return ext == e; });
}

}  // namespace

GrayFrame load_gray_frame(const std::string& path) {
  const std::string ext = lowercase_extension(path);
  if (ext == ".pgm" || ext == ".ppm") return load_pnm(path);
#ifdef AED_WITH_OPENCV
  cv::Mat img = cv::imread(path, cv::IMREAD_GRAYSCALE);
  if (img.empty()) throw Error("frame_io: cannot decode '" + path + "'");
  GrayFrame frame(img.rows, img.cols);
  for (int y = 0; y < img.rows; ++y)
    for (int x = 0; x < img.cols; ++x)
      frame.at(y, x) = img.at<unsigned char>(y, x) / 255.0;
  return frame;
#else
  throw Error("frame_io: '" + path + "' — only PGM/PPM are supported in this build");
#endif
}

void save_pgm(const std::string& path, const Grid& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("frame_io: cannot write '" + path + "'");
  out << "P5\n" << image.width() << " " << image.height() << "\n255\n";
  std::vector<unsigned char> raw(image.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double v = std::clamp(image.values()[i], 0.0, 1.0);
    raw[i] = static_cast<unsigned char>(std::lround(v * 255.0));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw Error("frame_io: write failed for '" + path + "'");
}

std::vector<std::string> list_frame_files(const std::string& dir) {
  if (!fs::is_directory(dir)) throw Error("frame_io: '" + dir + "' is not a directory");
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && is_frame_file(entry.path()))
      files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<GrayFrame> load_frame_dir(const std::string& dir) {
  const std::vector<std::string> files = list_frame_files(dir);
  if (files.size() < 2)
    throw Error("frame_io: '" + dir + "' holds " + std::to_string(files.size()) +
                " frame(s); at least 2 are required");
  std::vector<GrayFrame> frames;
  frames.reserve(files.size());
  for (const auto& file : files) {
    frames.push_back(load_gray_frame(file));
    if (!frames.back().same_shape(frames.front()))
      throw Error("frame_io: '" + file + "' dimensions differ from the first frame");
  }
  return frames;
}

}  // namespace aed::cli
