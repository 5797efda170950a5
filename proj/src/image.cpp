/*
 * Copyright 2026 The QASE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "qase/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "qase/error.hpp"

namespace qase {
namespace {

struct PpmHeader {
  int width = 0;
  int height = 0;
};

// Reads one header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string token;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  while (c != EOF && !std::isspace(c) && c != '#') {
    token.push_back(static_cast<char>(c));
    c = in.get();
  }
  // The single whitespace byte after maxval separates header from data; it
  // has been consumed here.
  if (c == '#') in.unget();
  return token;
}

int parse_dimension(const std::string& token, const std::string& what, const std::filesystem::path& path) {
  if (token.empty() || !std::all_of(token.begin(), token.end(), [](unsigned char ch) { return std::isdigit(ch); }) ||
      token.size() > 9) {
    throw ImageError(path.string() + ": bad " + what + " \"" + token + "\"");
  }
  return std::stoi(token);
}

PpmHeader read_header(std::istream& in, const std::filesystem::path& path) {
  const std::string magic = next_token(in);
  if (magic != "P6") throw ImageError(path.string() + ": unsupported magic " + (magic.empty() ? "<empty>" : magic));
  PpmHeader h;
  h.width = parse_dimension(next_token(in), "width", path);
  h.height = parse_dimension(next_token(in), "height", path);
  const int maxval = parse_dimension(next_token(in), "maxval", path);
  if (maxval != 255) throw ImageError(path.string() + ": unsupported maxval " + std::to_string(maxval));
  if (h.width <= 0 || h.height <= 0) throw ImageError(path.string() + ": empty image");
  return h;
}

}  // namespace

Image::Image(int width, int height) : Image(width, height, std::vector<std::uint8_t>(
                                                               static_cast<std::size_t>(std::max(width, 0)) *
                                                               std::max(height, 0) * kChannels)) {}

Image::Image(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width <= 0 || height <= 0) throw ImageError("image dimensions must be positive");
  if (pixels_.size() != static_cast<std::size_t>(width) * height * kChannels) {
    throw ImageError("pixel buffer size does not match " + std::to_string(width) + "x" + std::to_string(height));
  }
}

void Image::fill(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  for (std::size_t i = 0; i < pixels_.size(); i += kChannels) {
    pixels_[i] = r;
    pixels_[i + 1] = g;
    pixels_[i + 2] = b;
  }
}

Image load_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageError("cannot read " + path.string());
  const PpmHeader h = read_header(in, path);
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(h.width) * h.height * Image::kChannels);
  in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (static_cast<std::size_t>(in.gcount()) != pixels.size()) {
    throw ImageError(path.string() + ": truncated pixel data (" + std::to_string(in.gcount()) + " of " +
                     std::to_string(pixels.size()) + " bytes)");
  }
  return Image(h.width, h.height, std::move(pixels));
}

ImageSize read_ppm_size(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageError("cannot read " + path.string());
  const PpmHeader h = read_header(in, path);
  return {h.width, h.height};
}

void save_ppm(const Image& image, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ImageError("cannot write " + path.string());
  out << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels().data()), static_cast<std::streamsize>(image.pixels().size()));
  if (!out) throw ImageError("short write to " + path.string());
}

BlurLevelSet::BlurLevelSet(double minimal, double intermediate, double maximal)
    : sigmas_{minimal, intermediate, maximal} {
  if (!(minimal > 0.0 && minimal < intermediate && intermediate < maximal) || !std::isfinite(maximal)) {
    throw ImageError("blur levels must satisfy 0 < minimal < intermediate < maximal");
  }
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ImageError("gaussian_kernel: sigma must be > 0");
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> w(2 * r + 1);
  double sum = 0.0;
  for (int k = -r; k <= r; ++k) {
    w[k + r] = std::exp(-static_cast<double>(k) * k / (2.0 * sigma * sigma));
    sum += w[k + r];
  }
  for (double& v : w) v /= sum;
  return w;
}

Image gaussian_blur(const Image& image, double sigma) {
  if (std::isnan(sigma) || sigma < 0.0) throw ImageError("gaussian_blur: sigma must be >= 0");
  if (sigma == 0.0) return image;

  const std::vector<double> w = gaussian_kernel(sigma);
  const int r = static_cast<int>(w.size() / 2);
  const int width = image.width();
  const int height = image.height();
  constexpr int C = Image::kChannels;

  std::vector<double> rows(static_cast<std::size_t>(width) * height * C, 0.0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < C; ++c) {
        double acc = 0.0;
        for (int k = -r; k <= r; ++k) {
          const int xs = std::clamp(x + k, 0, width - 1);
          acc += w[k + r] * image.at(xs, y, c);
        }
        rows[(static_cast<std::size_t>(y) * width + x) * C + c] = acc;
      }
    }
  }

  Image out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < C; ++c) {
        double acc = 0.0;
        for (int k = -r; k <= r; ++k) {
          const int ys = std::clamp(y + k, 0, height - 1);
          acc += w[k + r] * rows[(static_cast<std::size_t>(ys) * width + x) * C + c];
        }
        out.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::round(acc), 0.0, 255.0));
      }
    }
  }
  return out;
}

Image drop_channel(const Image& image, int channel) {
  if (channel < 0 || channel >= Image::kChannels) {
    throw ImageError("drop_channel: channel " + std::to_string(channel) + " out of range");
  }
  Image out = image;
  auto& px = out.pixels();
  for (std::size_t i = static_cast<std::size_t>(channel); i < px.size(); i += Image::kChannels) px[i] = 0;
  return out;
}

void write_truncated_copy(const std::filesystem::path& src, const std::filesystem::path& dst) {
  std::ifstream in(src, std::ios::binary);
  if (!in) throw ImageError("cannot read " + src.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (dst.has_parent_path()) std::filesystem::create_directories(dst.parent_path());
  std::ofstream out(dst, std::ios::binary | std::ios::trunc);
  if (!out) throw ImageError("cannot write " + dst.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
}

}  // namespace qase
