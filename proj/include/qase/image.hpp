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

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace qase {

// 8-bit RGB image, row-major, 3 bytes per pixel.
class Image {
 public:
  static constexpr int kChannels = 3;

  Image() = default;
  // Zero-filled. Throws ImageError unless width, height > 0.
  Image(int width, int height);
  // Throws ImageError if pixels.size() != width * height * 3.
  Image(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<std::uint8_t>& pixels() const { return pixels_; }
  std::vector<std::uint8_t>& pixels() { return pixels_; }

  std::uint8_t at(int x, int y, int c) const { return pixels_[index(x, y, c)]; }
  std::uint8_t& at(int x, int y, int c) { return pixels_[index(x, y, c)]; }

  void fill(std::uint8_t r, std::uint8_t g, std::uint8_t b);

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * kChannels + c;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// Binary P6 PPM with maxval 255. Comments in the header are skipped.
Image load_ppm(const std::filesystem::path& path);
void save_ppm(const Image& image, const std::filesystem::path& path);

// Width and height from a P6 header, without reading pixel data.
struct ImageSize {
  int width = 0;
  int height = 0;
};
ImageSize read_ppm_size(const std::filesystem::path& path);

// Three strictly increasing positive sigmas: minimal, intermediate, maximal.
class BlurLevelSet {
 public:
  static constexpr double kDefault[3] = {1.0, 2.0, 4.0};

  BlurLevelSet() : BlurLevelSet(kDefault[0], kDefault[1], kDefault[2]) {}
  // Throws ImageError unless 0 < minimal < intermediate < maximal.
  BlurLevelSet(double minimal, double intermediate, double maximal);

  double operator[](std::size_t i) const { return sigmas_[i]; }
  const double* begin() const { return sigmas_; }
  const double* end() const { return sigmas_ + 3; }

 private:
  double sigmas_[3];
};

// Normalized 1-D Gaussian weights for offsets -r..r, r = ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma);

// Separable Gaussian blur with replicated borders, rounded half away from
// zero. sigma == 0 returns a copy; negative sigma throws ImageError.
Image gaussian_blur(const Image& image, double sigma);

// Zeroes one channel (0 = red, 1 = green, 2 = blue).
Image drop_channel(const Image& image, int channel);

// Copies the first half of `src` to `dst`, yielding an unreadable image.
void write_truncated_copy(const std::filesystem::path& src, const std::filesystem::path& dst);

}  // namespace qase
