#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

namespace ringbot::vision {

template <typename T>
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Plane() = default;
  Plane(int w, int h, T fill = T{}) : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
    if (w < 0 || h < 0) {
      throw std::invalid_argument("negative image dimensions");
    }
  }

  T& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  const T& at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }

  friend bool operator==(const Plane&, const Plane&) = default;
};

/// One byte per pixel, every value is 0 or 255.
struct BinaryMask : Plane<std::uint8_t> {
  using Plane::Plane;
};

struct GrayImage : Plane<std::uint8_t> {
  using Plane::Plane;
};

/// Meters per pixel; 0 marks an invalid reading.
struct DepthMap : Plane<float> {
  using Plane::Plane;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Row-major interleaved 8-bit RGB.
struct ColorImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  ColorImage() = default;
  ColorImage(int w, int h, Rgb fill = {});

  Rgb at(int x, int y) const {
    const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    return {data[i], data[i + 1], data[i + 2]};
  }
  void set(int x, int y, Rgb c) {
    const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    data[i] = c.r;
    data[i + 1] = c.g;
    data[i + 2] = c.b;
  }
  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }

  friend bool operator==(const ColorImage&, const ColorImage&) = default;
};

class ImageIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// PNG (any 8/16-bit color type, converted to RGB8) or binary PPM (P6),
// chosen by file signature.
ColorImage read_color_image(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const ColorImage& img);
void write_png(const std::filesystem::path& path, const Plane<std::uint8_t>& img);
ColorImage read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const ColorImage& img);

// Depth: 16-bit grayscale PNG in millimeters, or the raw `.depth` layout
// (u32 LE width, u32 LE height, then row-major f32 LE meters).
DepthMap read_depth(const std::filesystem::path& path);
DepthMap read_depth_png(const std::filesystem::path& path);
void write_depth_png(const std::filesystem::path& path, const DepthMap& depth);
DepthMap read_raw_depth(const std::filesystem::path& path);
void write_raw_depth(const std::filesystem::path& path, const DepthMap& depth);

}  // namespace ringbot::vision
