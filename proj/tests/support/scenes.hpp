#pragma once

// Synthetic camera frames shared by the vision tests and the acceptance run.

#include <cmath>
#include <random>

#include "ringbot/image.hpp"

namespace scenes {

using ringbot::vision::ColorImage;
using ringbot::vision::Rgb;

// Hue 138, saturation 166, value 200 on the half-degree scale.
inline constexpr Rgb kRingPurple{150, 70, 200};

struct Annulus {
  double cx = 0.0;
  double cy = 0.0;
  double outer = 0.0;
  double inner = 0.0;

  bool covers(int x, int y) const {
    const double d = std::hypot(x - cx, y - cy);
    return d <= outer && d >= inner;
  }
};

inline void paint(ColorImage& img, const Annulus& a, Rgb c) {
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (a.covers(x, y)) {
        img.set(x, y, c);
      }
    }
  }
}

// Colors kept deliberately outside the ring window: reds, greens, blues, a
// washed-out lilac (saturation too low) and a deep violet (too dark).
inline Rgb clutter_color(std::mt19937_64& rng) {
  static constexpr Rgb palette[] = {
      {200, 40, 40}, {40, 170, 60}, {50, 80, 210}, {230, 140, 30}, {200, 190, 210},
      {40, 20, 60},  {120, 120, 120}, {230, 230, 40}, {20, 160, 170}, {90, 60, 40}};
  return palette[std::uniform_int_distribution<int>(0, 9)(rng)];
}

/// Background of random rectangles and speckle, none of it in the window.
inline ColorImage clutter(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ColorImage img(w, h, {70, 80, 75});
  std::uniform_int_distribution<int> px(0, w - 1), py(0, h - 1), sz(4, 40);
  for (int k = 0; k < 60; ++k) {
    const Rgb c = clutter_color(rng);
    const int x0 = px(rng), y0 = py(rng), bw = sz(rng), bh = sz(rng);
    for (int y = y0; y < std::min(h, y0 + bh); ++y) {
      for (int x = x0; x < std::min(w, x0 + bw); ++x) {
        img.set(x, y, c);
      }
    }
  }
  for (int k = 0; k < w * h / 20; ++k) {
    img.set(px(rng), py(rng), clutter_color(rng));
  }
  return img;
}

}  // namespace scenes
