#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <tuple>

#include "ringbot/errors.hpp"
#include "ringbot/vision.hpp"
#include "scenes.hpp"

using namespace ringbot;
using namespace ringbot::vision;

namespace {

// Reference HSV on the half-degree scale using the sector form of the hue.
// Exact integer form: hue = 30 * (sector * d + n) / d half-degrees, ties up.
Hsv hsv_oracle(int r, int g, int b) {
  const int mx = std::max({r, g, b}), mn = std::min({r, g, b}), d = mx - mn;
  int h = 0;
  if (d > 0) {
    long num = 0;
    if (mx == r) {
      num = g - b >= 0 ? g - b : 6L * d + (g - b);
    } else if (mx == g) {
      num = 2L * d + (b - r);
    } else {
      num = 4L * d + (r - g);
    }
    h = static_cast<int>((60 * num + d) / (2L * d)) % 180;
  }
  const int s = mx == 0 ? 0 : static_cast<int>((2L * 255 * d + mx) / (2L * mx));
  return {h, s, mx};
}

GrayImage blur_oracle(const Plane<std::uint8_t>& m, int rad) {
  GrayImage out(m.width, m.height);
  const int n = (2 * rad + 1) * (2 * rad + 1);
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      long s = 0;
      for (int dy = -rad; dy <= rad; ++dy) {
        for (int dx = -rad; dx <= rad; ++dx) {
          s += m.at(std::clamp(x + dx, 0, m.width - 1), std::clamp(y + dy, 0, m.height - 1));
        }
      }
      out.at(x, y) = static_cast<std::uint8_t>(std::floor(static_cast<double>(s) / n + 0.5));
    }
  }
  return out;
}

// Union-find labeling, independent of the library's flood fill.
std::vector<std::tuple<int, double, double>> components_oracle(const Plane<std::uint8_t>& m, int min_area) {
  const int n = m.width * m.height;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) {
      a = parent[a] = parent[parent[a]];
    }
    return a;
  };
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      if (!m.at(x, y)) continue;
      for (auto [dx, dy] : {std::pair{-1, 0}, {-1, -1}, {0, -1}, {1, -1}}) {
        if (m.contains(x + dx, y + dy) && m.at(x + dx, y + dy)) {
          parent[find(y * m.width + x)] = find((y + dy) * m.width + x + dx);
        }
      }
    }
  }
  std::map<int, std::tuple<int, long, long>> acc;
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      if (!m.at(x, y)) continue;
      auto& [c, sx, sy] = acc[find(y * m.width + x)];
      ++c;
      sx += x;
      sy += y;
    }
  }
  std::vector<std::tuple<int, double, double>> out;
  for (const auto& [root, v] : acc) {
    const auto& [c, sx, sy] = v;
    if (c >= min_area) out.emplace_back(c, double(sx) / c, double(sy) / c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

BinaryMask random_mask(int w, int h, double p, std::mt19937_64& rng) {
  BinaryMask m(w, h);
  std::bernoulli_distribution on(p);
  for (auto& v : m.data) v = on(rng) ? 255 : 0;
  return m;
}

}  // namespace

TEST(Hsv, KnownColors) {
  EXPECT_EQ(rgb_to_hsv({255, 0, 0}), (Hsv{0, 255, 255}));
  EXPECT_EQ(rgb_to_hsv({0, 255, 0}), (Hsv{60, 255, 255}));
  EXPECT_EQ(rgb_to_hsv({0, 0, 255}), (Hsv{120, 255, 255}));
  EXPECT_EQ(rgb_to_hsv({128, 0, 128}), (Hsv{150, 255, 128}));
  EXPECT_EQ(rgb_to_hsv({0, 0, 0}), (Hsv{0, 0, 0}));
  EXPECT_EQ(rgb_to_hsv({90, 90, 90}), (Hsv{0, 0, 90}));
  EXPECT_EQ(rgb_to_hsv(scenes::kRingPurple), (Hsv{138, 166, 200}));
}

TEST(Hsv, MatchesOracleOnColorLattice) {
  for (int r = 0; r < 256; r += 5) {
    for (int g = 0; g < 256; g += 3) {
      for (int b = 0; b < 256; b += 7) {
        const Hsv a = rgb_to_hsv({std::uint8_t(r), std::uint8_t(g), std::uint8_t(b)});
        ASSERT_EQ(a, hsv_oracle(r, g, b)) << r << "," << g << "," << b;
      }
    }
  }
}

TEST(Hsv, RangeBoundsAreInclusive) {
  const HsvRange range;
  EXPECT_TRUE(range.contains({123, 39, 76}));
  EXPECT_TRUE(range.contains({169, 192, 255}));
  EXPECT_FALSE(range.contains({122, 100, 100}));
  EXPECT_FALSE(range.contains({170, 100, 100}));
  EXPECT_FALSE(range.contains({140, 38, 100}));
  EXPECT_FALSE(range.contains({140, 193, 100}));
  EXPECT_FALSE(range.contains({140, 100, 75}));
}

TEST(Hsv, ThresholdAgreesWithPerPixelTest) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> c(0, 255);
  ColorImage img(40, 30);
  for (auto& v : img.data) v = std::uint8_t(c(rng));
  const HsvRange range;
  const BinaryMask m = hsv_threshold(img, range);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const Rgb p = img.at(x, y);
      ASSERT_EQ(m.at(x, y) != 0, range.contains(hsv_oracle(p.r, p.g, p.b)));
      ASSERT_TRUE(m.at(x, y) == 0 || m.at(x, y) == 255);
    }
  }
}

TEST(Hsv, RangeValidation) {
  HsvRange bad;
  bad.h_min = 170;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = HsvRange{};
  bad.v_max = 256;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Blur, MatchesBruteForceOracle) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const int w = 5 + trial % 17, h = 4 + trial % 11, rad = trial % 6;
    const BinaryMask m = random_mask(w, h, 0.3, rng);
    ASSERT_EQ(box_blur(m, rad), blur_oracle(m, rad)) << "trial " << trial;
  }
}

TEST(Blur, RadiusZeroIsIdentityAndFlatStaysFlat) {
  std::mt19937_64 rng(1);
  const BinaryMask m = random_mask(12, 9, 0.5, rng);
  EXPECT_EQ(box_blur(m, 0).data, m.data);
  const BinaryMask full(20, 20, 255);
  for (auto v : box_blur(full, 17).data) EXPECT_EQ(v, 255);
  EXPECT_THROW(box_blur(m, -1), std::invalid_argument);
}

TEST(Blur, SinglePixelSpreadsToWindow) {
  BinaryMask m(9, 9);
  m.at(4, 4) = 255;
  const GrayImage b = box_blur(m, 1);
  // 255 / 9 = 28.33 rounds to 28.
  EXPECT_EQ(b.at(3, 3), 28);
  EXPECT_EQ(b.at(5, 5), 28);
  EXPECT_EQ(b.at(6, 4), 0);
}

TEST(Mask, KeepsPixelsAboveThreshold) {
  ColorImage img(3, 1, {10, 20, 30});
  GrayImage blurred(3, 1);
  blurred.at(0, 0) = 0;
  blurred.at(1, 0) = 5;
  blurred.at(2, 0) = 6;
  const ColorImage out = mask_image(img, blurred, 5);
  EXPECT_EQ(out.at(0, 0).r, 0);
  EXPECT_EQ(out.at(1, 0).r, 0);
  EXPECT_EQ(out.at(2, 0).b, 30);
  EXPECT_THROW(mask_image(img, GrayImage(2, 1), 0), std::invalid_argument);
}

TEST(Components, MatchUnionFindOracle) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const BinaryMask m = random_mask(30, 20, 0.35 + 0.01 * trial, rng);
    const int min_area = 1 + trial % 5;
    const auto got = find_candidates(m, min_area);
    std::vector<std::tuple<int, double, double>> mine;
    for (const auto& c : got) mine.emplace_back(c.pixel_count, c.u, c.v);
    std::sort(mine.begin(), mine.end());
    ASSERT_EQ(mine, components_oracle(m, min_area)) << "trial " << trial;
    for (std::size_t i = 1; i < got.size(); ++i) {
      ASSERT_GE(got[i - 1].pixel_count, got[i].pixel_count);
    }
  }
}

TEST(Components, DiagonalNeighboursJoin) {
  BinaryMask m(4, 4);
  m.at(0, 0) = m.at(1, 1) = m.at(2, 2) = 255;
  const auto c = find_candidates(m, 1);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].pixel_count, 3);
  EXPECT_EQ(c[0].box, (BoundingBox{0, 0, 3, 3}));
  EXPECT_DOUBLE_EQ(c[0].u, 1.0);
  EXPECT_THROW(find_candidates(m, 0), std::invalid_argument);
}

TEST(Depth, MedianIgnoresInvalid) {
  DepthMap d(3, 3, 0.0f);
  EXPECT_FALSE(sample_depth(d, 1, 1).has_value());
  d.at(0, 0) = 1.0f;
  d.at(1, 1) = 2.0f;
  d.at(2, 2) = 4.0f;
  EXPECT_DOUBLE_EQ(*sample_depth(d, 1, 1), 2.0);
  d.at(2, 0) = 3.0f;
  // Even count: mean of the middle pair.
  EXPECT_DOUBLE_EQ(*sample_depth(d, 1, 1), 2.5);
  d.at(0, 2) = NAN;
  EXPECT_DOUBLE_EQ(*sample_depth(d, 1, 1), 2.5);
  // Window clipped at the corner.
  EXPECT_DOUBLE_EQ(*sample_depth(d, 0, 0), 1.5);
}

TEST(Detector, ShapeWindows) {
  const HeuristicDetector det;
  Candidate ring{{0, 0, 40, 40}, 20, 20, 800};  // fill 0.5
  EXPECT_TRUE(det.evaluate(ring, {}).accept);
  Candidate bar{{0, 0, 100, 10}, 50, 5, 600};
  EXPECT_FALSE(det.evaluate(bar, {}).accept);
  Candidate solid{{0, 0, 20, 20}, 10, 10, 400};
  EXPECT_FALSE(det.evaluate(solid, {}).accept);
  const Verdict v = det.evaluate(ring, {});
  EXPECT_GE(v.score, 0.0);
  EXPECT_LE(v.score, 1.0);
}

TEST(Pipeline, AnnulusOnClutter) {
  ColorImage img = scenes::clutter(320, 240, 77);
  const scenes::Annulus ring{141.3, 122.6, 22.0, 13.0};
  scenes::paint(img, ring, scenes::kRingPurple);
  DepthMap depth(320, 240, 1.4f);
  const PipelineConfig cfg;
  const auto res = process_image(img, &depth, cfg, HeuristicDetector(cfg.detector));
  ASSERT_EQ(res.accepted.size(), 1u);
  const Candidate& c = res.candidates[res.accepted[0].candidate_index];
  EXPECT_LT(std::hypot(c.u - ring.cx, c.v - ring.cy), 2.0);
  ASSERT_EQ(res.detections.size(), 1u);
  EXPECT_FLOAT_EQ(res.detections[0].depth, 1.4f);
  // Far from the ring everything is black after masking.
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (std::hypot(x - ring.cx, y - ring.cy) > ring.outer + std::sqrt(2.0) * cfg.blur_radius + 1) {
        const Rgb p = res.masked.at(x, y);
        ASSERT_EQ(p.r + p.g + p.b, 0) << x << "," << y;
      }
    }
  }
}

TEST(Pipeline, NoDepthReportsCandidatesOnly) {
  ColorImage img(120, 120, {60, 60, 60});
  scenes::paint(img, {60, 60, 20, 12}, scenes::kRingPurple);
  const PipelineConfig cfg;
  const auto res = process_image(img, nullptr, cfg, HeuristicDetector());
  EXPECT_EQ(res.accepted.size(), 1u);
  EXPECT_TRUE(res.detections.empty());
  DepthMap holes(120, 120, 0.0f);
  const auto res2 = process_image(img, &holes, cfg, HeuristicDetector());
  EXPECT_EQ(res2.dropped_no_depth, 1);
  const DepthMap wrong(10, 10, 1.0f);
  EXPECT_THROW(process_image(img, &wrong, cfg, HeuristicDetector()), std::invalid_argument);
}

TEST(Pipeline, LocalizeSortsByDistance) {
  const auto inv = geometry::invert_intrinsics({600, 600, 320, 240});
  const geometry::CameraMount mount{0.3, 0.3, 0.1};
  const auto out = localize({{320, 300, 3.0}, {320, 300, 1.0}, {100, 260, 2.0}}, inv, mount);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_LE(out[0].distance, out[1].distance);
  EXPECT_LE(out[1].distance, out[2].distance);
  EXPECT_EQ(out[0].pixel.depth, 1.0);
}

TEST(PipelineConfig, ParseValidateRoundTrip) {
  const auto cfg = parse_pipeline_config(R"({"hsv": {"h_min": 120}, "blur_radius": 5})");
  EXPECT_EQ(cfg.hsv.h_min, 120);
  EXPECT_EQ(cfg.hsv.h_max, 169);
  EXPECT_EQ(cfg.blur_radius, 5);
  const auto again = parse_pipeline_config(pipeline_config_to_json(cfg));
  EXPECT_EQ(again.hsv.h_min, 120);
  EXPECT_EQ(again.min_area, cfg.min_area);
  EXPECT_THROW(parse_pipeline_config(R"({"blur_radius": -1})"), ConfigError);
  EXPECT_THROW(parse_pipeline_config(R"({"hsv": {"h_min": 200}})"), ConfigError);
  EXPECT_THROW(parse_pipeline_config("{"), ConfigError);
}

class ImageIo : public ::testing::Test {
 protected:
  std::filesystem::path dir = std::filesystem::temp_directory_path() /
                              ("ringbot_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                               "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
  void SetUp() override { std::filesystem::create_directories(dir); }
  void TearDown() override { std::filesystem::remove_all(dir); }
};

TEST_F(ImageIo, ColorPngAndPpmRoundTrip) {
  const ColorImage img = scenes::clutter(33, 17, 3);
  write_png(dir / "a.png", img);
  write_ppm(dir / "a.ppm", img);
  EXPECT_EQ(read_color_image(dir / "a.png").data, img.data);
  EXPECT_EQ(read_color_image(dir / "a.ppm").data, img.data);
}

TEST_F(ImageIo, DepthPngIsMillimeters) {
  DepthMap d(4, 3, 0.0f);
  d.at(1, 1) = 1.234f;
  d.at(3, 2) = 0.5f;
  write_depth_png(dir / "d.png", d);
  const DepthMap back = read_depth(dir / "d.png");
  EXPECT_FLOAT_EQ(back.at(1, 1), 1.234f);
  EXPECT_FLOAT_EQ(back.at(3, 2), 0.5f);
  EXPECT_EQ(back.at(0, 0), 0.0f);
  write_raw_depth(dir / "d.raw", d);
  EXPECT_EQ(read_depth(dir / "d.raw").data, d.data);
}

TEST_F(ImageIo, UnreadableFilesThrow) {
  EXPECT_THROW(read_color_image(dir / "missing.png"), ImageIoError);
  {
    std::ofstream f(dir / "junk.png");
    f << "definitely not an image";
  }
  EXPECT_THROW(read_color_image(dir / "junk.png"), ImageIoError);
}
