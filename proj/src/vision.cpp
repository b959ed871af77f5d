#include "ringbot/vision.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ringbot/errors.hpp"

namespace ringbot::vision {

void HsvRange::validate() const {
  const auto in = [](int lo, int hi, int cap) { return 0 <= lo && lo <= hi && hi <= cap; };
  if (!in(h_min, h_max, 180) || !in(s_min, s_max, 255) || !in(v_min, v_max, 255)) {
    throw ConfigError("HSV range needs 0 <= min <= max within each channel scale");
  }
}

void PipelineConfig::validate() const {
  hsv.validate();
  if (blur_radius < 0) {
    throw ConfigError("blur radius must be >= 0");
  }
  if (mask_threshold < 0 || mask_threshold > 255) {
    throw ConfigError("mask threshold must lie in [0, 255]");
  }
  if (min_area < 1) {
    throw ConfigError("min_area must be >= 1");
  }
  if (!(detector.aspect_min <= detector.aspect_max) || !(detector.fill_min <= detector.fill_max)) {
    throw ConfigError("detector thresholds need min <= max");
  }
}

PipelineConfig parse_pipeline_config(const std::string& json_text) {
  PipelineConfig cfg;
  try {
    const auto j = nlohmann::json::parse(json_text);
    if (j.contains("hsv")) {
      const auto& h = j.at("hsv");
      cfg.hsv.h_min = h.value("h_min", cfg.hsv.h_min);
      cfg.hsv.h_max = h.value("h_max", cfg.hsv.h_max);
      cfg.hsv.s_min = h.value("s_min", cfg.hsv.s_min);
      cfg.hsv.s_max = h.value("s_max", cfg.hsv.s_max);
      cfg.hsv.v_min = h.value("v_min", cfg.hsv.v_min);
      cfg.hsv.v_max = h.value("v_max", cfg.hsv.v_max);
    }
    cfg.blur_radius = j.value("blur_radius", cfg.blur_radius);
    cfg.mask_threshold = j.value("mask_threshold", cfg.mask_threshold);
    cfg.min_area = j.value("min_area", cfg.min_area);
    if (j.contains("detector")) {
      const auto& d = j.at("detector");
      cfg.detector.aspect_min = d.value("aspect_min", cfg.detector.aspect_min);
      cfg.detector.aspect_max = d.value("aspect_max", cfg.detector.aspect_max);
      cfg.detector.fill_min = d.value("fill_min", cfg.detector.fill_min);
      cfg.detector.fill_max = d.value("fill_max", cfg.detector.fill_max);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("pipeline config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open pipeline config " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_pipeline_config(ss.str());
}

std::string pipeline_config_to_json(const PipelineConfig& cfg) {
  nlohmann::ordered_json j;
  j["hsv"] = {{"h_min", cfg.hsv.h_min}, {"h_max", cfg.hsv.h_max}, {"s_min", cfg.hsv.s_min},
              {"s_max", cfg.hsv.s_max}, {"v_min", cfg.hsv.v_min}, {"v_max", cfg.hsv.v_max}};
  j["blur_radius"] = cfg.blur_radius;
  j["mask_threshold"] = cfg.mask_threshold;
  j["min_area"] = cfg.min_area;
  j["detector"] = {{"aspect_min", cfg.detector.aspect_min},
                   {"aspect_max", cfg.detector.aspect_max},
                   {"fill_min", cfg.detector.fill_min},
                   {"fill_max", cfg.detector.fill_max}};
  return j.dump(2);
}

Verdict HeuristicDetector::evaluate(const Candidate& c, const ColorImage&) const {
  if (c.box.width <= 0 || c.box.height <= 0) {
    return {};
  }
  const double aspect = static_cast<double>(c.box.width) / c.box.height;
  const double fill = static_cast<double>(c.pixel_count) / c.box.area();
  const bool accept = aspect >= t_.aspect_min && aspect <= t_.aspect_max && fill >= t_.fill_min &&
                      fill <= t_.fill_max;
  // Score peaks for a square box with a fill halfway through the window.
  const double aspect_term = 1.0 - std::abs(std::log(aspect)) / std::log(std::max(t_.aspect_max, 1.0 + 1e-9));
  const double mid = 0.5 * (t_.fill_min + t_.fill_max);
  const double half = std::max(0.5 * (t_.fill_max - t_.fill_min), 1e-9);
  const double fill_term = 1.0 - std::abs(fill - mid) / half;
  const double score = std::clamp(std::clamp(aspect_term, 0.0, 1.0) * std::clamp(fill_term, 0.0, 1.0), 0.0, 1.0);
  return {accept, score};
}

Hsv rgb_to_hsv(Rgb p) {
  const int r = p.r;
  const int g = p.g;
  const int b = p.b;
  const int vmax = std::max({r, g, b});
  const int vmin = std::min({r, g, b});
  const int diff = vmax - vmin;
  Hsv out;
  out.v = vmax;
  out.s = vmax == 0 ? 0 : static_cast<int>(std::lround(255.0 * diff / vmax));
  if (diff == 0) {
    out.h = 0;
    return out;
  }
  double deg = 0.0;
  if (vmax == r) {
    deg = 60.0 * (g - b) / diff;
  } else if (vmax == g) {
    deg = 120.0 + 60.0 * (b - r) / diff;
  } else {
    deg = 240.0 + 60.0 * (r - g) / diff;
  }
  if (deg < 0.0) {
    deg += 360.0;
  }
  int h = static_cast<int>(std::lround(deg / 2.0));
  if (h >= 180) {
    h -= 180;
  }
  out.h = h;
  return out;
}

BinaryMask hsv_threshold(const ColorImage& img, const HsvRange& range) {
  BinaryMask mask(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      mask.at(x, y) = range.contains(rgb_to_hsv(img.at(x, y))) ? 255 : 0;
    }
  }
  return mask;
}

GrayImage box_blur(const Plane<std::uint8_t>& mask, int radius) {
  if (radius < 0) {
    throw std::invalid_argument("blur radius must be >= 0");
  }
  const int w = mask.width;
  const int h = mask.height;
  GrayImage out(w, h);
  if (radius == 0 || w == 0 || h == 0) {
    out.data = mask.data;
    return out;
  }
  // Separable sums over edge-replicated borders.
  std::vector<int> rows(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int s = 0;
      for (int dx = -radius; dx <= radius; ++dx) {
        s += mask.at(std::clamp(x + dx, 0, w - 1), y);
      }
      rows[static_cast<std::size_t>(y) * w + x] = s;
    }
  }
  const long area = static_cast<long>(2 * radius + 1) * (2 * radius + 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      long s = 0;
      for (int dy = -radius; dy <= radius; ++dy) {
        s += rows[static_cast<std::size_t>(std::clamp(y + dy, 0, h - 1)) * w + x];
      }
      out.at(x, y) = static_cast<std::uint8_t>((2 * s + area) / (2 * area));
    }
  }
  return out;
}

ColorImage mask_image(const ColorImage& img, const Plane<std::uint8_t>& blurred, int threshold) {
  if (img.width != blurred.width || img.height != blurred.height) {
    throw std::invalid_argument("mask_image: image and mask dimensions differ");
  }
  ColorImage out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (blurred.at(x, y) > threshold) {
        out.set(x, y, img.at(x, y));
      }
    }
  }
  return out;
}

std::vector<Candidate> find_candidates(const Plane<std::uint8_t>& mask, int min_area) {
  if (min_area < 1) {
    throw std::invalid_argument("min_area must be >= 1");
  }
  const int w = mask.width;
  const int h = mask.height;
  std::vector<std::uint8_t> seen(mask.data.size(), 0);
  std::vector<Candidate> out;
  std::vector<std::pair<int, int>> stack;
  for (int y0 = 0; y0 < h; ++y0) {
    for (int x0 = 0; x0 < w; ++x0) {
      const std::size_t i0 = static_cast<std::size_t>(y0) * w + x0;
      if (mask.data[i0] == 0 || seen[i0] != 0) {
        continue;
      }
      int min_x = x0, max_x = x0, min_y = y0, max_y = y0;
      long sum_x = 0, sum_y = 0;
      int count = 0;
      seen[i0] = 1;
      stack.assign(1, {x0, y0});
      while (!stack.empty()) {
        const auto [x, y] = stack.back();
        stack.pop_back();
        ++count;
        sum_x += x;
        sum_y += y;
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx;
            const int ny = y + dy;
            if ((dx == 0 && dy == 0) || !mask.contains(nx, ny)) {
              continue;
            }
            const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
            if (mask.data[ni] != 0 && seen[ni] == 0) {
              seen[ni] = 1;
              stack.emplace_back(nx, ny);
            }
          }
        }
      }
      if (count >= min_area) {
        Candidate c;
        c.box = {min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
        c.u = static_cast<double>(sum_x) / count;
        c.v = static_cast<double>(sum_y) / count;
        c.pixel_count = count;
        out.push_back(c);
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.pixel_count != b.pixel_count) {
      return a.pixel_count > b.pixel_count;
    }
    if (a.box.y != b.box.y) {
      return a.box.y < b.box.y;
    }
    return a.box.x < b.box.x;
  });
  return out;
}

ColorImage crop(const ColorImage& img, const BoundingBox& box) {
  ColorImage out(box.width, box.height);
  for (int y = 0; y < box.height; ++y) {
    for (int x = 0; x < box.width; ++x) {
      out.set(x, y, img.at(box.x + x, box.y + y));
    }
  }
  return out;
}

std::optional<double> sample_depth(const DepthMap& depth, double u, double v, int half) {
  const int cx = static_cast<int>(std::lround(u));
  const int cy = static_cast<int>(std::lround(v));
  std::vector<double> vals;
  for (int dy = -half; dy <= half; ++dy) {
    for (int dx = -half; dx <= half; ++dx) {
      if (!depth.contains(cx + dx, cy + dy)) {
        continue;
      }
      const double d = depth.at(cx + dx, cy + dy);
      if (d > 0.0 && std::isfinite(d)) {
        vals.push_back(d);
      }
    }
  }
  if (vals.empty()) {
    return std::nullopt;
  }
  std::sort(vals.begin(), vals.end());
  const std::size_t n = vals.size();
  return n % 2 == 1 ? vals[n / 2] : 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
}

PipelineResult process_image(const ColorImage& img, const DepthMap* depth,
                             const PipelineConfig& cfg, const Detector& detector) {
  if (depth != nullptr && (depth->width != img.width || depth->height != img.height)) {
    throw std::invalid_argument("depth map dimensions differ from the color image");
  }
  PipelineResult res;
  res.threshold = hsv_threshold(img, cfg.hsv);
  res.blurred = box_blur(res.threshold, cfg.blur_radius);
  res.masked = mask_image(img, res.blurred, cfg.mask_threshold);
  // Candidates come from the in-range pixels that survived the mask.
  const BinaryMask survivors = hsv_threshold(res.masked, cfg.hsv);
  res.candidates = find_candidates(survivors, cfg.min_area);

  for (std::size_t i = 0; i < res.candidates.size(); ++i) {
    const Candidate& c = res.candidates[i];
    const Verdict verdict = detector.evaluate(c, crop(res.masked, c.box));
    if (!verdict.accept) {
      ++res.rejected;
      continue;
    }
    AcceptedCandidate acc{i, std::clamp(verdict.score, 0.0, 1.0), std::nullopt};
    if (depth != nullptr) {
      acc.depth = sample_depth(*depth, c.u, c.v);
      if (acc.depth) {
        res.detections.push_back({c.u, c.v, *acc.depth});
      } else {
        ++res.dropped_no_depth;
      }
    }
    res.accepted.push_back(acc);
  }
  return res;
}

std::vector<geometry::PixelDetection> detect_rings(const ColorImage& img, const DepthMap& depth,
                                                   const PipelineConfig& cfg,
                                                   const Detector& detector) {
  return process_image(img, &depth, cfg, detector).detections;
}

std::vector<LocalizedRing> localize(const std::vector<geometry::PixelDetection>& detections,
                                    const geometry::InverseIntrinsics& inv,
                                    const geometry::CameraMount& mount) {
  std::vector<LocalizedRing> out;
  out.reserve(detections.size());
  for (const auto& det : detections) {
    LocalizedRing ring;
    ring.pixel = det;
    ring.robot = geometry::camera_to_robot(geometry::pixel_to_camera(det, inv), mount);
    ring.floor = geometry::drop_up_axis(ring.robot);
    ring.distance = std::hypot(ring.floor.x, ring.floor.z);
    out.push_back(ring);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const LocalizedRing& a, const LocalizedRing& b) { return a.distance < b.distance; });
  return out;
}

}  // namespace ringbot::vision
