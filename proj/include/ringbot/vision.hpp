#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ringbot/geometry.hpp"
#include "ringbot/image.hpp"

namespace ringbot::vision {

struct Hsv {
  int h = 0;  // 0..180
  int s = 0;  // 0..255
  int v = 0;  // 0..255

  friend bool operator==(const Hsv&, const Hsv&) = default;
};

/// Closed per-channel bounds. Hue on the 0..180 half-degree scale.
struct HsvRange {
  int h_min = 123;
  int h_max = 169;
  int s_min = 39;
  int s_max = 192;
  int v_min = 76;
  int v_max = 255;

  bool contains(const Hsv& p) const {
    return p.h >= h_min && p.h <= h_max && p.s >= s_min && p.s <= s_max && p.v >= v_min &&
           p.v <= v_max;
  }
  void validate() const;
};

struct BoundingBox {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  int area() const { return width * height; }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Candidate {
  BoundingBox box;
  double u = 0.0;  // centroid column
  double v = 0.0;  // centroid row
  int pixel_count = 0;
};

struct HeuristicThresholds {
  double aspect_min = 0.5;
  double aspect_max = 2.5;
  double fill_min = 0.2;
  double fill_max = 0.9;
};

struct PipelineConfig {
  HsvRange hsv;
  int blur_radius = 17;
  int mask_threshold = 0;  // blurred value must exceed this to keep a pixel
  int min_area = 50;
  HeuristicThresholds detector;

  void validate() const;
};

PipelineConfig parse_pipeline_config(const std::string& json_text);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
std::string pipeline_config_to_json(const PipelineConfig& cfg);

struct Verdict {
  bool accept = false;
  double score = 0.0;  // [0, 1]
};

/// Accept/reject stage run on every ring candidate. `crop` is the candidate's
/// bounding box cut from the masked image.
class Detector {
 public:
  virtual ~Detector() = default;
  virtual Verdict evaluate(const Candidate& candidate, const ColorImage& crop) const = 0;
};

/// Shape heuristic: bounding-box aspect ratio and fill ratio windows.
class HeuristicDetector final : public Detector {
 public:
  explicit HeuristicDetector(HeuristicThresholds t = {}) : t_(t) {}
  Verdict evaluate(const Candidate& candidate, const ColorImage& crop) const override;

 private:
  HeuristicThresholds t_;
};

Hsv rgb_to_hsv(Rgb p);

BinaryMask hsv_threshold(const ColorImage& img, const HsvRange& range);

/// Mean over a (2r+1)^2 window with edge replication, rounded half up.
GrayImage box_blur(const Plane<std::uint8_t>& mask, int radius);

/// Keeps pixels whose blurred value exceeds `threshold`, black elsewhere.
ColorImage mask_image(const ColorImage& img, const Plane<std::uint8_t>& blurred, int threshold);

/// 8-connected components of nonzero pixels with area >= min_area, largest
/// first; ties by box top then left.
std::vector<Candidate> find_candidates(const Plane<std::uint8_t>& mask, int min_area);

ColorImage crop(const ColorImage& img, const BoundingBox& box);

/// Median of the valid (nonzero, finite) depths in a (2*half+1)^2 window.
std::optional<double> sample_depth(const DepthMap& depth, double u, double v, int half = 1);

struct AcceptedCandidate {
  std::size_t candidate_index = 0;
  double score = 0.0;
  std::optional<double> depth;
};

struct PipelineResult {
  BinaryMask threshold;   // step 2
  GrayImage blurred;      // step 3
  ColorImage masked;      // step 4
  std::vector<Candidate> candidates;
  std::vector<AcceptedCandidate> accepted;
  std::vector<geometry::PixelDetection> detections;
  int rejected = 0;
  int dropped_no_depth = 0;
};

/// Full preprocessing + detector + depth lookup. With no depth map, accepted
/// candidates are reported but no detections are produced.
PipelineResult process_image(const ColorImage& img, const DepthMap* depth,
                             const PipelineConfig& cfg, const Detector& detector);

std::vector<geometry::PixelDetection> detect_rings(const ColorImage& img, const DepthMap& depth,
                                                   const PipelineConfig& cfg,
                                                   const Detector& detector);

struct LocalizedRing {
  geometry::PixelDetection pixel;
  geometry::Vec3 robot;          // robot frame, y up
  geometry::PlanarPoint floor;   // robot frame (x right, z forward)
  double distance = 0.0;         // planar, from the robot center
};

/// Robot-frame positions sorted ascending by planar distance.
std::vector<LocalizedRing> localize(const std::vector<geometry::PixelDetection>& detections,
                                    const geometry::InverseIntrinsics& inv,
                                    const geometry::CameraMount& mount);

}  // namespace ringbot::vision
