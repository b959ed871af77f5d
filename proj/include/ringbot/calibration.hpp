#pragma once

#include <filesystem>
#include <string>

#include "ringbot/geometry.hpp"

namespace ringbot::geometry {

/// Camera intrinsics plus mount, as produced by an offline calibration step.
struct Calibration {
  CameraIntrinsics intrinsics;
  CameraMount mount;
};

/// JSON object with fx, fy, cx, cy, tilt_rad, height_m, forward_offset_m.
Calibration parse_calibration(const std::string& json_text);
Calibration load_calibration(const std::filesystem::path& path);
std::string calibration_to_json(const Calibration& c);

}  // namespace ringbot::geometry
