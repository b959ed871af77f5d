#include "ringbot/calibration.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ringbot/errors.hpp"

namespace ringbot::geometry {

Calibration parse_calibration(const std::string& json_text) {
  Calibration c;
  try {
    const auto j = nlohmann::json::parse(json_text);
    c.intrinsics.fx = j.at("fx").get<double>();
    c.intrinsics.fy = j.at("fy").get<double>();
    c.intrinsics.cx = j.at("cx").get<double>();
    c.intrinsics.cy = j.at("cy").get<double>();
    c.mount.tilt = j.at("tilt_rad").get<double>();
    c.mount.height = j.at("height_m").get<double>();
    c.mount.forward_offset = j.at("forward_offset_m").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("calibration: ") + e.what());
  }
  // Both throw ConfigError subclasses on bad values.
  invert_intrinsics(c.intrinsics);
  c.mount.validate();
  return c;
}

Calibration load_calibration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open calibration file " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_calibration(ss.str());
}

std::string calibration_to_json(const Calibration& c) {
  nlohmann::ordered_json j;
  j["fx"] = c.intrinsics.fx;
  j["fy"] = c.intrinsics.fy;
  j["cx"] = c.intrinsics.cx;
  j["cy"] = c.intrinsics.cy;
  j["tilt_rad"] = c.mount.tilt;
  j["height_m"] = c.mount.height;
  j["forward_offset_m"] = c.mount.forward_offset;
  return j.dump(2);
}

}  // namespace ringbot::geometry
