#pragma once

#include <cmath>

#include "ringbot/geometry.hpp"

namespace oracle {

// Forward pinhole model built from the camera's axes expressed in the robot
// frame; deliberately shares no code with the library.
struct Projector {
  ringbot::geometry::CameraIntrinsics k;
  ringbot::geometry::CameraMount m;

  ringbot::geometry::PixelDetection project(const ringbot::geometry::Vec3& p) const {
    const double s = std::sin(m.tilt), c = std::cos(m.tilt);
    const double ex[3] = {1.0, 0.0, 0.0};
    const double ey[3] = {0.0, -c, -s};  // image down
    const double ez[3] = {0.0, -s, c};   // optical axis, pitched toward the floor
    const double d[3] = {p.x, p.y - m.height, p.z - m.forward_offset};
    const double xc = d[0] * ex[0] + d[1] * ex[1] + d[2] * ex[2];
    const double yc = d[0] * ey[0] + d[1] * ey[1] + d[2] * ey[2];
    const double zc = d[0] * ez[0] + d[1] * ez[1] + d[2] * ez[2];
    return {k.fx * xc / zc + k.cx, k.fy * yc / zc + k.cy, zc};
  }
};

}  // namespace oracle
