#include "ringbot/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "ringbot/errors.hpp"

namespace ringbot::geometry {

void CameraMount::validate() const {
  if (!std::isfinite(tilt) || !std::isfinite(height) || !std::isfinite(forward_offset)) {
    throw ConfigError("camera mount values must be finite");
  }
  if (!(tilt > -kPi / 2 && tilt < kPi / 2)) {
    throw ConfigError("camera tilt must lie in (-pi/2, pi/2)");
  }
}

std::array<double, 9> intrinsics_matrix(const CameraIntrinsics& k) {
  return {k.fx, 0.0, k.cx,
          0.0, k.fy, k.cy,
          0.0, 0.0, 1.0};
}

InverseIntrinsics invert_intrinsics(const CameraIntrinsics& k) {
  const bool finite = std::isfinite(k.fx) && std::isfinite(k.fy) && std::isfinite(k.cx) &&
                      std::isfinite(k.cy);
  if (!finite || !(k.fx > 0.0) || !(k.fy > 0.0) || std::abs(k.fx * k.fy) <= 1e-9) {
    throw InvalidIntrinsics("camera matrix is singular or degenerate");
  }
  InverseIntrinsics inv;
  inv.k_ = k;
  inv.m_ = {1.0 / k.fx, 0.0, -k.cx / k.fx,
            0.0, 1.0 / k.fy, -k.cy / k.fy,
            0.0, 0.0, 1.0};
  return inv;
}

Vec3 scaled_homogeneous(const PixelDetection& det) {
  return {det.u * det.depth, det.v * det.depth, det.depth};
}

Vec3 pixel_to_camera(const PixelDetection& det, const InverseIntrinsics& inv) {
  const Vec3 s = scaled_homogeneous(det);
  const auto& m = inv.matrix();
  return {m[0] * s.x + m[1] * s.y + m[2] * s.z,
          m[3] * s.x + m[4] * s.y + m[5] * s.z,
          m[6] * s.x + m[7] * s.y + m[8] * s.z};
}

Vec3 rotate_about_x(const Vec3& p, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {p.x, p.y * c - p.z * s, p.y * s + p.z * c};
}

Vec3 camera_to_robot(const Vec3& r, const CameraMount& mount) {
  const Vec3 w = rotate_about_x(r, -mount.tilt);
  // y-down to y-up, then camera origin to robot origin.
  return {w.x, -w.y + mount.height, w.z + mount.forward_offset};
}

std::optional<PixelDetection> robot_to_pixel(const Vec3& p, const CameraIntrinsics& k,
                                             const CameraMount& mount) {
  const Vec3 rel{p.x, -(p.y - mount.height), p.z - mount.forward_offset};
  const Vec3 cam = rotate_about_x(rel, mount.tilt);
  if (!(cam.z > 0.0)) {
    return std::nullopt;
  }
  return PixelDetection{k.fx * cam.x / cam.z + k.cx, k.fy * cam.y / cam.z + k.cy, cam.z};
}

PlanarPoint drop_up_axis(const Vec3& w) { return {w.x, w.z}; }

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) {
    r += 2.0 * kPi;
  }
  if (r > kPi) {
    r -= 2.0 * kPi;
  }
  return r;
}

Pose2D to_alliance_frame(const Pose2D& p, Alliance alliance) {
  if (alliance == Alliance::Red) {
    return p;
  }
  return {-p.x, -p.z, wrap_angle(p.heading + kPi)};
}

PlanarPoint to_alliance_frame(const PlanarPoint& p, Alliance alliance) {
  if (alliance == Alliance::Red) {
    return p;
  }
  return {-p.x, -p.z};
}

PlanarPoint normalize_position(const PlanarPoint& p, double half_field_width) {
  if (!(half_field_width > 0.0)) {
    throw ConfigError("half field width must be positive");
  }
  return {p.x / half_field_width, p.z / half_field_width};
}

std::vector<double> inject_noise(std::span<const double> values, double fraction, Rng& rng) {
  if (!(fraction >= 0.0)) {
    throw std::invalid_argument("noise fraction must be non-negative");
  }
  std::vector<double> out(values.begin(), values.end());
  if (fraction == 0.0) {
    return out;
  }
  std::uniform_real_distribution<double> dist(-fraction, fraction);
  for (double& v : out) {
    v += dist(rng);
  }
  return out;
}

PlanarPoint ring_to_robot_frame(const PlanarPoint& ring, const Pose2D& robot) {
  const double dx = ring.x - robot.x;
  const double dz = ring.z - robot.z;
  const double c = std::cos(robot.heading);
  const double s = std::sin(robot.heading);
  // right = (sin h, -cos h), forward = (cos h, sin h)
  return {dx * s - dz * c, dx * c + dz * s};
}

PlanarPoint robot_to_world_frame(const PlanarPoint& local, const Pose2D& robot) {
  const double c = std::cos(robot.heading);
  const double s = std::sin(robot.heading);
  return {robot.x + local.x * s + local.z * c, robot.z - local.x * c + local.z * s};
}

double distance(const PlanarPoint& a, const PlanarPoint& b) {
  return std::hypot(a.x - b.x, a.z - b.z);
}

double norm(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

}  // namespace ringbot::geometry
