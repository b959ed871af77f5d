#pragma once

// Coordinate-frame math shared by the simulator and the perception stack.
//
// Conventions:
//   * World and robot frames are y-up. The floor is the (x, z) plane.
//   * Pose2D::heading is measured counterclockwise from +x when the floor is
//     viewed from above with +x to the right and +z up the page.
//   * In the robot frame, +z is forward and +x points to the robot's right.
//   * The camera frame is the usual pinhole frame: +x right, +y down (image
//     rows), +z along the optical axis. The mount tilt pitches the optical
//     axis downward.

#include <array>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace ringbot::geometry {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDefaultHalfFieldWidth = 1.8288;

using Rng = std::mt19937_64;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

struct PlanarPoint {
  double x = 0.0;
  double z = 0.0;

  friend bool operator==(const PlanarPoint&, const PlanarPoint&) = default;
};

struct Pose2D {
  double x = 0.0;
  double z = 0.0;
  double heading = 0.0;

  friend bool operator==(const Pose2D&, const Pose2D&) = default;
};

enum class Alliance { Red, Blue };

constexpr Alliance opponent_of(Alliance a) {
  return a == Alliance::Red ? Alliance::Blue : Alliance::Red;
}

struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
};

/// Downward pitch and placement of the camera on the robot.
struct CameraMount {
  double tilt = 0.0;            // radians, positive pitches the optical axis down
  double height = 0.0;          // meters above the floor
  double forward_offset = 0.0;  // meters ahead of the robot center

  /// Throws ConfigError when tilt is outside (-pi/2, pi/2) or values are not finite.
  void validate() const;
};

struct PixelDetection {
  double u = 0.0;  // column
  double v = 0.0;  // row
  double depth = 0.0;  // meters along the optical axis
};

/// Row-major 3x3 inverse of the pinhole matrix, computed once per calibration.
class InverseIntrinsics {
 public:
  const std::array<double, 9>& matrix() const { return m_; }
  const CameraIntrinsics& source() const { return k_; }

 private:
  friend InverseIntrinsics invert_intrinsics(const CameraIntrinsics& k);
  std::array<double, 9> m_{};
  CameraIntrinsics k_{};
};

/// Row-major K.
std::array<double, 9> intrinsics_matrix(const CameraIntrinsics& k);

/// Throws InvalidIntrinsics when fx or fy is non-positive or |det K| <= 1e-9.
InverseIntrinsics invert_intrinsics(const CameraIntrinsics& k);

/// The homogeneous pixel scaled by depth: (u*d, v*d, d).
Vec3 scaled_homogeneous(const PixelDetection& det);

/// K^-1 * ([u v 1] * depth). The z component equals the depth exactly.
Vec3 pixel_to_camera(const PixelDetection& det, const InverseIntrinsics& inv);

/// Right-handed rotation about the x axis by `angle` radians.
Vec3 rotate_about_x(const Vec3& p, double angle);

/// Rotates a camera-frame point by -tilt about x, flips to y-up and shifts the
/// origin to the robot center on the floor.
Vec3 camera_to_robot(const Vec3& r, const CameraMount& mount);

/// Forward model: robot-frame point to pixel + depth. Empty when the point is
/// not in front of the camera.
std::optional<PixelDetection> robot_to_pixel(const Vec3& p, const CameraIntrinsics& k,
                                             const CameraMount& mount);

PlanarPoint drop_up_axis(const Vec3& w);

/// Wraps into (-pi, pi].
double wrap_angle(double a);

/// Red: unchanged. Blue: rotated by pi about the field center.
Pose2D to_alliance_frame(const Pose2D& p, Alliance alliance);
PlanarPoint to_alliance_frame(const PlanarPoint& p, Alliance alliance);

PlanarPoint normalize_position(const PlanarPoint& p, double half_field_width);

std::vector<double> inject_noise(std::span<const double> values, double fraction, Rng& rng);

/// World floor point expressed in the robot frame (x right, z forward).
PlanarPoint ring_to_robot_frame(const PlanarPoint& ring, const Pose2D& robot);

/// Inverse of ring_to_robot_frame.
PlanarPoint robot_to_world_frame(const PlanarPoint& local, const Pose2D& robot);

double distance(const PlanarPoint& a, const PlanarPoint& b);
double norm(const Vec3& v);

}  // namespace ringbot::geometry
