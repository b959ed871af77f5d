#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ringbot/geometry.hpp"

namespace ringbot::sim {

using geometry::Alliance;
using geometry::PlanarPoint;
using geometry::Pose2D;
using geometry::Rng;

// Reward table values.
namespace reward {
inline constexpr double kPerRing = 5.0;
inline constexpr double kPin = -5.0;
inline constexpr double kPerGoal = 12.0;
inline constexpr double kWrongSide = -17.5;
}  // namespace reward

enum class Layout { Standard, SeededRandom };

struct SimConfig {
  double field_width = 3.6576;
  double dt = 1.0 / 12.0;
  int episode_steps = 1260;
  int ring_count = 72;
  int ring_capacity = 10;
  double robot_half_extent = 0.2286;
  double pickup_radius = 0.2;
  double pin_duration = 5.0;
  double max_forward_speed = 1.0;      // m/s at full command
  double max_turn_rate = geometry::kPi;  // rad/s at full command
  double fov_horizontal = 1.2112;      // radians
  double max_range = 1.8288;           // meters
  double noise_fraction = 0.1;
  int stack_depth = 11;
  double goal_radius = 0.1651;
  double contact_margin = 0.01;  // gap below which two bodies count as touching
  Layout layout = Layout::Standard;
  std::uint64_t seed = 0;

  double half_width() const { return 0.5 * field_width; }
  double game_length() const { return dt * episode_steps; }
  int pin_steps() const;
  void validate() const;
};

SimConfig parse_sim_config(const std::string& json_text);
SimConfig load_sim_config(const std::filesystem::path& path);
std::string sim_config_to_json(const SimConfig& cfg);

struct RobotState {
  Pose2D pose;
  Alliance alliance = Alliance::Red;
  int rings_held = 0;
  double pin_timer = 0.0;
  int pin_steps = 0;
  bool disqualified = false;
};

struct Ring {
  PlanarPoint position;
  bool collected = false;
  int collected_by = -1;  // robot index when collected
};

enum class GoalKind { AllianceRed, AllianceBlue, Neutral };

struct MobileGoal {
  PlanarPoint position;
  GoalKind kind = GoalKind::Neutral;
  double radius = 0.1651;
};

/// robots[0] is always Red and robots[1] Blue.
struct FieldState {
  std::array<RobotState, 2> robots;
  std::vector<Ring> rings;
  std::vector<MobileGoal> goals;
  int step_index = 0;
  double clock = 0.0;
  bool terminal = false;

  RobotState& robot(Alliance a) { return robots[index_of(a)]; }
  const RobotState& robot(Alliance a) const { return robots[index_of(a)]; }
  static constexpr std::size_t index_of(Alliance a) { return a == Alliance::Red ? 0 : 1; }
};

struct Action {
  double forward = 0.0;  // [-1, 1]
  double turn = 0.0;     // [-1, 1], positive turns counterclockwise (left)

  friend bool operator==(const Action&, const Action&) = default;
};

struct RewardDelta {
  double ring = 0.0;
  double pin = 0.0;
  double goal = 0.0;
  double position = 0.0;

  double total() const { return ring + pin + goal + position; }
  RewardDelta& operator+=(const RewardDelta& o) {
    ring += o.ring;
    pin += o.pin;
    goal += o.goal;
    position += o.position;
    return *this;
  }
  friend bool operator==(const RewardDelta&, const RewardDelta&) = default;
};

using Rewards = std::array<RewardDelta, 2>;

FieldState init_field(const SimConfig& cfg);

/// Unicycle integration, collision projection, ring pickup, pinning, clock.
/// Throws InvalidAction on non-finite commands and std::logic_error when the
/// state is already terminal.
Rewards step(FieldState& state, const std::array<Action, 2>& actions, const SimConfig& cfg);

Rewards update_pinning(FieldState& state, const SimConfig& cfg);

/// Goal and side rewards. Throws std::logic_error on a non-terminal state.
Rewards finalize_episode(const FieldState& state, const SimConfig& cfg);

/// Indices of OnField rings visible to `who`, ascending by distance then index.
std::vector<std::size_t> visible_rings(const FieldState& state, Alliance who, const SimConfig& cfg);

/// 180 degree rotation about the field center with the alliances swapped.
FieldState rotate180(const FieldState& state);

bool robots_in_contact(const FieldState& state, const SimConfig& cfg);
bool touches_wall(const RobotState& robot, const SimConfig& cfg);
/// Penetration depth between the two robot boxes (0 when separated).
double robot_overlap(const FieldState& state, const SimConfig& cfg);

// ---- observation -----------------------------------------------------------

inline constexpr std::size_t kObservationSize = 27;
inline constexpr std::size_t kRingSlots = 10;
inline constexpr std::size_t kSelfOffset = 0;      // x, z, heading
inline constexpr std::size_t kOpponentOffset = 3;  // x, z, heading
inline constexpr std::size_t kTimeIndex = 6;
inline constexpr std::size_t kRingOffset = 7;      // 10 x (x, z)

using ObservationVector = std::array<double, kObservationSize>;

/// Raw quantities an observation is assembled from. Poses are already in the
/// observer's alliance frame; rings are in the robot frame, nearest first.
struct ObservationInputs {
  Pose2D self;
  Pose2D opponent;
  double elapsed = 0.0;  // seconds
  std::vector<PlanarPoint> rings;
};

ObservationInputs gather_observation_inputs(const FieldState& state, Alliance who,
                                            const SimConfig& cfg);

/// Normalizes, pads and (when rng is non-null and noise_fraction > 0) adds
/// uniform noise to the position entries.
ObservationVector assemble_observation(const ObservationInputs& in, const SimConfig& cfg, Rng* rng);

ObservationVector build_observation(const FieldState& state, Alliance who, const SimConfig& cfg,
                                    Rng* rng);

/// Fixed-depth FIFO of observation frames, oldest first, zero-initialized.
class StackedObservation {
 public:
  explicit StackedObservation(int depth = 11);

  void push(std::span<const double> obs);
  const ObservationVector& latest() const { return frames_.back(); }
  const ObservationVector& frame(std::size_t i) const { return frames_[i]; }
  std::size_t depth() const { return frames_.size(); }
  std::vector<double> flatten() const;

 private:
  std::deque<ObservationVector> frames_;
};

StackedObservation push_stack(StackedObservation stack, std::span<const double> obs);

/// Per-robot observation noise generator derived from the episode seed.
Rng observation_rng(std::uint64_t seed, Alliance who);

}  // namespace ringbot::sim
