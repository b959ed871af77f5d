#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ringbot/episode.hpp"
#include "ringbot/link.hpp"

namespace ringbot::policy {

using geometry::PlanarPoint;
using geometry::Pose2D;
using sim::Action;
using sim::ObservationVector;
using sim::Policy;
using sim::PolicyContext;

struct ControlGains {
  double k_turn = 2.0;
  double scan_rate = 0.5;  // turn command while no ring is visible
};

/// Steering toward a point given in the robot frame (x right, z forward).
Action steer_toward(const PlanarPoint& local, const ControlGains& gains = {});

/// Chases the nearest ring slot of the observation.
Action greedy_policy(const ObservationVector& obs, const ControlGains& gains = {});

class GreedyPolicy final : public Policy {
 public:
  explicit GreedyPolicy(ControlGains gains = {}) : gains_(gains) {}
  Action act(const PolicyContext& ctx) override { return greedy_policy(ctx.stack.latest(), gains_); }
  std::string name() const override { return "greedy"; }

 private:
  ControlGains gains_;
};

class ZeroPolicy final : public Policy {
 public:
  Action act(const PolicyContext&) override { return {}; }
  std::string name() const override { return "zero"; }
};

/// Uniform commands in [-1, 1]; restarts its stream on reset().
class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(std::uint64_t seed) : seed_(seed), rng_(seed) {}
  Action act(const PolicyContext& ctx) override;
  void reset() override { rng_.seed(seed_); }
  std::string name() const override { return "random"; }

 private:
  std::uint64_t seed_;
  geometry::Rng rng_;
};

// ---- grid planning -----------------------------------------------------------

struct Cell {
  int col = 0;
  int row = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Occupancy grid anchored at `origin` (the minimum corner). Cell (c, r)
/// covers x in [origin.x + c*res, origin.x + (c+1)*res), same for z and r.
struct GridMap {
  double resolution = 0.1;
  PlanarPoint origin;
  int cols = 0;
  int rows = 0;
  std::vector<std::uint8_t> occupied;  // row-major

  GridMap() = default;
  GridMap(int cols, int rows, double resolution, PlanarPoint origin = {});

  bool in_bounds(Cell c) const { return c.col >= 0 && c.row >= 0 && c.col < cols && c.row < rows; }
  bool blocked(Cell c) const { return occupied[index(c)] != 0; }
  bool free(Cell c) const { return in_bounds(c) && !blocked(c); }
  void set(Cell c, bool value) { occupied[index(c)] = value ? 1 : 0; }
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(cols) +
           static_cast<std::size_t>(c.col);
  }
  Cell cell_of(const PlanarPoint& p) const;
  PlanarPoint center(Cell c) const;
};

/// Grid over the whole field with the goals and the opponent inflated by
/// `inflation` (clamped up to the robot half-extent).
GridMap build_grid(const sim::FieldState& state, geometry::Alliance self, const sim::SimConfig& cfg,
                   double resolution = 0.1, double inflation = 0.0);

struct Path {
  std::vector<PlanarPoint> waypoints;
  std::vector<Cell> cells;
  int straight_steps = 0;
  int diagonal_steps = 0;
  double cost = 0.0;  // straight*res + diagonal*sqrt(2)*res
};

/// Cost of a move sequence, evaluated the same way everywhere.
double path_cost(int straight_steps, int diagonal_steps, double resolution);

/// 8-connected A*, no corner cutting. Throws NoPathError when either end is
/// blocked or outside the grid, or when the goal is unreachable.
Path astar_plan(const GridMap& grid, Cell start, Cell goal);
Path astar_plan(const GridMap& grid, const PlanarPoint& start, const PlanarPoint& goal);

/// Nearest free cell by breadth-first search, nullopt on a full grid.
std::optional<Cell> nearest_free(const GridMap& grid, Cell from);

/// Pure pursuit: steers at the first waypoint farther than `lookahead`.
/// Zero action once the last waypoint is within `tolerance`.
Action follow_path(const Path& path, const Pose2D& pose, double lookahead,
                   const ControlGains& gains = {}, double tolerance = 0.05);

struct PlannerOptions {
  double resolution = 0.1;
  double lookahead = 0.3;
  double inflation = 0.0;  // 0 means the robot half-extent
  ControlGains gains;
};

/// Reads the true field state: plans to the nearest uncollected ring and
/// heads back to its own half once full.
class AStarPolicy final : public Policy {
 public:
  explicit AStarPolicy(PlannerOptions opts = {}) : opts_(opts) {}
  Action act(const PolicyContext& ctx) override;
  std::string name() const override { return "astar"; }

 private:
  PlannerOptions opts_;
};

struct PolicySpec {
  std::string kind = "greedy";  // zero, random, greedy, astar
  ControlGains gains;
  PlannerOptions planner;
};

/// Throws ConfigError on an unknown kind.
std::unique_ptr<Policy> make_policy(const PolicySpec& spec, std::uint64_t seed);

// ---- remote ------------------------------------------------------------------

/// Obtains actions from a coprocessor over the link. Each act() performs one
/// full exchange; `pump` runs right after the request is sent, which lets a
/// same-thread loopback serve the request.
class RemotePolicy final : public Policy {
 public:
  using Pump = std::function<void(const PolicyContext&)>;

  RemotePolicy(link::Transport& transport, Pump pump = {},
               std::chrono::milliseconds timeout = link::kDefaultTimeout, int max_timeouts = 1);

  Action act(const PolicyContext& ctx) override;
  std::string name() const override { return "remote"; }

  const link::BrainEndpoint& endpoint() const { return endpoint_; }

 private:
  link::Telemetry telemetry_;
  link::BrainEndpoint endpoint_;
  Pump pump_;
  int max_timeouts_;
};

/// Coprocessor side: turns brain packets into commands from a local policy.
/// Pose and time come from the packet; ring perception and the opponent are
/// read from the bound field state, standing in for the camera.
class PolicyHost {
 public:
  PolicyHost(Policy& policy, geometry::Alliance self, const sim::SimConfig& cfg);

  void bind(const sim::FieldState& state) { state_ = &state; }
  /// Throws PolicyError when no state is bound.
  link::Command operator()(const link::BrainPacket& p);
  void reset();

  std::uint64_t invocations() const { return invocations_; }

 private:
  Policy& policy_;
  const sim::FieldState* state_ = nullptr;
  geometry::Alliance self_;
  const sim::SimConfig& cfg_;
  sim::StackedObservation stack_;
  geometry::Rng rng_;
  std::uint64_t invocations_ = 0;
};

}  // namespace ringbot::policy
