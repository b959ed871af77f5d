#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "ringbot/sim.hpp"

namespace ringbot::sim {

/// What a controller sees each step. `state` is privileged information that
/// only planners with full field knowledge should read.
struct PolicyContext {
  const StackedObservation& stack;
  const FieldState& state;
  Alliance self;
  const SimConfig& cfg;
};

class Policy {
 public:
  virtual ~Policy() = default;
  /// Components must lie in [-1, 1]. Throw PolicyError on failure.
  virtual Action act(const PolicyContext& ctx) = 0;
  virtual void reset() {}
  virtual std::string name() const = 0;
};

struct RobotSnapshot {
  Pose2D pose;
  int rings_held = 0;
  double pin_timer = 0.0;
};

struct StepRecord {
  int step = 0;  // step index after the transition
  double clock = 0.0;
  std::array<RobotSnapshot, 2> robots;
  std::array<Action, 2> actions;
  Rewards rewards;     // deltas from this step
  Rewards cumulative;  // running totals including this step
};

struct EpisodeSummary {
  int steps = 0;
  double clock = 0.0;
  Rewards totals{};  // ring, pin, goal, position per robot
  std::array<int, 2> rings_collected{};
  std::array<int, 2> ring_saturation_step{-1, -1};  // first step at capacity, -1 if never
  std::string ended_by;  // "time", "pin" or "aborted"
  bool aborted = false;
  std::string diagnostic;
};

struct EpisodeLog {
  std::vector<StepRecord> steps;
  EpisodeSummary summary;
};

struct EpisodeOptions {
  bool record_steps = true;
};

/// Steps the field until it is terminal, feeding each policy its stacked
/// observation. A policy exception aborts the episode and is reported in the
/// summary.
EpisodeLog run_episode(const SimConfig& cfg, Policy& red, Policy& blue,
                       const EpisodeOptions& options = {});

void write_episode_jsonl(std::ostream& out, const EpisodeLog& log);
void write_episode_csv(std::ostream& out, const EpisodeLog& log);

}  // namespace ringbot::sim
