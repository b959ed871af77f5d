#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ringbot/episode.hpp"
#include "ringbot/errors.hpp"
#include "ringbot/sim.hpp"

using namespace ringbot;
using namespace ringbot::sim;
using geometry::kPi;

namespace {

SimConfig quiet() {
  SimConfig c;
  c.noise_fraction = 0.0;
  return c;
}

// Empty field with the robots parked on their home poses.
FieldState empty_field(const SimConfig& cfg) {
  SimConfig c = cfg;
  c.ring_count = 0;
  FieldState s = init_field(c);
  s.goals.clear();
  return s;
}

class ScriptedPolicy : public Policy {
 public:
  explicit ScriptedPolicy(Action a) : a_(a) {}
  Action act(const PolicyContext&) override { return a_; }
  std::string name() const override { return "scripted"; }

 private:
  Action a_;
};

class ThrowingPolicy : public Policy {
 public:
  Action act(const PolicyContext& ctx) override {
    if (ctx.state.step_index == 10) throw PolicyError("model crashed");
    return {};
  }
  std::string name() const override { return "throwing"; }
};

class RandomActions : public Policy {
 public:
  explicit RandomActions(std::uint64_t seed) : rng_(seed) {}
  Action act(const PolicyContext&) override {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {u(rng_), u(rng_)};
  }
  std::string name() const override { return "random"; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

TEST(Config, DefaultsMatchTheGame) {
  const SimConfig c;
  EXPECT_EQ(c.episode_steps, 1260);
  EXPECT_EQ(c.game_length(), 105.0);
  EXPECT_EQ(c.pin_steps(), 60);
  EXPECT_EQ(c.stack_depth, 11);
  EXPECT_EQ(c.ring_capacity, 10);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, JsonRoundTripAndErrors) {
  SimConfig c;
  c.seed = 99;
  c.layout = Layout::SeededRandom;
  c.ring_count = 13;
  const SimConfig back = parse_sim_config(sim_config_to_json(c));
  EXPECT_EQ(back.seed, 99u);
  EXPECT_EQ(back.layout, Layout::SeededRandom);
  EXPECT_EQ(back.ring_count, 13);
  EXPECT_EQ(back.dt, c.dt);
  EXPECT_THROW(parse_sim_config(R"({"dt": 0})"), ConfigError);
  EXPECT_THROW(parse_sim_config(R"({"field_width": -1})"), ConfigError);
  EXPECT_THROW(parse_sim_config(R"({"layout": "spiral"})"), ConfigError);
  EXPECT_THROW(parse_sim_config(R"({"episode_steps": "many"})"), ConfigError);
  EXPECT_THROW(load_sim_config("/nonexistent/sim.json"), ConfigError);
}

TEST(Layout, StandardIsMirrored) {
  const SimConfig cfg;
  const FieldState s = init_field(cfg);
  ASSERT_EQ(s.rings.size(), 72u);
  EXPECT_EQ(s.robots[1].pose.x, -s.robots[0].pose.x);
  EXPECT_EQ(s.robots[1].pose.z, -s.robots[0].pose.z);
  for (std::size_t i = 0; i < 36; ++i) {
    EXPECT_EQ(s.rings[i + 36].position.x, -s.rings[i].position.x);
    EXPECT_EQ(s.rings[i + 36].position.z, -s.rings[i].position.z);
  }
  const FieldState r = rotate180(s);
  EXPECT_EQ(r.goals[0].kind, GoalKind::AllianceBlue);
  EXPECT_EQ(r.goals[0].position.x, s.goals[1].position.x);
}

TEST(Layout, OddRingCountPutsOneInTheMiddle) {
  SimConfig cfg;
  cfg.ring_count = 7;
  const FieldState s = init_field(cfg);
  ASSERT_EQ(s.rings.size(), 7u);
  EXPECT_EQ(s.rings.back().position, (PlanarPoint{0.0, 0.0}));
}

TEST(Layout, DeterministicAndInsideBounds) {
  for (Layout layout : {Layout::Standard, Layout::SeededRandom}) {
    SimConfig cfg;
    cfg.layout = layout;
    cfg.seed = 1234;
    const FieldState a = init_field(cfg);
    const FieldState b = init_field(cfg);
    ASSERT_EQ(a.rings.size(), b.rings.size());
    for (std::size_t i = 0; i < a.rings.size(); ++i) {
      EXPECT_EQ(a.rings[i].position, b.rings[i].position);
      EXPECT_LE(std::abs(a.rings[i].position.x), cfg.half_width());
      EXPECT_LE(std::abs(a.rings[i].position.z), cfg.half_width());
    }
    cfg.seed = 1235;
    EXPECT_NE(init_field(cfg).rings[0].position, a.rings[0].position);
  }
}

TEST(Layout, DegenerateAndImpossibleCounts) {
  SimConfig cfg;
  cfg.ring_count = 0;
  EXPECT_TRUE(init_field(cfg).rings.empty());
  cfg.ring_count = 5000;
  EXPECT_THROW(init_field(cfg), ConfigError);
}

TEST(Step, ZeroActionsOnlyAdvanceTheClock) {
  const SimConfig cfg;
  FieldState s = init_field(cfg);
  const FieldState before = s;
  step(s, {Action{}, Action{}}, cfg);
  EXPECT_EQ(s.step_index, 1);
  EXPECT_EQ(s.clock, cfg.dt);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(s.robots[i].pose, before.robots[i].pose);
  for (std::size_t i = 0; i < s.rings.size(); ++i) EXPECT_EQ(s.rings[i].collected, false);
  for (std::size_t i = 0; i < s.goals.size(); ++i) EXPECT_EQ(s.goals[i].position, before.goals[i].position);
}

TEST(Step, FullForwardAdvancesExactly) {
  const SimConfig cfg;
  FieldState s = empty_field(cfg);
  const double x0 = s.robots[0].pose.x;
  step(s, {Action{1.0, 0.0}, Action{}}, cfg);
  EXPECT_EQ(s.robots[0].pose.x, x0 + cfg.max_forward_speed * cfg.dt);
  EXPECT_EQ(s.robots[0].pose.z, 0.0);
}

TEST(Step, CommandsAreClampedAndTurnIsCounterClockwise) {
  const SimConfig cfg;
  FieldState a = empty_field(cfg);
  FieldState b = empty_field(cfg);
  step(a, {Action{5.0, 3.0}, Action{}}, cfg);
  step(b, {Action{1.0, 1.0}, Action{}}, cfg);
  EXPECT_EQ(a.robots[0].pose, b.robots[0].pose);
  EXPECT_NEAR(a.robots[0].pose.heading, cfg.max_turn_rate * cfg.dt, 1e-15);
}

TEST(Step, DrivingOverARingCollectsIt) {
  const SimConfig cfg;
  FieldState s = empty_field(cfg);
  const Pose2D p = s.robots[0].pose;
  s.rings.push_back({{p.x + 0.05, p.z + 0.02}, false, -1});
  const Rewards r = step(s, {Action{1.0, 0.0}, Action{}}, cfg);
  EXPECT_TRUE(s.rings[0].collected);
  EXPECT_EQ(s.rings[0].collected_by, 0);
  EXPECT_EQ(s.robots[0].rings_held, 1);
  EXPECT_EQ(r[0].ring, 5.0);
  EXPECT_EQ(r[1].ring, 0.0);
}

TEST(Step, FullRobotLeavesRingsAlone) {
  const SimConfig cfg;
  FieldState s = empty_field(cfg);
  s.robots[0].rings_held = cfg.ring_capacity;
  const Pose2D p = s.robots[0].pose;
  s.rings.push_back({{p.x + 0.05, p.z}, false, -1});
  const Rewards r = step(s, {Action{1.0, 0.0}, Action{}}, cfg);
  EXPECT_FALSE(s.rings[0].collected);
  EXPECT_EQ(r[0].ring, 0.0);
}

TEST(Step, RejectsNanAndTerminalState) {
  const SimConfig cfg;
  FieldState s = empty_field(cfg);
  EXPECT_THROW(step(s, {Action{NAN, 0.0}, Action{}}, cfg), InvalidAction);
  EXPECT_THROW(step(s, {Action{}, Action{0.0, INFINITY}}, cfg), InvalidAction);
  s.terminal = true;
  EXPECT_THROW(step(s, {Action{}, Action{}}, cfg), std::logic_error);
}

TEST(Step, HeadOnCollisionDoesNotInterpenetrate) {
  const SimConfig cfg;
  FieldState s = empty_field(cfg);
  s.robots[0].pose = {-0.3, 0.0, 0.0};
  s.robots[1].pose = {0.3, 0.05, kPi};
  for (int i = 0; i < 30; ++i) {
    step(s, {Action{1.0, 0.0}, Action{1.0, 0.0}}, cfg);
    ASSERT_LE(robot_overlap(s, cfg), 1e-9);
  }
  EXPECT_TRUE(robots_in_contact(s, cfg));
}

TEST(Step, RandomPlayKeepsInvariants) {
  SimConfig cfg;
  cfg.layout = Layout::SeededRandom;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int ep = 0; ep < 8; ++ep) {
    cfg.seed = 100 + ep;
    FieldState s = init_field(cfg);
    const double lim = cfg.half_width() - cfg.robot_half_extent;
    while (!s.terminal) {
      step(s, {Action{u(rng), u(rng)}, Action{u(rng), u(rng)}}, cfg);
      ASSERT_EQ(s.clock, s.step_index * cfg.dt);
      ASSERT_LE(robot_overlap(s, cfg), 1e-9);
      int collected = 0;
      for (const auto& r : s.rings) collected += r.collected ? 1 : 0;
      ASSERT_EQ(collected, s.robots[0].rings_held + s.robots[1].rings_held);
      for (const auto& r : s.robots) {
        ASSERT_LE(std::abs(r.pose.x), lim + 1e-12);
        ASSERT_LE(std::abs(r.pose.z), lim + 1e-12);
        ASSERT_GE(r.pin_timer, 0.0);
        ASSERT_LE(r.pin_timer, cfg.pin_duration);
        ASSERT_LE(r.rings_held, cfg.ring_capacity);
      }
      for (const auto& g : s.goals) {
        ASSERT_LE(std::abs(g.position.x), cfg.half_width() - g.radius + 1e-12);
      }
    }
  }
}

TEST(Visibility, BehindAndOutOfRangeAreCulled) {
  const SimConfig cfg;
  FieldState s = empty_field(cfg);
  s.robots[0].pose = {0.0, 0.0, 0.0};
  s.robots[1].pose = {1.5, 1.5, 0.0};
  s.rings = {{{-0.5, 0.0}}, {{0.5, 0.0}}, {{0.5, 0.5}}, {{1.75, 0.0}}};
  const auto v = visible_rings(s, Alliance::Red, cfg);
  // 0: behind. 2: 45 degrees off-axis, beyond the 34.7 degree half-FOV.
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0], 1u);
  EXPECT_EQ(v[1], 3u);
  s.rings[3].position = {1.9, 0.0};
  EXPECT_EQ(visible_rings(s, Alliance::Red, cfg).size(), 1u);
}

TEST(Visibility, GoalAndOpponentOcclude) {
  const SimConfig cfg;
  FieldState s = empty_field(cfg);
  s.robots[0].pose = {-1.0, 0.0, 0.0};
  s.robots[1].pose = {1.2, 1.2, kPi};
  s.rings = {{{0.5, 0.0}}};
  s.goals = {{{0.0, 0.0}, GoalKind::Neutral, cfg.goal_radius}};
  EXPECT_TRUE(visible_rings(s, Alliance::Red, cfg).empty());
  s.goals[0].position = {0.0, 0.5};
  EXPECT_EQ(visible_rings(s, Alliance::Red, cfg).size(), 1u);
  s.robots[1].pose = {0.0, 0.0, kPi};
  EXPECT_TRUE(visible_rings(s, Alliance::Red, cfg).empty());
}

TEST(Visibility, FifteenRingsSortedByDistance) {
  const SimConfig cfg;
  FieldState s = empty_field(cfg);
  s.robots[0].pose = {-1.5, 0.0, 0.0};
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> fwd(0.3, 1.6), lat(-0.15, 0.15);
  for (int i = 0; i < 15; ++i) s.rings.push_back({{-1.5 + fwd(rng), lat(rng)}});
  s.rings.push_back({{-1.0, 0.0}, true, 0});
  const auto v = visible_rings(s, Alliance::Red, cfg);
  ASSERT_EQ(v.size(), 15u);
  const PlanarPoint eye{-1.5, 0.0};
  for (std::size_t i = 1; i < v.size(); ++i) {
    EXPECT_LE(geometry::distance(eye, s.rings[v[i - 1]].position), geometry::distance(eye, s.rings[v[i]].position));
  }
  EXPECT_EQ(std::count(v.begin(), v.end(), 15u), 0);
}

TEST(Observation, StartOfGame) {
  const SimConfig cfg = quiet();
  FieldState s = empty_field(cfg);
  const auto obs = build_observation(s, Alliance::Red, cfg, nullptr);
  EXPECT_EQ(obs.size(), 27u);
  EXPECT_EQ(obs[kTimeIndex], 0.0);
  EXPECT_DOUBLE_EQ(obs[0], s.robots[0].pose.x / cfg.half_width());
  EXPECT_EQ(obs[1], 0.0);
  for (std::size_t i = kRingOffset; i < 27; ++i) EXPECT_EQ(obs[i], 0.0);
  // Blue sees itself exactly where red sees itself.
  const auto blue = build_observation(s, Alliance::Blue, cfg, nullptr);
  EXPECT_DOUBLE_EQ(blue[0], obs[0]);
  EXPECT_DOUBLE_EQ(blue[3], obs[3]);
}

TEST(Observation, RingSlotsNearestFirstAndPadded) {
  const SimConfig cfg = quiet();
  FieldState s = empty_field(cfg);
  s.robots[0].pose = {0.0, 0.0, kPi / 2};  // facing +z, robot frame == world
  s.rings = {{{0.1, 1.0}}, {{-0.1, 0.5}}};
  const auto obs = build_observation(s, Alliance::Red, cfg, nullptr);
  const double hw = cfg.half_width();
  EXPECT_NEAR(obs[kRingOffset], -0.1 / hw, 1e-15);
  EXPECT_NEAR(obs[kRingOffset + 1], 0.5 / hw, 1e-15);
  EXPECT_NEAR(obs[kRingOffset + 2], 0.1 / hw, 1e-15);
  EXPECT_NEAR(obs[kRingOffset + 3], 1.0 / hw, 1e-15);
  for (std::size_t i = kRingOffset + 4; i < 27; ++i) EXPECT_EQ(obs[i], 0.0);
}

TEST(Observation, NoiseStaysInBandAndSparesPadding) {
  SimConfig cfg;
  FieldState s = empty_field(cfg);
  s.rings = {{{s.robots[0].pose.x + 0.6, 0.0}}};
  Rng rng = observation_rng(1, Alliance::Red);
  const auto clean = build_observation(s, Alliance::Red, quiet(), nullptr);
  for (int i = 0; i < 200; ++i) {
    const auto noisy = build_observation(s, Alliance::Red, cfg, &rng);
    for (std::size_t k : {0u, 1u, 3u, 4u, 7u, 8u}) {
      ASSERT_LE(std::abs(noisy[k] - clean[k]), cfg.noise_fraction + 1e-15);
    }
    ASSERT_EQ(noisy[kTimeIndex], clean[kTimeIndex]);
    ASSERT_EQ(noisy[2], clean[2]);
    for (std::size_t k = 9; k < 27; ++k) ASSERT_EQ(noisy[k], 0.0);
  }
}

TEST(Observation, PositionEntriesWithinUnitBoxWithoutNoise) {
  SimConfig cfg = quiet();
  cfg.layout = Layout::SeededRandom;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> pos(-1.6, 1.6), ang(-kPi, kPi);
  for (int i = 0; i < 300; ++i) {
    cfg.seed = i;
    FieldState s = init_field(cfg);
    s.robots[0].pose = {pos(rng), pos(rng), ang(rng)};
    s.robots[1].pose = {pos(rng), pos(rng), ang(rng)};
    for (Alliance a : {Alliance::Red, Alliance::Blue}) {
      const auto obs = build_observation(s, a, cfg, nullptr);
      for (std::size_t k = 0; k < 27; ++k) ASSERT_LE(std::abs(obs[k]), 1.0) << k;
    }
  }
}

TEST(Observation, AllianceSymmetryOnRandomStates) {
  SimConfig cfg = quiet();
  cfg.layout = Layout::SeededRandom;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> pos(-1.6, 1.6), ang(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    cfg.seed = 1000 + i;
    FieldState s = init_field(cfg);
    s.robots[0].pose = {pos(rng), pos(rng), ang(rng)};
    s.robots[1].pose = {pos(rng), pos(rng), ang(rng)};
    s.step_index = i;
    s.clock = i * cfg.dt;
    const auto a = build_observation(s, Alliance::Red, cfg, nullptr);
    const auto b = build_observation(rotate180(s), Alliance::Blue, cfg, nullptr);
    for (std::size_t k = 0; k < 27; ++k) ASSERT_NEAR(a[k], b[k], 1e-12) << "state " << i << " entry " << k;
  }
}

TEST(Observation, Rotate180IsAnInvolution) {
  SimConfig cfg;
  cfg.seed = 4;
  const FieldState s = init_field(cfg);
  const FieldState back = rotate180(rotate180(s));
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back.robots[i].pose.x, s.robots[i].pose.x);
    EXPECT_NEAR(std::cos(back.robots[i].pose.heading), std::cos(s.robots[i].pose.heading), 1e-15);
    EXPECT_NEAR(std::sin(back.robots[i].pose.heading), std::sin(s.robots[i].pose.heading), 1e-15);
    EXPECT_EQ(back.robots[i].alliance, s.robots[i].alliance);
  }
  for (std::size_t i = 0; i < s.goals.size(); ++i) EXPECT_EQ(back.goals[i].kind, s.goals[i].kind);
}

TEST(Stack, FifoOfZeroFrames) {
  StackedObservation st(11);
  EXPECT_EQ(st.flatten().size(), 297u);
  ObservationVector first{};
  first[0] = 1.0;
  st.push(first);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(st.frame(i), ObservationVector{});
  EXPECT_EQ(st.latest(), first);
  for (int i = 2; i <= 11; ++i) {
    ObservationVector o{};
    o[0] = i;
    st = push_stack(st, o);
  }
  EXPECT_EQ(st.frame(0)[0], 1.0);
  EXPECT_EQ(st.latest()[0], 11.0);
  ObservationVector twelve{};
  twelve[0] = 12.0;
  st.push(twelve);
  EXPECT_EQ(st.frame(0)[0], 2.0);
  const std::vector<double> bad(26, 0.0);
  EXPECT_THROW(st.push(bad), std::invalid_argument);
  EXPECT_THROW(StackedObservation(0), std::invalid_argument);
}

TEST(Pinning, SixtyStepsAgainstTheWallDisqualifies) {
  const SimConfig cfg;
  FieldState s = empty_field(cfg);
  const double e = cfg.robot_half_extent;
  const double lim = cfg.half_width() - e;
  s.robots[1].pose = {lim, 0.0, kPi};
  s.robots[0].pose = {lim - 2 * e, 0.0, 0.0};
  Rewards total{};
  int steps = 0;
  while (!s.terminal) {
    const Rewards r = step(s, {Action{1.0, 0.0}, Action{}}, cfg);
    total[0] += r[0];
    total[1] += r[1];
    ++steps;
    ASSERT_LE(steps, 60);
  }
  EXPECT_EQ(steps, 60);
  EXPECT_EQ(total[0].pin, -5.0);
  EXPECT_EQ(total[1].pin, 0.0);
  EXPECT_TRUE(s.robots[0].disqualified);
  EXPECT_EQ(s.robots[0].pin_timer, cfg.pin_duration);
}

TEST(Pinning, BreakingContactResetsTheTimer) {
  const SimConfig cfg;
  FieldState s = empty_field(cfg);
  const double e = cfg.robot_half_extent;
  const double lim = cfg.half_width() - e;
  s.robots[1].pose = {lim, 0.0, kPi};
  s.robots[0].pose = {lim - 2 * e, 0.0, 0.0};
  for (int i = 0; i < 59; ++i) {
    const Rewards r = update_pinning(s, cfg);
    ASSERT_EQ(r[0].pin, 0.0);
  }
  EXPECT_NEAR(s.robots[0].pin_timer, 59 * cfg.dt, 1e-12);
  s.robots[0].pose.x -= 0.2;
  update_pinning(s, cfg);
  EXPECT_EQ(s.robots[0].pin_timer, 0.0);
  EXPECT_FALSE(s.terminal);
  s.robots[0].pose.x += 0.2;
  update_pinning(s, cfg);
  EXPECT_EQ(s.robots[0].pin_steps, 1);
}

TEST(Pinning, NoContactNoTimer) {
  const SimConfig cfg;
  FieldState s = empty_field(cfg);
  update_pinning(s, cfg);
  EXPECT_EQ(s.robots[0].pin_timer, 0.0);
  EXPECT_EQ(s.robots[1].pin_timer, 0.0);
}

TEST(Finalize, GoalAndSideRewards) {
  const SimConfig cfg;
  FieldState s = empty_field(cfg);
  s.goals = {{{-1.0, 0.0}, GoalKind::AllianceRed}, {{-0.5, 1.0}, GoalKind::AllianceBlue},
             {{-0.2, -1.0}, GoalKind::Neutral}};
  EXPECT_THROW(finalize_episode(s, cfg), std::logic_error);
  s.terminal = true;
  Rewards r = finalize_episode(s, cfg);
  EXPECT_EQ(r[0].goal, 36.0);
  EXPECT_EQ(r[0].position, 0.0);
  EXPECT_EQ(r[1].goal, 0.0);
  s.robots[1].pose.x = -0.5;
  s.goals[2].position.x = 0.0;
  r = finalize_episode(s, cfg);
  EXPECT_EQ(r[1].position, -17.5);
  EXPECT_EQ(r[0].goal, 24.0);
  EXPECT_EQ(r[1].goal, 0.0);
}

TEST(Episode, ZeroPoliciesRunTheFullGame) {
  const SimConfig cfg;
  ScriptedPolicy a({}), b({});
  const EpisodeLog log = run_episode(cfg, a, b);
  EXPECT_EQ(log.summary.steps, 1260);
  EXPECT_EQ(log.summary.clock, 105.0);
  EXPECT_EQ(log.summary.ended_by, "time");
  EXPECT_EQ(log.steps.size(), 1260u);
  EXPECT_EQ(log.summary.totals[0].ring, 0.0);
}

TEST(Episode, RandomPlayIsDeterministicAndBounded) {
  SimConfig cfg;
  cfg.seed = 5;
  std::string first;
  for (int rep = 0; rep < 2; ++rep) {
    RandomActions a(1), b(2);
    const EpisodeLog log = run_episode(cfg, a, b);
    for (const auto& t : log.summary.totals) {
      EXPECT_GE(t.ring, 0.0);
      EXPECT_LE(t.ring, 50.0);
      EXPECT_GE(t.total(), -22.5);
      EXPECT_LE(t.total(), 86.0);
    }
    std::ostringstream out;
    write_episode_jsonl(out, log);
    if (rep == 0) first = out.str();
    else EXPECT_EQ(out.str(), first);
  }
}

TEST(Episode, PolicyFailureAbortsWithDiagnostic) {
  const SimConfig cfg;
  ThrowingPolicy bad;
  ScriptedPolicy ok({});
  const EpisodeLog log = run_episode(cfg, bad, ok);
  EXPECT_TRUE(log.summary.aborted);
  EXPECT_EQ(log.summary.ended_by, "aborted");
  EXPECT_EQ(log.summary.steps, 10);
  EXPECT_NE(log.summary.diagnostic.find("model crashed"), std::string::npos);
}

TEST(Episode, LogFormats) {
  SimConfig cfg;
  cfg.episode_steps = 3;
  ScriptedPolicy a({1.0, 0.0}), b({});
  const EpisodeLog log = run_episode(cfg, a, b);
  std::ostringstream csv, jl;
  write_episode_csv(csv, log);
  write_episode_jsonl(jl, log);
  const std::string c = csv.str();
  EXPECT_EQ(c.substr(0, c.find('\n')),
            "step,clock,red_cumulative_reward,blue_cumulative_reward,red_rings_held,blue_rings_held");
  EXPECT_EQ(std::count(c.begin(), c.end(), '\n'), 4);
  const std::string j = jl.str();
  EXPECT_EQ(std::count(j.begin(), j.end(), '\n'), 4);
  EXPECT_NE(j.find("{\"summary\":"), std::string::npos);
}
