#include "ringbot/episode.hpp"

#include <ostream>

#include <json.hpp>

#include "ringbot/format.hpp"

namespace ringbot::sim {

namespace {

constexpr std::array<Alliance, 2> kSides = {Alliance::Red, Alliance::Blue};

void close_summary(EpisodeLog& log, const FieldState& s, const Rewards& totals) {
  auto& sum = log.summary;
  sum.steps = s.step_index;
  sum.clock = s.clock;
  sum.totals = totals;
  for (std::size_t i = 0; i < 2; ++i) {
    sum.rings_collected[i] = s.robots[i].rings_held;
  }
}

nlohmann::ordered_json reward_json(const RewardDelta& r) {
  return {{"ring", r.ring}, {"pin", r.pin}, {"goal", r.goal}, {"position", r.position},
          {"total", r.total()}};
}

}  // namespace

EpisodeLog run_episode(const SimConfig& cfg, Policy& red, Policy& blue,
                       const EpisodeOptions& options) {
  FieldState s = init_field(cfg);
  std::array<StackedObservation, 2> stacks{StackedObservation(cfg.stack_depth),
                                           StackedObservation(cfg.stack_depth)};
  std::array<Rng, 2> rngs{observation_rng(cfg.seed, Alliance::Red),
                          observation_rng(cfg.seed, Alliance::Blue)};
  std::array<Policy*, 2> policies{&red, &blue};
  red.reset();
  blue.reset();

  EpisodeLog log;
  Rewards totals{};
  while (!s.terminal) {
    std::array<Action, 2> actions{};
    for (std::size_t i = 0; i < 2; ++i) {
      stacks[i].push(build_observation(s, kSides[i], cfg, &rngs[i]));
    }
    Rewards delta{};
    try {
      for (std::size_t i = 0; i < 2; ++i) {
        actions[i] = policies[i]->act(PolicyContext{stacks[i], s, kSides[i], cfg});
      }
      delta = step(s, actions, cfg);
    } catch (const std::exception& e) {
      log.summary.aborted = true;
      log.summary.ended_by = "aborted";
      log.summary.diagnostic = e.what();
      close_summary(log, s, totals);
      return log;
    }
    for (std::size_t i = 0; i < 2; ++i) {
      totals[i] += delta[i];
      if (log.summary.ring_saturation_step[i] < 0 && cfg.ring_capacity > 0 &&
          s.robots[i].rings_held >= cfg.ring_capacity) {
        log.summary.ring_saturation_step[i] = s.step_index;
      }
    }
    if (options.record_steps) {
      StepRecord rec;
      rec.step = s.step_index;
      rec.clock = s.clock;
      for (std::size_t i = 0; i < 2; ++i) {
        rec.robots[i] = {s.robots[i].pose, s.robots[i].rings_held, s.robots[i].pin_timer};
      }
      rec.actions = actions;
      rec.rewards = delta;
      rec.cumulative = totals;
      log.steps.push_back(rec);
    }
  }
  const Rewards fin = finalize_episode(s, cfg);
  totals[0] += fin[0];
  totals[1] += fin[1];
  log.summary.ended_by = (s.robots[0].disqualified || s.robots[1].disqualified) ? "pin" : "time";
  close_summary(log, s, totals);
  return log;
}

void write_episode_jsonl(std::ostream& out, const EpisodeLog& log) {
  for (const auto& rec : log.steps) {
    nlohmann::ordered_json j;
    j["step"] = rec.step;
    j["clock"] = rec.clock;
    auto robots = nlohmann::ordered_json::array();
    auto actions = nlohmann::ordered_json::array();
    auto rewards = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < 2; ++i) {
      const auto& r = rec.robots[i];
      robots.push_back({{"x", r.pose.x}, {"z", r.pose.z}, {"heading", r.pose.heading},
                        {"rings_held", r.rings_held}, {"pin_timer", r.pin_timer}});
      actions.push_back({{"forward", rec.actions[i].forward}, {"turn", rec.actions[i].turn}});
      rewards.push_back(reward_json(rec.rewards[i]));
    }
    j["robots"] = std::move(robots);
    j["actions"] = std::move(actions);
    j["rewards"] = std::move(rewards);
    out << j.dump() << '\n';
  }
  const auto& s = log.summary;
  nlohmann::ordered_json sum;
  sum["steps"] = s.steps;
  sum["clock"] = s.clock;
  sum["ended_by"] = s.ended_by;
  sum["red"] = reward_json(s.totals[0]);
  sum["blue"] = reward_json(s.totals[1]);
  sum["rings_collected"] = {s.rings_collected[0], s.rings_collected[1]};
  sum["ring_saturation_step"] = {s.ring_saturation_step[0], s.ring_saturation_step[1]};
  if (s.aborted) {
    sum["diagnostic"] = s.diagnostic;
  }
  nlohmann::ordered_json wrapper;
  wrapper["summary"] = std::move(sum);
  out << wrapper.dump() << '\n';
}

void write_episode_csv(std::ostream& out, const EpisodeLog& log) {
  out << "step,clock,red_cumulative_reward,blue_cumulative_reward,red_rings_held,blue_rings_held\n";
  for (const auto& rec : log.steps) {
    out << rec.step << ',' << format_double(rec.clock) << ','
        << format_double(rec.cumulative[0].total()) << ','
        << format_double(rec.cumulative[1].total()) << ',' << rec.robots[0].rings_held << ','
        << rec.robots[1].rings_held << '\n';
  }
}

}  // namespace ringbot::sim
