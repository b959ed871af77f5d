#include "ringbot/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ringbot/errors.hpp"

namespace ringbot::sim {

using geometry::kPi;
using geometry::wrap_angle;

namespace {

constexpr double kRingSpacing = 0.1;
constexpr double kGoalClearance = 0.05;
constexpr int kPlacementTries = 20000;

std::seed_seq::result_type lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
std::seed_seq::result_type hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

int SimConfig::pin_steps() const {
  return std::max(1, static_cast<int>(std::llround(pin_duration / dt)));
}

void SimConfig::validate() const {
  const bool positive = finite_positive(field_width) && finite_positive(dt) &&
                        finite_positive(robot_half_extent) && finite_positive(pickup_radius) &&
                        finite_positive(pin_duration) && finite_positive(max_forward_speed) &&
                        finite_positive(max_turn_rate) && finite_positive(fov_horizontal) &&
                        finite_positive(max_range) && finite_positive(goal_radius) &&
                        finite_positive(contact_margin);
  if (!positive) {
    throw ConfigError("sim config: physical values must be positive and finite");
  }
  if (episode_steps < 1 || stack_depth < 1) {
    throw ConfigError("sim config: episode_steps and stack_depth must be >= 1");
  }
  if (ring_count < 0 || ring_capacity < 0) {
    throw ConfigError("sim config: ring_count and ring_capacity must be >= 0");
  }
  if (!(noise_fraction >= 0.0) || !std::isfinite(noise_fraction)) {
    throw ConfigError("sim config: noise_fraction must be >= 0");
  }
  if (fov_horizontal >= 2.0 * kPi) {
    throw ConfigError("sim config: fov_horizontal must be below 2*pi");
  }
  if (field_width <= 4.0 * robot_half_extent + 2.0 * goal_radius) {
    throw ConfigError("sim config: field too small for two robots");
  }
}

SimConfig parse_sim_config(const std::string& json_text) {
  SimConfig c;
  try {
    const auto j = nlohmann::json::parse(json_text);
    c.field_width = j.value("field_width", c.field_width);
    c.dt = j.value("dt", c.dt);
    c.episode_steps = j.value("episode_steps", c.episode_steps);
    c.ring_count = j.value("ring_count", c.ring_count);
    c.ring_capacity = j.value("ring_capacity", c.ring_capacity);
    c.robot_half_extent = j.value("robot_half_extent", c.robot_half_extent);
    c.pickup_radius = j.value("pickup_radius", c.pickup_radius);
    c.pin_duration = j.value("pin_duration", c.pin_duration);
    c.max_forward_speed = j.value("max_forward_speed", c.max_forward_speed);
    c.max_turn_rate = j.value("max_turn_rate", c.max_turn_rate);
    c.fov_horizontal = j.value("fov_horizontal", c.fov_horizontal);
    c.max_range = j.value("max_range", c.max_range);
    c.noise_fraction = j.value("noise_fraction", c.noise_fraction);
    c.stack_depth = j.value("stack_depth", c.stack_depth);
    c.goal_radius = j.value("goal_radius", c.goal_radius);
    c.contact_margin = j.value("contact_margin", c.contact_margin);
    c.seed = j.value("seed", c.seed);
    const std::string layout = j.value("layout", std::string("standard"));
    if (layout == "standard") {
      c.layout = Layout::Standard;
    } else if (layout == "seeded_random") {
      c.layout = Layout::SeededRandom;
    } else {
      throw ConfigError("sim config: unknown layout '" + layout + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("sim config: ") + e.what());
  }
  c.validate();
  return c;
}

SimConfig load_sim_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open sim config " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sim_config(ss.str());
}

std::string sim_config_to_json(const SimConfig& c) {
  nlohmann::ordered_json j;
  j["field_width"] = c.field_width;
  j["dt"] = c.dt;
  j["episode_steps"] = c.episode_steps;
  j["ring_count"] = c.ring_count;
  j["ring_capacity"] = c.ring_capacity;
  j["robot_half_extent"] = c.robot_half_extent;
  j["pickup_radius"] = c.pickup_radius;
  j["pin_duration"] = c.pin_duration;
  j["max_forward_speed"] = c.max_forward_speed;
  j["max_turn_rate"] = c.max_turn_rate;
  j["fov_horizontal"] = c.fov_horizontal;
  j["max_range"] = c.max_range;
  j["noise_fraction"] = c.noise_fraction;
  j["stack_depth"] = c.stack_depth;
  j["goal_radius"] = c.goal_radius;
  j["contact_margin"] = c.contact_margin;
  j["layout"] = c.layout == Layout::Standard ? "standard" : "seeded_random";
  j["seed"] = c.seed;
  return j.dump(2);
}

// ---- layout ------------------------------------------------------------------

namespace {

Pose2D home_pose(const SimConfig& cfg, Alliance a) {
  const double x = -cfg.half_width() + cfg.robot_half_extent + 0.0762;
  const Pose2D red{x, 0.0, 0.0};
  return geometry::to_alliance_frame(red, a);
}

bool near_home(const PlanarPoint& p, const SimConfig& cfg, double clearance) {
  for (Alliance a : {Alliance::Red, Alliance::Blue}) {
    const Pose2D h = home_pose(cfg, a);
    const double reach = cfg.robot_half_extent + clearance;
    if (std::abs(p.x - h.x) < reach && std::abs(p.z - h.z) < reach) {
      return true;
    }
  }
  return false;
}

struct Placer {
  const SimConfig& cfg;
  Rng& rng;
  std::vector<PlanarPoint> rings;
  std::vector<MobileGoal> goals;

  bool ring_ok(const PlanarPoint& p) const {
    if (near_home(p, cfg, cfg.pickup_radius)) {
      return false;
    }
    for (const auto& g : goals) {
      if (geometry::distance(p, g.position) < g.radius + kGoalClearance) {
        return false;
      }
    }
    for (const auto& r : rings) {
      if (geometry::distance(p, r) < kRingSpacing) {
        return false;
      }
    }
    return true;
  }

  PlanarPoint sample(double x_lo, double x_hi, double z_lo, double z_hi) {
    std::uniform_real_distribution<double> ux(x_lo, x_hi);
    std::uniform_real_distribution<double> uz(z_lo, z_hi);
    const double x = ux(rng);
    const double z = uz(rng);
    return {x, z};
  }
};

}  // namespace

FieldState init_field(const SimConfig& cfg) {
  cfg.validate();
  FieldState s;
  s.robots[0].alliance = Alliance::Red;
  s.robots[0].pose = home_pose(cfg, Alliance::Red);
  s.robots[1].alliance = Alliance::Blue;
  s.robots[1].pose = home_pose(cfg, Alliance::Blue);

  std::seed_seq seq{lo32(cfg.seed), hi32(cfg.seed), 0x4c41u};
  Rng rng(seq);
  Placer placer{cfg, rng, {}, {}};
  const double hw = cfg.half_width();
  const double margin = cfg.robot_half_extent;
  const double gr = cfg.goal_radius;

  if (cfg.layout == Layout::Standard) {
    placer.goals = {{{-hw / 2, -hw / 2}, GoalKind::AllianceRed, gr},
                    {{hw / 2, hw / 2}, GoalKind::AllianceBlue, gr},
                    {{0.0, 0.0}, GoalKind::Neutral, gr}};
    const int pairs = cfg.ring_count / 2;
    for (int i = 0; i < pairs; ++i) {
      bool placed = false;
      for (int t = 0; t < kPlacementTries && !placed; ++t) {
        const PlanarPoint p = placer.sample(-hw + margin, -kRingSpacing, -hw + margin, hw - margin);
        if (placer.ring_ok(p)) {
          placer.rings.push_back(p);
          placed = true;
        }
      }
      if (!placed) {
        throw ConfigError("sim config: cannot fit " + std::to_string(cfg.ring_count) + " rings");
      }
    }
    // Mirror the red half into the blue half.
    const std::size_t n = placer.rings.size();
    for (std::size_t i = 0; i < n; ++i) {
      placer.rings.push_back({-placer.rings[i].x, -placer.rings[i].z});
    }
    if (cfg.ring_count % 2 == 1) {
      placer.rings.push_back({0.0, 0.0});
    }
  } else {
    const GoalKind kinds[] = {GoalKind::AllianceRed, GoalKind::AllianceBlue, GoalKind::Neutral};
    for (GoalKind kind : kinds) {
      bool placed = false;
      for (int t = 0; t < kPlacementTries && !placed; ++t) {
        const PlanarPoint p = placer.sample(-hw + gr, hw - gr, -hw + gr, hw - gr);
        bool ok = !near_home(p, cfg, gr + kGoalClearance);
        for (const auto& g : placer.goals) {
          ok = ok && geometry::distance(p, g.position) > 2.0 * gr + kGoalClearance;
        }
        if (ok) {
          placer.goals.push_back({p, kind, gr});
          placed = true;
        }
      }
      if (!placed) {
        throw ConfigError("sim config: cannot place mobile goals");
      }
    }
    for (int i = 0; i < cfg.ring_count; ++i) {
      bool placed = false;
      for (int t = 0; t < kPlacementTries && !placed; ++t) {
        const PlanarPoint p = placer.sample(-hw + margin, hw - margin, -hw + margin, hw - margin);
        if (placer.ring_ok(p)) {
          placer.rings.push_back(p);
          placed = true;
        }
      }
      if (!placed) {
        throw ConfigError("sim config: cannot fit " + std::to_string(cfg.ring_count) + " rings");
      }
    }
  }

  for (const auto& p : placer.rings) {
    s.rings.push_back({p, false, -1});
  }
  s.goals = std::move(placer.goals);
  return s;
}

// ---- collisions ------------------------------------------------------------

namespace {

void clamp_to_field(Pose2D& p, const SimConfig& cfg) {
  const double lim = cfg.half_width() - cfg.robot_half_extent;
  p.x = std::clamp(p.x, -lim, lim);
  p.z = std::clamp(p.z, -lim, lim);
}

void clamp_goal(MobileGoal& g, const SimConfig& cfg) {
  const double lim = cfg.half_width() - g.radius;
  g.position.x = std::clamp(g.position.x, -lim, lim);
  g.position.z = std::clamp(g.position.z, -lim, lim);
}

// Moves `a` and `b` apart along one axis by `need`, sharing the push but never
// through a wall. Afterwards |b - a| == 2e along that axis.
void separate_axis(double& a, double& b, double need, double lim, double e) {
  const double dir = b >= a ? 1.0 : -1.0;
  const double room_a = dir > 0 ? a + lim : lim - a;
  const double room_b = dir > 0 ? lim - b : b + lim;
  double da = std::min(0.5 * need, room_a);
  double db = need - da;
  if (db > room_b) {
    db = room_b;
    da = need - db;
  }
  a -= dir * da;
  b = a + dir * 2.0 * e;
}

void separate_robots(FieldState& s, const SimConfig& cfg) {
  Pose2D& a = s.robots[0].pose;
  Pose2D& b = s.robots[1].pose;
  const double e = cfg.robot_half_extent;
  const double ox = 2.0 * e - std::abs(b.x - a.x);
  const double oz = 2.0 * e - std::abs(b.z - a.z);
  if (ox <= 0.0 || oz <= 0.0) {
    return;
  }
  const double lim = cfg.half_width() - e;
  if (ox <= oz) {
    separate_axis(a.x, b.x, ox, lim, e);
  } else {
    separate_axis(a.z, b.z, oz, lim, e);
  }
}

// Closest point of an axis-aligned robot box to `p`.
PlanarPoint closest_on_box(const Pose2D& r, double e, const PlanarPoint& p) {
  return {std::clamp(p.x, r.x - e, r.x + e), std::clamp(p.z, r.z - e, r.z + e)};
}

// Direction and depth that move a disc out of a box; false when disjoint.
bool disc_box_push(const Pose2D& r, double e, const PlanarPoint& c, double radius, double& nx,
                   double& nz, double& depth) {
  const PlanarPoint q = closest_on_box(r, e, c);
  const double d = geometry::distance(q, c);
  if (d >= radius) {
    return false;
  }
  if (d > 1e-12) {
    nx = (c.x - q.x) / d;
    nz = (c.z - q.z) / d;
    depth = radius - d;
    return true;
  }
  // Center inside the box: leave through the nearest face.
  const double px = e + radius - std::abs(c.x - r.x);
  const double pz = e + radius - std::abs(c.z - r.z);
  if (px <= pz) {
    nx = c.x >= r.x ? 1.0 : -1.0;
    nz = 0.0;
    depth = px;
  } else {
    nx = 0.0;
    nz = c.z >= r.z ? 1.0 : -1.0;
    depth = pz;
  }
  return true;
}

void resolve_goals(FieldState& s, const SimConfig& cfg) {
  const double e = cfg.robot_half_extent;
  for (auto& robot : s.robots) {
    for (auto& g : s.goals) {
      double nx = 0, nz = 0, depth = 0;
      if (disc_box_push(robot.pose, e, g.position, g.radius, nx, nz, depth)) {
        g.position.x += nx * depth;
        g.position.z += nz * depth;
        clamp_goal(g, cfg);
      }
    }
  }
  for (std::size_t i = 0; i < s.goals.size(); ++i) {
    for (std::size_t j = i + 1; j < s.goals.size(); ++j) {
      auto& gi = s.goals[i];
      auto& gj = s.goals[j];
      const double d = geometry::distance(gi.position, gj.position);
      const double need = gi.radius + gj.radius - d;
      if (need <= 0.0) {
        continue;
      }
      const double nx = d > 1e-12 ? (gj.position.x - gi.position.x) / d : 1.0;
      const double nz = d > 1e-12 ? (gj.position.z - gi.position.z) / d : 0.0;
      gi.position.x -= 0.5 * need * nx;
      gi.position.z -= 0.5 * need * nz;
      gj.position.x += 0.5 * need * nx;
      gj.position.z += 0.5 * need * nz;
      clamp_goal(gi, cfg);
      clamp_goal(gj, cfg);
    }
  }
  // Goals wedged against a wall push the robot back instead.
  for (auto& robot : s.robots) {
    for (const auto& g : s.goals) {
      double nx = 0, nz = 0, depth = 0;
      if (disc_box_push(robot.pose, e, g.position, g.radius, nx, nz, depth)) {
        robot.pose.x -= nx * depth;
        robot.pose.z -= nz * depth;
        clamp_to_field(robot.pose, cfg);
      }
    }
  }
}

double point_segment_distance(const PlanarPoint& p, const PlanarPoint& a, const PlanarPoint& b) {
  const double vx = b.x - a.x;
  const double vz = b.z - a.z;
  const double len2 = vx * vx + vz * vz;
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp(((p.x - a.x) * vx + (p.z - a.z) * vz) / len2, 0.0, 1.0);
  }
  return std::hypot(p.x - (a.x + t * vx), p.z - (a.z + t * vz));
}

// Liang-Barsky clip of segment a->b against an axis-aligned box.
bool segment_hits_box(const PlanarPoint& a, const PlanarPoint& b, double min_x, double max_x,
                      double min_z, double max_z) {
  double t0 = 0.0;
  double t1 = 1.0;
  const double dx = b.x - a.x;
  const double dz = b.z - a.z;
  const double p[4] = {-dx, dx, -dz, dz};
  const double q[4] = {a.x - min_x, max_x - a.x, a.z - min_z, max_z - a.z};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) {
        return false;
      }
      continue;
    }
    const double t = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 > t1) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool robots_in_contact(const FieldState& s, const SimConfig& cfg) {
  const double reach = 2.0 * cfg.robot_half_extent + cfg.contact_margin;
  const Pose2D& a = s.robots[0].pose;
  const Pose2D& b = s.robots[1].pose;
  return std::abs(a.x - b.x) <= reach && std::abs(a.z - b.z) <= reach;
}

bool touches_wall(const RobotState& r, const SimConfig& cfg) {
  const double lim = cfg.half_width() - cfg.robot_half_extent - cfg.contact_margin;
  return std::abs(r.pose.x) >= lim || std::abs(r.pose.z) >= lim;
}

double robot_overlap(const FieldState& s, const SimConfig& cfg) {
  const double e = cfg.robot_half_extent;
  const double ox = 2.0 * e - std::abs(s.robots[0].pose.x - s.robots[1].pose.x);
  const double oz = 2.0 * e - std::abs(s.robots[0].pose.z - s.robots[1].pose.z);
  return std::max(0.0, std::min(ox, oz));
}

Rewards update_pinning(FieldState& s, const SimConfig& cfg) {
  Rewards out{};
  const bool contact = robots_in_contact(s, cfg);
  const int limit = cfg.pin_steps();
  for (std::size_t i = 0; i < 2; ++i) {
    RobotState& me = s.robots[i];
    const RobotState& other = s.robots[1 - i];
    if (contact && touches_wall(other, cfg)) {
      ++me.pin_steps;
    } else {
      me.pin_steps = 0;
    }
    me.pin_timer = std::min(me.pin_steps * cfg.dt, cfg.pin_duration);
    if (me.pin_steps >= limit && !me.disqualified) {
      me.disqualified = true;
      out[i].pin = reward::kPin;
      s.terminal = true;
    }
  }
  return out;
}

Rewards step(FieldState& s, const std::array<Action, 2>& actions, const SimConfig& cfg) {
  if (s.terminal) {
    throw std::logic_error("step called on a terminal state");
  }
  for (const Action& a : actions) {
    if (!std::isfinite(a.forward) || !std::isfinite(a.turn)) {
      throw InvalidAction("action components must be finite");
    }
  }
  std::array<PlanarPoint, 2> before{};
  for (std::size_t i = 0; i < 2; ++i) {
    Pose2D& p = s.robots[i].pose;
    before[i] = {p.x, p.z};
    const double v = std::clamp(actions[i].forward, -1.0, 1.0) * cfg.max_forward_speed;
    const double w = std::clamp(actions[i].turn, -1.0, 1.0) * cfg.max_turn_rate;
    p.x += v * cfg.dt * std::cos(p.heading);
    p.z += v * cfg.dt * std::sin(p.heading);
    p.heading = wrap_angle(p.heading + w * cfg.dt);
    clamp_to_field(p, cfg);
  }
  separate_robots(s, cfg);
  resolve_goals(s, cfg);
  separate_robots(s, cfg);

  Rewards out{};
  for (auto& ring : s.rings) {
    if (ring.collected) {
      continue;
    }
    int taker = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 2; ++i) {
      const RobotState& r = s.robots[static_cast<std::size_t>(i)];
      if (r.rings_held >= cfg.ring_capacity) {
        continue;
      }
      const double d = point_segment_distance(ring.position, before[static_cast<std::size_t>(i)],
                                              {r.pose.x, r.pose.z});
      if (d <= cfg.pickup_radius && d < best) {
        best = d;
        taker = i;
      }
    }
    if (taker >= 0) {
      ring.collected = true;
      ring.collected_by = taker;
      ++s.robots[static_cast<std::size_t>(taker)].rings_held;
      out[static_cast<std::size_t>(taker)].ring += reward::kPerRing;
    }
  }

  ++s.step_index;
  s.clock = s.step_index * cfg.dt;
  const Rewards pins = update_pinning(s, cfg);
  out[0] += pins[0];
  out[1] += pins[1];
  if (s.step_index >= cfg.episode_steps) {
    s.terminal = true;
  }
  return out;
}

Rewards finalize_episode(const FieldState& s, const SimConfig& cfg) {
  if (!s.terminal) {
    throw std::logic_error("finalize_episode called before the episode ended");
  }
  (void)cfg;
  Rewards out{};
  for (std::size_t i = 0; i < 2; ++i) {
    // Red owns x < 0, Blue owns x > 0; the midline belongs to neither.
    const double sign = s.robots[i].alliance == Alliance::Red ? -1.0 : 1.0;
    for (const auto& g : s.goals) {
      if (sign * g.position.x > 0.0) {
        out[i].goal += reward::kPerGoal;
      }
    }
    if (sign * s.robots[i].pose.x < 0.0) {
      out[i].position = reward::kWrongSide;
    }
  }
  return out;
}

std::vector<std::size_t> visible_rings(const FieldState& s, Alliance who, const SimConfig& cfg) {
  const RobotState& me = s.robot(who);
  const RobotState& other = s.robot(geometry::opponent_of(who));
  const PlanarPoint eye{me.pose.x, me.pose.z};
  const double e = cfg.robot_half_extent;
  const double half_fov = 0.5 * cfg.fov_horizontal;

  std::vector<std::pair<double, std::size_t>> hits;
  for (std::size_t i = 0; i < s.rings.size(); ++i) {
    const Ring& ring = s.rings[i];
    if (ring.collected) {
      continue;
    }
    const double d = geometry::distance(eye, ring.position);
    if (d > cfg.max_range) {
      continue;
    }
    const PlanarPoint local = geometry::ring_to_robot_frame(ring.position, me.pose);
    if (!(local.z > 0.0) || std::atan2(std::abs(local.x), local.z) > half_fov) {
      continue;
    }
    bool blocked = false;
    for (const auto& g : s.goals) {
      if (point_segment_distance(g.position, eye, ring.position) < g.radius) {
        blocked = true;
        break;
      }
    }
    if (!blocked) {
      blocked = segment_hits_box(eye, ring.position, other.pose.x - e, other.pose.x + e,
                                 other.pose.z - e, other.pose.z + e);
    }
    if (!blocked) {
      hits.emplace_back(d, i);
    }
  }
  std::sort(hits.begin(), hits.end());
  std::vector<std::size_t> out;
  out.reserve(hits.size());
  for (const auto& h : hits) {
    out.push_back(h.second);
  }
  return out;
}

FieldState rotate180(const FieldState& s) {
  const auto turn = [](const Pose2D& p) { return Pose2D{-p.x, -p.z, wrap_angle(p.heading + kPi)}; };
  FieldState out = s;
  out.robots[0] = s.robots[1];
  out.robots[0].pose = turn(s.robots[1].pose);
  out.robots[0].alliance = Alliance::Red;
  out.robots[1] = s.robots[0];
  out.robots[1].pose = turn(s.robots[0].pose);
  out.robots[1].alliance = Alliance::Blue;
  for (auto& r : out.rings) {
    r.position = {-r.position.x, -r.position.z};
    if (r.collected_by >= 0) {
      r.collected_by = 1 - r.collected_by;
    }
  }
  for (auto& g : out.goals) {
    g.position = {-g.position.x, -g.position.z};
    if (g.kind == GoalKind::AllianceRed) {
      g.kind = GoalKind::AllianceBlue;
    } else if (g.kind == GoalKind::AllianceBlue) {
      g.kind = GoalKind::AllianceRed;
    }
  }
  return out;
}

// ---- observation -----------------------------------------------------------

ObservationInputs gather_observation_inputs(const FieldState& s, Alliance who,
                                            const SimConfig& cfg) {
  const RobotState& me = s.robot(who);
  ObservationInputs in;
  in.self = geometry::to_alliance_frame(me.pose, who);
  in.opponent = geometry::to_alliance_frame(s.robot(geometry::opponent_of(who)).pose, who);
  in.elapsed = s.clock;
  const auto idx = visible_rings(s, who, cfg);
  for (std::size_t k = 0; k < idx.size() && k < kRingSlots; ++k) {
    in.rings.push_back(geometry::ring_to_robot_frame(s.rings[idx[k]].position, me.pose));
  }
  return in;
}

ObservationVector assemble_observation(const ObservationInputs& in, const SimConfig& cfg, Rng* rng) {
  const double hw = cfg.half_width();
  ObservationVector obs{};
  const auto self = geometry::normalize_position({in.self.x, in.self.z}, hw);
  const auto opp = geometry::normalize_position({in.opponent.x, in.opponent.z}, hw);
  obs[kSelfOffset] = self.x;
  obs[kSelfOffset + 1] = self.z;
  obs[kSelfOffset + 2] = in.self.heading / kPi;
  obs[kOpponentOffset] = opp.x;
  obs[kOpponentOffset + 1] = opp.z;
  obs[kOpponentOffset + 2] = in.opponent.heading / kPi;
  obs[kTimeIndex] = in.elapsed / cfg.game_length();
  const std::size_t n = std::min(in.rings.size(), kRingSlots);
  for (std::size_t k = 0; k < n; ++k) {
    const auto p = geometry::normalize_position(in.rings[k], hw);
    obs[kRingOffset + 2 * k] = p.x;
    obs[kRingOffset + 2 * k + 1] = p.z;
  }

  if (rng != nullptr && cfg.noise_fraction > 0.0) {
    std::vector<std::size_t> slots = {kSelfOffset, kSelfOffset + 1, kOpponentOffset,
                                      kOpponentOffset + 1};
    for (std::size_t k = 0; k < n; ++k) {
      slots.push_back(kRingOffset + 2 * k);
      slots.push_back(kRingOffset + 2 * k + 1);
    }
    std::vector<double> picked;
    picked.reserve(slots.size());
    for (std::size_t i : slots) {
      picked.push_back(obs[i]);
    }
    const auto noisy = geometry::inject_noise(picked, cfg.noise_fraction, *rng);
    for (std::size_t i = 0; i < slots.size(); ++i) {
      obs[slots[i]] = noisy[i];
    }
  }
  return obs;
}

ObservationVector build_observation(const FieldState& s, Alliance who, const SimConfig& cfg,
                                    Rng* rng) {
  return assemble_observation(gather_observation_inputs(s, who, cfg), cfg, rng);
}

StackedObservation::StackedObservation(int depth) {
  if (depth < 1) {
    throw std::invalid_argument("stack depth must be >= 1");
  }
  frames_.assign(static_cast<std::size_t>(depth), ObservationVector{});
}

void StackedObservation::push(std::span<const double> obs) {
  if (obs.size() != kObservationSize) {
    throw std::invalid_argument("observation must have exactly 27 values");
  }
  ObservationVector frame{};
  std::copy(obs.begin(), obs.end(), frame.begin());
  frames_.pop_front();
  frames_.push_back(frame);
}

std::vector<double> StackedObservation::flatten() const {
  std::vector<double> out;
  out.reserve(frames_.size() * kObservationSize);
  for (const auto& f : frames_) {
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

StackedObservation push_stack(StackedObservation stack, std::span<const double> obs) {
  stack.push(obs);
  return stack;
}

Rng observation_rng(std::uint64_t seed, Alliance who) {
  std::seed_seq seq{lo32(seed), hi32(seed), 0x6f6273u, who == Alliance::Red ? 0u : 1u};
  return Rng(seq);
}

}  // namespace ringbot::sim
