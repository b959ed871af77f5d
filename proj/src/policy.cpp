#include "ringbot/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <tuple>

#include "ringbot/errors.hpp"

namespace ringbot::policy {

using geometry::kPi;

Action steer_toward(const PlanarPoint& local, const ControlGains& gains) {
  // Positive bearing means the target is to the left.
  const double bearing = std::atan2(-local.x, local.z);
  return {std::clamp(1.0 - std::abs(bearing) / (kPi / 2.0), 0.0, 1.0),
          std::clamp(gains.k_turn * bearing, -1.0, 1.0)};
}

Action greedy_policy(const ObservationVector& obs, const ControlGains& gains) {
  for (std::size_t k = 0; k < sim::kRingSlots; ++k) {
    const double x = obs[sim::kRingOffset + 2 * k];
    const double z = obs[sim::kRingOffset + 2 * k + 1];
    if (x != 0.0 || z != 0.0) {
      return steer_toward({x, z}, gains);
    }
  }
  return {0.0, std::clamp(gains.scan_rate, -1.0, 1.0)};
}

Action RandomPolicy::act(const PolicyContext&) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double f = u(rng_);
  return {f, u(rng_)};
}

// ---- grid ------------------------------------------------------------------

GridMap::GridMap(int c, int r, double res, PlanarPoint o)
    : resolution(res), origin(o), cols(c), rows(r) {
  if (c <= 0 || r <= 0 || !(res > 0.0)) {
    throw std::invalid_argument("grid needs positive dimensions and resolution");
  }
  occupied.assign(static_cast<std::size_t>(c) * static_cast<std::size_t>(r), 0);
}

Cell GridMap::cell_of(const PlanarPoint& p) const {
  return {static_cast<int>(std::floor((p.x - origin.x) / resolution)),
          static_cast<int>(std::floor((p.z - origin.z) / resolution))};
}

PlanarPoint GridMap::center(Cell c) const {
  return {origin.x + (c.col + 0.5) * resolution, origin.z + (c.row + 0.5) * resolution};
}

GridMap build_grid(const sim::FieldState& state, geometry::Alliance self, const sim::SimConfig& cfg,
                   double resolution, double inflation) {
  const double hw = cfg.half_width();
  const int n = static_cast<int>(std::ceil(cfg.field_width / resolution - 1e-9));
  GridMap g(n, n, resolution, {-hw, -hw});
  const double infl = std::max(inflation, cfg.robot_half_extent);
  const auto& opp = state.robot(geometry::opponent_of(self)).pose;
  const double box = cfg.robot_half_extent + infl;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const PlanarPoint p = g.center({c, r});
      bool hit = std::abs(p.x - opp.x) < box && std::abs(p.z - opp.z) < box;
      for (const auto& goal : state.goals) {
        if (hit) {
          break;
        }
        hit = geometry::distance(p, goal.position) < goal.radius + infl;
      }
      g.set({c, r}, hit);
    }
  }
  return g;
}

double path_cost(int straight_steps, int diagonal_steps, double resolution) {
  return straight_steps * resolution + diagonal_steps * (std::sqrt(2.0) * resolution);
}

namespace {

struct Node {
  double f;
  double h;
  std::uint64_t order;
  int index;
};

struct NodeAfter {
  bool operator()(const Node& a, const Node& b) const {
    return std::tie(a.f, a.h, a.order) > std::tie(b.f, b.h, b.order);
  }
};

constexpr int kDc[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDr[8] = {0, 0, 1, -1, 1, -1, 1, -1};

}  // namespace

Path astar_plan(const GridMap& grid, Cell start, Cell goal) {
  if (!grid.free(start)) {
    throw NoPathError("start cell is blocked or off the grid");
  }
  if (!grid.free(goal)) {
    throw NoPathError("goal cell is blocked or off the grid");
  }
  const std::size_t total = grid.occupied.size();
  const double res = grid.resolution;
  std::vector<int> straight(total, 0);
  std::vector<int> diag(total, 0);
  std::vector<double> g(total, std::numeric_limits<double>::infinity());
  std::vector<int> parent(total, -1);

  auto heuristic = [&](Cell c) {
    return res * std::hypot(static_cast<double>(c.col - goal.col), static_cast<double>(c.row - goal.row));
  };
  auto cell_at = [&](int idx) { return Cell{idx % grid.cols, idx / grid.cols}; };

  std::priority_queue<Node, std::vector<Node>, NodeAfter> open;
  std::uint64_t order = 0;
  const int s = static_cast<int>(grid.index(start));
  const int t = static_cast<int>(grid.index(goal));
  g[s] = 0.0;
  open.push({heuristic(start), heuristic(start), order++, s});

  // Lazy deletion; a node is re-pushed whenever its cost improves.
  while (!open.empty()) {
    const Node cur = open.top();
    open.pop();
    const double gc = g[cur.index];
    if (cur.f > gc + cur.h) {
      continue;
    }
    if (cur.index == t) {
      break;
    }
    const Cell c = cell_at(cur.index);
    for (int k = 0; k < 8; ++k) {
      const Cell nb{c.col + kDc[k], c.row + kDr[k]};
      if (!grid.free(nb)) {
        continue;
      }
      const bool diagonal = k >= 4;
      if (diagonal && (!grid.free({c.col + kDc[k], c.row}) || !grid.free({c.col, c.row + kDr[k]}))) {
        continue;
      }
      const int ni = static_cast<int>(grid.index(nb));
      const int ns = straight[cur.index] + (diagonal ? 0 : 1);
      const int nd = diag[cur.index] + (diagonal ? 1 : 0);
      const double ng = path_cost(ns, nd, res);
      if (ng < g[ni]) {
        g[ni] = ng;
        straight[ni] = ns;
        diag[ni] = nd;
        parent[ni] = cur.index;
        const double h = heuristic(nb);
        open.push({ng + h, h, order++, ni});
      }
    }
  }
  if (!std::isfinite(g[t])) {
    throw NoPathError("goal is unreachable");
  }
  Path path;
  for (int i = t; i != -1; i = parent[i]) {
    path.cells.push_back(cell_at(i));
  }
  std::reverse(path.cells.begin(), path.cells.end());
  for (const Cell& c : path.cells) {
    path.waypoints.push_back(grid.center(c));
  }
  path.straight_steps = straight[t];
  path.diagonal_steps = diag[t];
  path.cost = g[t];
  return path;
}

Path astar_plan(const GridMap& grid, const PlanarPoint& start, const PlanarPoint& goal) {
  return astar_plan(grid, grid.cell_of(start), grid.cell_of(goal));
}

std::optional<Cell> nearest_free(const GridMap& grid, Cell from) {
  if (!grid.in_bounds(from)) {
    from.col = std::clamp(from.col, 0, grid.cols - 1);
    from.row = std::clamp(from.row, 0, grid.rows - 1);
  }
  std::vector<std::uint8_t> seen(grid.occupied.size(), 0);
  std::queue<Cell> q;
  q.push(from);
  seen[grid.index(from)] = 1;
  while (!q.empty()) {
    const Cell c = q.front();
    q.pop();
    if (!grid.blocked(c)) {
      return c;
    }
    for (int k = 0; k < 4; ++k) {
      const Cell nb{c.col + kDc[k], c.row + kDr[k]};
      if (grid.in_bounds(nb) && !seen[grid.index(nb)]) {
        seen[grid.index(nb)] = 1;
        q.push(nb);
      }
    }
  }
  return std::nullopt;
}

Action follow_path(const Path& path, const Pose2D& pose, double lookahead,
                   const ControlGains& gains, double tolerance) {
  if (path.waypoints.empty()) {
    throw std::invalid_argument("follow_path needs a nonempty path");
  }
  const PlanarPoint here{pose.x, pose.z};
  const PlanarPoint& last = path.waypoints.back();
  if (geometry::distance(here, last) <= tolerance) {
    return {};
  }
  PlanarPoint target = last;
  for (const auto& w : path.waypoints) {
    if (geometry::distance(here, w) > lookahead) {
      target = w;
      break;
    }
  }
  return steer_toward(geometry::ring_to_robot_frame(target, pose), gains);
}

Action AStarPolicy::act(const PolicyContext& ctx) {
  const auto& s = ctx.state;
  const auto& me = s.robot(ctx.self);
  const PlanarPoint here{me.pose.x, me.pose.z};

  std::optional<PlanarPoint> target;
  if (me.rings_held >= ctx.cfg.ring_capacity) {
    // Full: retreat to the middle of our own half.
    const double side = ctx.self == geometry::Alliance::Red ? -1.0 : 1.0;
    target = PlanarPoint{side * ctx.cfg.half_width() / 2.0, 0.0};
  } else {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : s.rings) {
      const double d = geometry::distance(here, r.position);
      if (!r.collected && d < best) {
        best = d;
        target = r.position;
      }
    }
  }
  if (!target) {
    return {};
  }

  const GridMap grid = build_grid(s, ctx.self, ctx.cfg, opts_.resolution, opts_.inflation);
  const auto start = nearest_free(grid, grid.cell_of(here));
  const auto goal = nearest_free(grid, grid.cell_of(*target));
  if (!start || !goal) {
    return {};
  }
  Path path;
  try {
    path = astar_plan(grid, *start, *goal);
  } catch (const NoPathError&) {
    return {};
  }
  // Finish on the exact target rather than the cell center.
  path.waypoints.push_back(*target);
  return follow_path(path, me.pose, opts_.lookahead, opts_.gains, 0.05);
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, std::uint64_t seed) {
  if (spec.kind == "zero") {
    return std::make_unique<ZeroPolicy>();
  }
  if (spec.kind == "random") {
    return std::make_unique<RandomPolicy>(seed);
  }
  if (spec.kind == "greedy") {
    return std::make_unique<GreedyPolicy>(spec.gains);
  }
  if (spec.kind == "astar") {
    PlannerOptions p = spec.planner;
    p.gains = spec.gains;
    return std::make_unique<AStarPolicy>(p);
  }
  throw ConfigError("unknown policy '" + spec.kind + "' (expected zero, random, greedy or astar)");
}

// ---- remote ------------------------------------------------------------------

RemotePolicy::RemotePolicy(link::Transport& transport, Pump pump,
                           std::chrono::milliseconds timeout, int max_timeouts)
    : endpoint_(
          transport, [this] { return telemetry_; }, nullptr, timeout),
      pump_(std::move(pump)),
      max_timeouts_(max_timeouts) {}

Action RemotePolicy::act(const PolicyContext& ctx) {
  const auto pose = geometry::to_alliance_frame(ctx.state.robot(ctx.self).pose, ctx.self);
  telemetry_ = {pose.x, pose.z, pose.heading, ctx.state.clock};
  std::optional<link::JetsonPacket> reply;
  try {
    reply = endpoint_.exchange(max_timeouts_, [&] {
      if (pump_) {
        pump_(ctx);
      }
    });
  } catch (const TransportError& e) {
    throw PolicyError(std::string("link failure: ") + e.what());
  }
  if (!reply) {
    throw PolicyError("timed out waiting for the coprocessor");
  }
  return {reply->velocity, reply->rotation};
}

PolicyHost::PolicyHost(Policy& policy, geometry::Alliance self, const sim::SimConfig& cfg)
    : policy_(policy),
      self_(self),
      cfg_(cfg),
      stack_(cfg.stack_depth),
      rng_(sim::observation_rng(cfg.seed, self)) {}

void PolicyHost::reset() {
  stack_ = sim::StackedObservation(cfg_.stack_depth);
  rng_ = sim::observation_rng(cfg_.seed, self_);
  invocations_ = 0;
  policy_.reset();
}

link::Command PolicyHost::operator()(const link::BrainPacket& p) {
  if (state_ == nullptr) {
    throw PolicyError("policy host has no field state bound");
  }
  ++invocations_;
  sim::ObservationInputs in = sim::gather_observation_inputs(*state_, self_, cfg_);
  in.self = {p.x, p.z, p.heading};
  in.elapsed = p.game_time;
  stack_.push(sim::assemble_observation(in, cfg_, &rng_));
  const Action a = policy_.act(PolicyContext{stack_, *state_, self_, cfg_});
  return {a.forward, a.turn};
}

}  // namespace ringbot::policy
