#include "ringbot/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "ringbot/errors.hpp"
#include "ringbot/format.hpp"
#include "ringbot/image.hpp"

namespace ringbot::harness {

using nlohmann::json;
using nlohmann::ordered_json;

TransportKind parse_transport_kind(const std::string& s) {
  if (s == "memory") {
    return TransportKind::Memory;
  }
  if (s == "stdio") {
    return TransportKind::Stdio;
  }
  if (s == "file") {
    return TransportKind::File;
  }
  throw ConfigError("unknown transport '" + s + "' (expected memory, stdio or file)");
}

const char* to_string(TransportKind k) {
  switch (k) {
    case TransportKind::Memory:
      return "memory";
    case TransportKind::Stdio:
      return "stdio";
    case TransportKind::File:
      return "file";
  }
  return "?";
}

// ---- config ------------------------------------------------------------------

namespace {

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read " + p.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

policy::PolicySpec policy_from_json(const json& j) {
  if (j.is_string()) {
    policy::PolicySpec s;
    s.kind = j.get<std::string>();
    return s;
  }
  if (!j.is_object()) {
    throw ConfigError("policy must be a string or an object");
  }
  policy::PolicySpec s;
  s.kind = j.value("kind", s.kind);
  s.gains.k_turn = j.value("k_turn", s.gains.k_turn);
  s.gains.scan_rate = j.value("scan_rate", s.gains.scan_rate);
  s.planner.resolution = j.value("resolution", s.planner.resolution);
  s.planner.lookahead = j.value("lookahead", s.planner.lookahead);
  s.planner.inflation = j.value("inflation", s.planner.inflation);
  if (!(s.planner.resolution > 0.0) || !(s.planner.lookahead >= 0.0) ||
      !(s.planner.inflation >= 0.0) || !std::isfinite(s.gains.k_turn) ||
      !std::isfinite(s.gains.scan_rate)) {
    throw ConfigError("policy gains out of range");
  }
  return s;
}

}  // namespace

policy::PolicySpec parse_policy_spec(const std::string& json_text) {
  try {
    return policy_from_json(json::parse(json_text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad policy spec: ") + e.what());
  }
}

void HarnessConfig::validate() const {
  sim.validate();
  pipeline.validate();
  if (episodes < 1) {
    throw ConfigError("episodes must be >= 1");
  }
  if (timeout_ms < 1) {
    throw ConfigError("timeout_ms must be >= 1");
  }
}

HarnessConfig parse_harness_config(const std::string& json_text, const fs::path& base_dir) {
  HarnessConfig c;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("harness config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw ConfigError("harness config must be a JSON object");
  }
  try {
    if (j.contains("sim_config")) {
      c.sim = sim::load_sim_config(resolve(base_dir, j["sim_config"].get<std::string>()));
    } else if (j.contains("sim")) {
      c.sim = sim::parse_sim_config(j["sim"].dump());
    }
    if (j.contains("pipeline_config")) {
      c.pipeline =
          vision::load_pipeline_config(resolve(base_dir, j["pipeline_config"].get<std::string>()));
    } else if (j.contains("pipeline")) {
      c.pipeline = vision::parse_pipeline_config(j["pipeline"].dump());
    }
    if (j.contains("calibration")) {
      const auto& cal = j["calibration"];
      c.calibration = cal.is_string()
                          ? geometry::load_calibration(resolve(base_dir, cal.get<std::string>()))
                          : geometry::parse_calibration(cal.dump());
    }
    if (j.contains("policies")) {
      const auto& p = j["policies"];
      if (p.contains("red")) {
        c.red = policy_from_json(p["red"]);
      }
      if (p.contains("blue")) {
        c.blue = policy_from_json(p["blue"]);
      }
    }
    if (j.contains("out")) {
      c.out = resolve(base_dir, j["out"].get<std::string>());
    }
    c.seed = j.value("seed", c.seed);
    c.episodes = j.value("episodes", c.episodes);
    if (j.contains("transport")) {
      c.transport = parse_transport_kind(j["transport"].get<std::string>());
    }
    c.timeout_ms = j.value("timeout_ms", c.timeout_ms);
    c.debug_images = j.value("debug_images", c.debug_images);
    c.record_steps = j.value("record_steps", c.record_steps);
    if (j.contains("inputs")) {
      for (const auto& in : j["inputs"]) {
        c.inputs.push_back(resolve(base_dir, in.get<std::string>()));
      }
    }
    if (j.contains("depth")) {
      c.depth = resolve(base_dir, j["depth"].get<std::string>());
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad harness config: ") + e.what());
  }
  // Fail fast on the cheap checks; the policy kinds are probed here too.
  make_policy(c.red, 0);
  make_policy(c.blue, 0);
  c.validate();
  return c;
}

HarnessConfig load_harness_config(const fs::path& path) {
  return parse_harness_config(read_text(path), path.parent_path().empty() ? "." : path.parent_path());
}

// ---- metrics -----------------------------------------------------------------

std::string metrics_row(int episode, std::uint64_t seed, const sim::EpisodeSummary& s) {
  std::string row = std::to_string(episode) + ',' + std::to_string(seed) + ',' +
                    std::to_string(s.steps) + ',' + format_double(s.clock) + ',' + s.ended_by;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& t = s.totals[i];
    for (double v : {t.ring, t.pin, t.goal, t.position, t.total()}) {
      row += ',' + format_double(v);
    }
    row += ',' + std::to_string(s.rings_collected[i]);
  }
  return row;
}

namespace {

std::string episode_stem(int i) {
  std::ostringstream ss;
  ss << "episode_" << std::setw(4) << std::setfill('0') << i;
  return ss.str();
}

void write_episode_files(const fs::path& dir, int i, const sim::EpisodeLog& log) {
  const std::string stem = episode_stem(i);
  std::ofstream jl(dir / (stem + ".jsonl"), std::ios::binary);
  std::ofstream csv(dir / (stem + ".csv"), std::ios::binary);
  if (!jl || !csv) {
    throw std::runtime_error("cannot write episode logs in " + dir.string());
  }
  sim::write_episode_jsonl(jl, log);
  sim::write_episode_csv(csv, log);
}

struct Means {
  std::array<double, 2> total{};
  std::array<double, 2> ring{};
  int n = 0;

  void add(const sim::EpisodeSummary& s) {
    for (std::size_t i = 0; i < 2; ++i) {
      total[i] += s.totals[i].total();
      ring[i] += s.totals[i].ring;
    }
    ++n;
  }
  void print(std::ostream& out) const {
    const double k = n > 0 ? 1.0 / n : 0.0;
    out << "episodes " << n << "\n"
        << "mean episode reward  red " << format_double(total[0] * k) << "  blue "
        << format_double(total[1] * k) << "\n"
        << "mean ring reward     red " << format_double(ring[0] * k) << "  blue "
        << format_double(ring[1] * k) << "\n";
  }
};

std::ofstream open_metrics(const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream m(dir / "metrics.csv", std::ios::binary);
  if (!m) {
    throw std::runtime_error("cannot write " + (dir / "metrics.csv").string());
  }
  m << kMetricsHeader << '\n';
  return m;
}

std::uint64_t policy_seed(std::uint64_t episode_seed, geometry::Alliance a) {
  return episode_seed * 2 + (a == geometry::Alliance::Red ? 0 : 1);
}

}  // namespace

int cmd_sim_run(const HarnessConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::ofstream metrics = open_metrics(cfg.out);
    Means means;
    int failures = 0;
    for (int i = 0; i < cfg.episodes; ++i) {
      sim::SimConfig sc = cfg.sim;
      sc.seed = cfg.seed + static_cast<std::uint64_t>(i);
      auto red = make_policy(cfg.red, policy_seed(sc.seed, geometry::Alliance::Red));
      auto blue = make_policy(cfg.blue, policy_seed(sc.seed, geometry::Alliance::Blue));
      const auto log = sim::run_episode(sc, *red, *blue, {cfg.record_steps});
      metrics << metrics_row(i, sc.seed, log.summary) << '\n';
      write_episode_files(cfg.out, i, log);
      if (log.summary.aborted) {
        err << "episode " << i << " aborted: " << log.summary.diagnostic << "\n";
        ++failures;
      }
      means.add(log.summary);
    }
    means.print(out);
    return failures == 0 ? kExitOk : kExitRuntime;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

// ---- loopback ----------------------------------------------------------------

namespace {

struct TransportPair {
  std::unique_ptr<link::Transport> brain;
  std::unique_ptr<link::Transport> jetson;
};

TransportPair make_transports(TransportKind kind, const fs::path& scratch, const std::string& tag) {
  switch (kind) {
    case TransportKind::Memory: {
      auto [a, b] = link::make_memory_pair();
      return {std::move(a), std::move(b)};
    }
    case TransportKind::Stdio: {
      auto [a, b] = link::make_pipe_pair();
      return {std::move(a), std::move(b)};
    }
    case TransportKind::File: {
      fs::create_directories(scratch);
      const fs::path to_jetson = scratch / (tag + "_brain.txt");
      const fs::path to_brain = scratch / (tag + "_jetson.txt");
      fs::remove(to_jetson);
      fs::remove(to_brain);
      return {std::make_unique<link::FileTransport>(to_jetson, to_brain),
              std::make_unique<link::FileTransport>(to_brain, to_jetson)};
    }
  }
  throw std::logic_error("unhandled transport");
}

struct RemoteSide {
  TransportPair transports;
  std::unique_ptr<sim::Policy> local;
  std::unique_ptr<policy::PolicyHost> host;
  std::unique_ptr<link::JetsonEndpoint> jetson;
  std::unique_ptr<policy::RemotePolicy> remote;

  RemoteSide(const policy::PolicySpec& spec, geometry::Alliance who, const sim::SimConfig& cfg,
             TransportKind kind, const fs::path& scratch, std::chrono::milliseconds timeout)
      : transports(make_transports(kind, scratch, who == geometry::Alliance::Red ? "red" : "blue")),
        local(make_policy(spec, policy_seed(cfg.seed, who))),
        host(std::make_unique<policy::PolicyHost>(*local, who, cfg)) {
    jetson = std::make_unique<link::JetsonEndpoint>(
        *transports.jetson, [this](const link::BrainPacket& p) { return (*host)(p); }, timeout);
    remote = std::make_unique<policy::RemotePolicy>(
        *transports.brain,
        [this](const sim::PolicyContext& ctx) {
          host->bind(ctx.state);
          jetson->serve_one();
        },
        timeout);
  }

  LinkReport report() const {
    LinkReport r;
    r.brain = remote->endpoint().stats();
    r.jetson = jetson->stats();
    r.invocations = host->invocations();
    r.last_brain_iter = remote->endpoint().state().last_sent_iter.value_or(0);
    r.last_jetson_iter = jetson->state().last_sent_iter.value_or(0);
    return r;
  }
};

std::string check_accounting(const LinkReport& r, int steps) {
  const auto n = static_cast<std::uint64_t>(steps);
  std::ostringstream why;
  if (r.brain.sent != n) {
    why << "brain sent " << r.brain.sent << " packets for " << n << " steps; ";
  }
  if (r.jetson.fresh != r.brain.sent || r.invocations != r.jetson.fresh) {
    why << "jetson accepted " << r.jetson.fresh << " and invoked " << r.invocations << " of "
        << r.brain.sent << "; ";
  }
  if (r.brain.fresh != r.jetson.sent) {
    why << "brain accepted " << r.brain.fresh << " of " << r.jetson.sent << " responses; ";
  }
  if (n > 0 && (r.last_brain_iter != n - 1 || r.last_jetson_iter != n - 1)) {
    why << "final iters " << r.last_brain_iter << "/" << r.last_jetson_iter << "; ";
  }
  if (r.brain.malformed + r.jetson.malformed + r.brain.duplicates + r.jetson.duplicates != 0) {
    why << "unexpected duplicate or malformed lines; ";
  }
  return why.str();
}

}  // namespace

LoopbackResult run_loopback_episode(const sim::SimConfig& cfg, const policy::PolicySpec& red,
                                    const policy::PolicySpec& blue, TransportKind kind,
                                    const fs::path& scratch, std::chrono::milliseconds timeout,
                                    const sim::EpisodeOptions& opts) {
  RemoteSide r(red, geometry::Alliance::Red, cfg, kind, scratch, timeout);
  RemoteSide b(blue, geometry::Alliance::Blue, cfg, kind, scratch, timeout);
  LoopbackResult res;
  res.log = sim::run_episode(cfg, *r.remote, *b.remote, opts);
  res.links = {r.report(), b.report()};
  if (!res.log.summary.aborted) {
    std::string why;
    for (std::size_t i = 0; i < 2; ++i) {
      const std::string w = check_accounting(res.links[i], res.log.summary.steps);
      if (!w.empty()) {
        why += (i == 0 ? "red: " : "blue: ") + w;
      }
    }
    res.accounting_ok = why.empty();
    res.accounting_error = why;
  }
  return res;
}

int cmd_link_loopback(const HarnessConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::ofstream metrics = open_metrics(cfg.out);
    std::ofstream stats(cfg.out / "link_stats.csv", std::ios::binary);
    stats << "episode,side,brain_sent,brain_fresh,brain_timeouts,jetson_fresh,jetson_duplicates,"
             "jetson_sent,policy_invocations\n";
    Means means;
    int failures = 0;
    for (int i = 0; i < cfg.episodes; ++i) {
      sim::SimConfig sc = cfg.sim;
      sc.seed = cfg.seed + static_cast<std::uint64_t>(i);
      const auto res = run_loopback_episode(sc, cfg.red, cfg.blue, cfg.transport,
                                            cfg.out / "link", std::chrono::milliseconds(cfg.timeout_ms),
                                            {cfg.record_steps});
      metrics << metrics_row(i, sc.seed, res.log.summary) << '\n';
      write_episode_files(cfg.out, i, res.log);
      for (std::size_t k = 0; k < 2; ++k) {
        const auto& l = res.links[k];
        stats << i << ',' << (k == 0 ? "red" : "blue") << ',' << l.brain.sent << ','
              << l.brain.fresh << ',' << l.brain.timeouts << ',' << l.jetson.fresh << ','
              << l.jetson.duplicates << ',' << l.jetson.sent << ',' << l.invocations << '\n';
      }
      if (res.log.summary.aborted) {
        err << "episode " << i << " aborted: " << res.log.summary.diagnostic << "\n";
        ++failures;
      } else if (!res.accounting_ok) {
        err << "episode " << i << " iter accounting mismatch: " << res.accounting_error << "\n";
        ++failures;
      }
      means.add(res.log.summary);
    }
    out << "transport " << to_string(cfg.transport) << "\n";
    means.print(out);
    return failures == 0 ? kExitOk : kExitRuntime;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

// ---- vision ------------------------------------------------------------------

namespace {

bool is_image(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
  const std::string stem = p.stem().string();
  const bool depth_like = stem.size() > 6 && stem.ends_with("_depth");
  return !depth_like && (ext == ".png" || ext == ".ppm");
}

std::vector<fs::path> expand_inputs(const std::vector<fs::path>& inputs, std::ostream& err,
                                    int& failures) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.is_regular_file() && is_image(e.path())) {
          found.push_back(e.path());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::exists(in)) {
      files.push_back(in);
    } else {
      err << in.string() << ": no such file\n";
      ++failures;
    }
  }
  return files;
}

std::optional<fs::path> depth_for(const HarnessConfig& cfg, const fs::path& image, bool single) {
  if (!cfg.depth) {
    return std::nullopt;
  }
  if (fs::is_directory(*cfg.depth)) {
    const std::string stem = image.stem().string();
    for (const char* suffix : {"_depth.png", "_depth.depth", "_depth.raw"}) {
      const fs::path p = *cfg.depth / (stem + suffix);
      if (fs::exists(p)) {
        return p;
      }
    }
    return std::nullopt;
  }
  if (single) {
    return cfg.depth;
  }
  return std::nullopt;
}

ordered_json box_json(const vision::BoundingBox& b) {
  return {{"x", b.x}, {"y", b.y}, {"width", b.width}, {"height", b.height}};
}

}  // namespace

int cmd_vision_process(const HarnessConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.pipeline.validate();
    if (cfg.inputs.empty()) {
      throw ConfigError("no input images given");
    }
    fs::create_directories(cfg.out);
    std::optional<geometry::InverseIntrinsics> inv;
    if (cfg.calibration) {
      inv = geometry::invert_intrinsics(cfg.calibration->intrinsics);
    }
    const vision::HeuristicDetector detector(cfg.pipeline.detector);
    int failures = 0;
    const auto files = expand_inputs(cfg.inputs, err, failures);
    int processed = 0;
    for (const auto& file : files) {
      const std::string stem = file.stem().string();
      try {
        const auto img = vision::read_color_image(file);
        std::optional<vision::DepthMap> depth;
        if (const auto dp = depth_for(cfg, file, files.size() == 1)) {
          depth = vision::read_depth(*dp);
        }
        const auto res = vision::process_image(img, depth ? &*depth : nullptr, cfg.pipeline, detector);

        ordered_json j;
        j["image"] = file.filename().string();
        j["width"] = img.width;
        j["height"] = img.height;
        auto cands = ordered_json::array();
        for (const auto& c : res.candidates) {
          cands.push_back({{"u", c.u}, {"v", c.v}, {"pixel_count", c.pixel_count}, {"box", box_json(c.box)}});
        }
        j["candidates"] = std::move(cands);
        auto accepted = ordered_json::array();
        for (const auto& a : res.accepted) {
          ordered_json aj{{"candidate", a.candidate_index}, {"score", a.score}};
          aj["depth"] = a.depth ? ordered_json(*a.depth) : ordered_json(nullptr);
          accepted.push_back(std::move(aj));
        }
        j["accepted"] = std::move(accepted);
        j["rejected"] = res.rejected;

        auto dets = ordered_json::array();
        std::vector<std::string> flags;
        if (!depth) {
          flags.emplace_back("no_depth");
          for (const auto& a : res.accepted) {
            const auto& c = res.candidates[a.candidate_index];
            dets.push_back({{"u", c.u}, {"v", c.v}, {"depth", nullptr}, {"position", nullptr}});
          }
        } else if (!inv) {
          flags.emplace_back("no_calibration");
          for (const auto& d : res.detections) {
            dets.push_back({{"u", d.u}, {"v", d.v}, {"depth", d.depth}, {"position", nullptr}});
          }
        } else {
          for (const auto& l : vision::localize(res.detections, *inv, cfg.calibration->mount)) {
            dets.push_back({{"u", l.pixel.u},
                            {"v", l.pixel.v},
                            {"depth", l.pixel.depth},
                            {"position", {{"x", l.floor.x}, {"z", l.floor.z}}},
                            {"robot", {{"x", l.robot.x}, {"y", l.robot.y}, {"z", l.robot.z}}},
                            {"distance", l.distance}});
          }
        }
        if (res.dropped_no_depth > 0) {
          flags.emplace_back("depth_missing_at_some_detections");
        }
        j["detections"] = std::move(dets);
        j["dropped_no_depth"] = res.dropped_no_depth;
        j["flags"] = flags;

        std::ofstream f(cfg.out / (stem + ".json"), std::ios::binary);
        f << j.dump(2) << '\n';
        if (cfg.debug_images) {
          vision::write_png(cfg.out / (stem + "_step2_threshold.png"), res.threshold);
          vision::write_png(cfg.out / (stem + "_step3_blur.png"), res.blurred);
          vision::write_png(cfg.out / (stem + "_step4_masked.png"), res.masked);
        }
        out << file.filename().string() << ": " << res.candidates.size() << " candidates, "
            << res.accepted.size() << " accepted" << (depth ? "" : " (no depth)") << "\n";
        ++processed;
      } catch (const std::exception& e) {
        err << file.string() << ": " << e.what() << "\n";
        ++failures;
      }
    }
    out << processed << " image(s) processed, " << failures << " failed\n";
    return failures == 0 ? kExitOk : kExitRuntime;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

// ---- selfcheck ---------------------------------------------------------------

namespace {

sim::FieldState random_state(const sim::SimConfig& base, geometry::Rng& rng) {
  sim::SimConfig cfg = base;
  cfg.layout = sim::Layout::SeededRandom;
  cfg.seed = rng();
  sim::FieldState s = sim::init_field(cfg);
  const double lim = cfg.half_width() - cfg.robot_half_extent;
  std::uniform_real_distribution<double> pos(-lim, lim);
  std::uniform_real_distribution<double> ang(-geometry::kPi, geometry::kPi);
  std::bernoulli_distribution coin(0.2);
  for (auto& r : s.robots) {
    r.pose = {pos(rng), pos(rng), ang(rng)};
  }
  for (auto& ring : s.rings) {
    ring.collected = coin(rng);
  }
  s.step_index = std::uniform_int_distribution<int>(0, cfg.episode_steps - 1)(rng);
  s.clock = s.step_index * cfg.dt;
  return s;
}

bool check_projection(geometry::Rng& rng, std::string& detail) {
  const geometry::CameraIntrinsics k{615.0, 612.0, 320.0, 240.0};
  const geometry::CameraMount mount{0.35, 0.3, 0.1};
  const auto inv = geometry::invert_intrinsics(k);
  std::uniform_real_distribution<double> ux(0.0, 640.0);
  std::uniform_real_distribution<double> vy(260.0, 480.0);
  std::uniform_real_distribution<double> dd(0.2, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const geometry::PixelDetection px{ux(rng), vy(rng), dd(rng)};
    const auto robot = geometry::camera_to_robot(geometry::pixel_to_camera(px, inv), mount);
    const auto back = geometry::robot_to_pixel(robot, k, mount);
    if (!back) {
      detail = "point fell behind the camera";
      return false;
    }
    worst = std::max({worst, std::abs(back->u - px.u) / 640.0, std::abs(back->v - px.v) / 480.0,
                      std::abs(back->depth - px.depth) / px.depth});
  }
  detail = "worst relative error " + format_double(worst);
  return worst < 1e-9;
}

bool check_symmetry(geometry::Rng& rng, std::string& detail) {
  sim::SimConfig cfg;
  cfg.noise_fraction = 0.0;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto s = random_state(cfg, rng);
    const auto a = sim::build_observation(s, geometry::Alliance::Red, cfg, nullptr);
    const auto b = sim::build_observation(sim::rotate180(s), geometry::Alliance::Blue, cfg, nullptr);
    for (std::size_t k = 0; k < a.size(); ++k) {
      worst = std::max(worst, std::abs(a[k] - b[k]));
    }
  }
  detail = "worst difference " + format_double(worst);
  return worst <= 1e-12;
}

bool check_codec(geometry::Rng& rng, std::string& detail) {
  std::uniform_real_distribution<double> big(-1e3, 1e3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const link::BrainPacket b{big(rng), big(rng), unit(rng) * geometry::kPi, big(rng) + 1e3, rng()};
    const link::JetsonPacket j{unit(rng), unit(rng), rng()};
    if (link::decode_brain(link::encode_brain(b)) != b || link::decode_jetson(link::encode_jetson(j)) != j) {
      detail = "mismatch at packet " + std::to_string(i);
      return false;
    }
  }
  detail = "1000 packets each way";
  return true;
}

}  // namespace

int cmd_selfcheck(std::uint64_t seed, std::ostream& out) {
  geometry::Rng rng(seed);
  struct Check {
    const char* name;
    bool (*fn)(geometry::Rng&, std::string&);
  };
  const Check checks[] = {{"projection round-trip", check_projection},
                          {"alliance symmetry", check_symmetry},
                          {"codec round-trip", check_codec}};
  int failed = 0;
  for (const auto& c : checks) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(rng, detail);
    } catch (const std::exception& e) {
      detail = e.what();
    }
    out << (ok ? "PASS " : "FAIL ") << c.name << " (" << detail << ")\n";
    failed += ok ? 0 : 1;
  }
  return failed == 0 ? kExitOk : kExitRuntime;
}

}  // namespace ringbot::harness
