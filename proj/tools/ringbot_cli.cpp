// ringbot: command-line front end for the simulator, vision pipeline and link.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ringbot/errors.hpp"
#include "ringbot/harness.hpp"

namespace {

using namespace ringbot;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> episodes;
  std::string policy;
  std::string transport;
  std::string out;
  bool debug_images = false;
  std::vector<std::string> inputs;
  std::string depth;
  std::string calibration;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Harness config JSON")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "Output directory (default: out)");
}

void add_episode_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "Seed of the first episode; episode i uses seed + i");
  cmd->add_option("--episodes", o.episodes, "Number of episodes")->check(CLI::PositiveNumber);
  cmd->add_option("--policy", o.policy,
                  "RED[,BLUE] policy kinds: zero, random, greedy, astar (default greedy,zero)");
}

harness::HarnessConfig resolve(const Overrides& o) {
  harness::HarnessConfig cfg =
      o.config.empty() ? harness::HarnessConfig{} : harness::load_harness_config(o.config);
  if (o.seed) {
    cfg.seed = *o.seed;
  }
  if (o.episodes) {
    cfg.episodes = *o.episodes;
  }
  if (!o.policy.empty()) {
    const auto comma = o.policy.find(',');
    cfg.red = policy::PolicySpec{o.policy.substr(0, comma), cfg.red.gains, cfg.red.planner};
    if (comma != std::string::npos) {
      cfg.blue = policy::PolicySpec{o.policy.substr(comma + 1), cfg.blue.gains, cfg.blue.planner};
    }
    policy::make_policy(cfg.red, 0);
    policy::make_policy(cfg.blue, 0);
  }
  if (!o.transport.empty()) {
    cfg.transport = harness::parse_transport_kind(o.transport);
  }
  if (!o.out.empty()) {
    cfg.out = o.out;
  }
  if (o.debug_images) {
    cfg.debug_images = true;
  }
  for (const auto& in : o.inputs) {
    cfg.inputs.emplace_back(in);
  }
  if (!o.depth.empty()) {
    cfg.depth = o.depth;
  }
  if (!o.calibration.empty()) {
    cfg.calibration = geometry::load_calibration(o.calibration);
  }
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ringbot: ring-collecting robot simulator, vision pipeline and link tools"};
  app.require_subcommand(1);
  Overrides o;

  const std::string csv_help = std::string("\nmetrics.csv columns, in order:\n  ") +
                               harness::kMetricsHeader +
                               "\nPer-episode files: episode_NNNN.jsonl (one JSON object per step, then a "
                               "summary line) and episode_NNNN.csv.";

  auto* sim = app.add_subcommand("sim", "Simulated episodes");
  sim->require_subcommand(1);
  auto* sim_run = sim->add_subcommand("run", "Run episodes and write metrics");
  add_common(sim_run, o);
  add_episode_flags(sim_run, o);
  sim_run->footer(csv_help);

  auto* vis = app.add_subcommand("vision", "Ring detection");
  vis->require_subcommand(1);
  auto* vis_proc = vis->add_subcommand("process", "Detect and localize rings in images");
  add_common(vis_proc, o);
  vis_proc->add_option("inputs", o.inputs, "Image files (PNG or PPM) or directories");
  vis_proc->add_option("--depth", o.depth,
                       "Depth image for a single input, or a directory of <stem>_depth.png / .depth");
  vis_proc->add_option("--calibration", o.calibration, "Camera calibration JSON")
      ->check(CLI::ExistingFile);
  vis_proc->add_flag("--debug-images", o.debug_images, "Also write threshold, blur and mask images");

  auto* lnk = app.add_subcommand("link", "Brain/coprocessor link");
  lnk->require_subcommand(1);
  auto* loop = lnk->add_subcommand("loopback", "Run episodes with both policies served over the link");
  add_common(loop, o);
  add_episode_flags(loop, o);
  loop->add_option("--transport", o.transport, "memory, stdio or file (default memory)")
      ->check(CLI::IsMember({"memory", "stdio", "file"}));
  loop->footer(csv_help + "\nlink_stats.csv columns: episode,side,brain_sent,brain_fresh,"
                          "brain_timeouts,jetson_fresh,jetson_duplicates,jetson_sent,policy_invocations");

  std::uint64_t check_seed = 0;
  auto* self = app.add_subcommand("selfcheck", "Run the built-in invariant checks");
  self->add_option("--seed", check_seed, "Seed for the randomized checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return harness::kExitConfig;
  }

  if (self->parsed()) {
    return harness::cmd_selfcheck(check_seed, std::cout);
  }
  harness::HarnessConfig cfg;
  try {
    cfg = resolve(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return harness::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return harness::kExitConfig;
  }
  if (sim_run->parsed()) {
    return harness::cmd_sim_run(cfg, std::cout, std::cerr);
  }
  if (vis_proc->parsed()) {
    return harness::cmd_vision_process(cfg, std::cout, std::cerr);
  }
  if (loop->parsed()) {
    return harness::cmd_link_loopback(cfg, std::cout, std::cerr);
  }
  return harness::kExitConfig;
}
