#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ringbot/calibration.hpp"
#include "ringbot/episode.hpp"
#include "ringbot/link.hpp"
#include "ringbot/policy.hpp"
#include "ringbot/vision.hpp"

namespace ringbot::harness {

namespace fs = std::filesystem;

enum class TransportKind { Memory, Stdio, File };

TransportKind parse_transport_kind(const std::string& s);
const char* to_string(TransportKind k);

struct HarnessConfig {
  sim::SimConfig sim;
  vision::PipelineConfig pipeline;
  std::optional<geometry::Calibration> calibration;
  policy::PolicySpec red{"greedy", {}, {}};
  policy::PolicySpec blue{"zero", {}, {}};
  fs::path out = "out";
  std::uint64_t seed = 0;
  int episodes = 1;
  TransportKind transport = TransportKind::Memory;
  int timeout_ms = 250;
  bool debug_images = false;
  bool record_steps = true;
  std::vector<fs::path> inputs;  // images or directories for vision
  std::optional<fs::path> depth;  // depth file, or directory of <stem>_depth.png

  void validate() const;
};

/// Relative paths inside the file resolve against `base_dir`. Referenced
/// files must exist and parse; any problem throws ConfigError.
HarnessConfig parse_harness_config(const std::string& json_text, const fs::path& base_dir = ".");
HarnessConfig load_harness_config(const fs::path& path);

policy::PolicySpec parse_policy_spec(const std::string& json_text);

inline constexpr const char* kMetricsHeader =
    "episode,seed,steps,clock,ended_by,"
    "red_ring,red_pin,red_goal,red_position,red_total,red_rings_collected,"
    "blue_ring,blue_pin,blue_goal,blue_position,blue_total,blue_rings_collected";

std::string metrics_row(int episode, std::uint64_t seed, const sim::EpisodeSummary& s);

/// Per-robot link counters for one loopback episode.
struct LinkReport {
  link::EndpointStats brain;
  link::EndpointStats jetson;
  std::uint64_t invocations = 0;
  std::uint64_t last_brain_iter = 0;
  std::uint64_t last_jetson_iter = 0;
};

struct LoopbackResult {
  sim::EpisodeLog log;
  std::array<LinkReport, 2> links;
  bool accounting_ok = true;
  std::string accounting_error;
};

/// One episode with both robots served over their own link. `scratch` holds
/// the files of the file transport.
LoopbackResult run_loopback_episode(const sim::SimConfig& cfg, const policy::PolicySpec& red,
                                    const policy::PolicySpec& blue, TransportKind kind,
                                    const fs::path& scratch, std::chrono::milliseconds timeout,
                                    const sim::EpisodeOptions& opts = {});

/// Exit codes: 0 ok, 1 config error, 2 runtime failure. Diagnostics go to err.
int cmd_sim_run(const HarnessConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_vision_process(const HarnessConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_link_loopback(const HarnessConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_selfcheck(std::uint64_t seed, std::ostream& out);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

}  // namespace ringbot::harness
