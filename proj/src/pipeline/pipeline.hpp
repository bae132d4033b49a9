#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sched/lr_schedule.hpp"

namespace mlmkit::pipeline {

struct PipelineConfig {
  std::string manifest;            // resolved against the config file location
  std::string work_dir;            // artifact directory; relative paths below resolve here
  std::string tokenizer_dir = "tokenizer";
  std::string shard_dir = "shards";
  std::string mask_policy;         // optional; empty skips the mask-stats stage
  std::vector<std::string> grid_configs;  // recorded in the run manifest
  uint64_t seed = 0;
  uint32_t vocab_size = 0;         // 0 = default
  uint64_t max_per_shard = 0;      // 0 = default
  sched::LrSchedule schedule;

  static PipelineConfig load(const std::string& path);
};

struct ArtifactRef {
  std::string path;  // relative to the work dir where possible
  std::string content_hash;
};

struct StageResult {
  std::string name;
  std::string status;  // done | failed | skipped
  std::vector<ArtifactRef> inputs;
  std::vector<ArtifactRef> outputs;
  nlohmann::json details;
  std::string error;
};

struct RunManifest {
  uint64_t seed = 0;
  bool ok = true;
  std::string failed_stage;
  nlohmann::json config_snapshot;  // schedule constants, grid configs, sizes
  std::vector<StageResult> stages;

  nlohmann::json to_json() const;
};

// validate -> dedup -> shuffle -> tokenizer (train or load) -> pack ->
// mask-stats. Halts at the first failing stage; later stages are marked
// skipped and the run manifest is still written.
RunManifest run_pipeline(const PipelineConfig& config,
                         const std::string& work_dir_override = "");

nlohmann::json version_info();

nlohmann::json defaults_json();

}  // namespace mlmkit::pipeline
