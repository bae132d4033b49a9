#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grid/grid.hpp"

namespace mlmkit::grid {

// External trainer contract: the substituted command runs under /bin/sh,
// exits 0 and leaves {output_dir}/report.json with
// {"metric": ..., "validation": ..., "test": ...}.
struct RunnerOptions {
  std::string trainer_template;  // placeholders {lr} {batch_size} {epochs} {output_dir}
                                 // plus optional {task} {split_seed}
  uint32_t max_parallel = 1;
  std::string grid_dir;          // journal + per-run working directories
  uint64_t split_seed = 0;       // recorded for tasks that hold out validation data
};

// Expands the grid, replays the journal, executes what is still pending
// or previously failed, and returns every run in grid order.
std::vector<GridRun> run_grid(const GridConfig& config, const RunnerOptions& options);

// Journal-only view, grid order; fails if the journal is missing.
std::vector<GridRun> load_grid_state(const std::string& grid_dir, GridConfig* config_out,
                                     std::string* task_out);

// Deterministic holdout for tasks that split validation off the training
// set; returns sorted item indices of the held-out fraction.
std::vector<uint64_t> holdout_indices(uint64_t count, double fraction, uint64_t seed);

}  // namespace mlmkit::grid
