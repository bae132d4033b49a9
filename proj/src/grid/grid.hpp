#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace mlmkit::grid {

struct GridConfig {
  std::vector<double> learning_rates = {5e-5, 2e-5, 1e-5, 7e-6, 5e-6, 1e-6};
  std::vector<uint32_t> batch_sizes = {16, 32, 48, 64};
  uint32_t epochs = 30;
  std::string task;
  std::string selection_metric = "f1";  // "f1" | "accuracy"

  void validate() const;
  static GridConfig load(const std::string& path);
  nlohmann::json to_json() const;
};

enum class RunStatus : uint8_t { pending, running, done, failed };

const char* run_status_name(RunStatus status);

struct GridRun {
  std::string run_id;
  double lr = 0.0;
  uint32_t batch_size = 0;
  RunStatus status = RunStatus::pending;
  std::string metric;
  std::optional<double> validation;
  std::optional<double> test;
  std::string log_path;
};

std::string format_lr(double lr);

// Cartesian product over de-duplicated values, descending learning rate
// major, ascending batch size minor.
std::vector<GridRun> expand_grid(const GridConfig& config);

// Validation argmax over done runs; ties go to the earlier grid position.
// Selection never sees test values.
size_t select_best_index(const std::vector<GridRun>& runs_in_grid_order);

const GridRun& select_best(const std::vector<GridRun>& runs_in_grid_order);

struct TaskResult {
  std::string task;
  GridRun best;
};

std::string report_table_csv(const std::vector<TaskResult>& results);
std::string report_table_text(const std::vector<TaskResult>& results);

}  // namespace mlmkit::grid
