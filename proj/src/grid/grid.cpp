#include "grid/grid.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "util/error.hpp"
#include "util/fs.hpp"

namespace mlmkit::grid {

void GridConfig::validate() const {
  if (learning_rates.empty() || batch_sizes.empty()) {
    fail(ErrorCode::config, "grid needs non-empty learning_rates and batch_sizes");
  }
  if (epochs < 1) {
    fail(ErrorCode::config, "epochs must be >= 1");
  }
  if (selection_metric != "f1" && selection_metric != "accuracy") {
    fail(ErrorCode::config, "selection_metric must be \"f1\" or \"accuracy\"");
  }
}

GridConfig GridConfig::load(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    fail(ErrorCode::parse, path + ": invalid grid config JSON");
  }
  GridConfig config;
  if (j.contains("learning_rates")) {
    config.learning_rates = j.at("learning_rates").get<std::vector<double>>();
  }
  if (j.contains("batch_sizes")) {
    config.batch_sizes = j.at("batch_sizes").get<std::vector<uint32_t>>();
  }
  config.epochs = j.value("epochs", config.epochs);
  config.task = j.value("task", config.task);
  config.selection_metric = j.value("selection_metric", config.selection_metric);
  config.validate();
  return config;
}

nlohmann::json GridConfig::to_json() const {
  return {
      {"learning_rates", learning_rates}, {"batch_sizes", batch_sizes},
      {"epochs", epochs},                 {"task", task},
      {"selection_metric", selection_metric},
  };
}

const char* run_status_name(RunStatus status) {
  switch (status) {
    case RunStatus::pending: return "pending";
    case RunStatus::running: return "running";
    case RunStatus::done: return "done";
    case RunStatus::failed: return "failed";
  }
  return "unknown";
}

std::string format_lr(double lr) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", lr);
  return buf;
}

std::vector<GridRun> expand_grid(const GridConfig& config) {
  config.validate();

  std::vector<double> lrs = config.learning_rates;
  std::sort(lrs.begin(), lrs.end(), std::greater<>());
  lrs.erase(std::unique(lrs.begin(), lrs.end()), lrs.end());

  std::vector<uint32_t> batches = config.batch_sizes;
  std::sort(batches.begin(), batches.end());
  batches.erase(std::unique(batches.begin(), batches.end()), batches.end());

  std::vector<GridRun> runs;
  runs.reserve(lrs.size() * batches.size());
  for (double lr : lrs) {
    for (uint32_t bs : batches) {
      GridRun run;
      run.lr = lr;
      run.batch_size = bs;
      run.run_id = "lr" + format_lr(lr) + "_bs" + std::to_string(bs);
      runs.push_back(std::move(run));
    }
  }
  return runs;
}

size_t select_best_index(const std::vector<GridRun>& runs) {
  std::optional<size_t> best;
  for (size_t i = 0; i < runs.size(); ++i) {
    if (runs[i].status != RunStatus::done || !runs[i].validation) continue;
    if (!best || *runs[i].validation > *runs[*best].validation) {
      best = i;
    }
  }
  if (!best) {
    fail(ErrorCode::selection, "no completed runs to select from");
  }
  return *best;
}

const GridRun& select_best(const std::vector<GridRun>& runs) {
  return runs[select_best_index(runs)];
}

std::string report_table_csv(const std::vector<TaskResult>& results) {
  std::ostringstream out;
  out << "task,metric,lr,batch_size,validation,test\n";
  char buf[64];
  for (const TaskResult& r : results) {
    out << r.task << ',' << r.best.metric << ',' << format_lr(r.best.lr) << ','
        << r.best.batch_size << ',';
    std::snprintf(buf, sizeof(buf), "%.6g", r.best.validation.value_or(0.0));
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.6g", r.best.test.value_or(0.0));
    out << buf << '\n';
  }
  return out.str();
}

std::string report_table_text(const std::vector<TaskResult>& results) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"task", "metric", "lr", "batch_size", "validation", "test"});
  char buf[64];
  for (const TaskResult& r : results) {
    std::vector<std::string> row;
    row.push_back(r.task);
    row.push_back(r.best.metric);
    row.push_back(format_lr(r.best.lr));
    row.push_back(std::to_string(r.best.batch_size));
    std::snprintf(buf, sizeof(buf), "%.6g", r.best.validation.value_or(0.0));
    row.push_back(buf);
    std::snprintf(buf, sizeof(buf), "%.6g", r.best.test.value_or(0.0));
    row.push_back(buf);
    rows.push_back(std::move(row));
  }
  std::vector<size_t> widths(rows[0].size(), 0);
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      out << row[c];
      if (c + 1 < row.size()) {
        out << std::string(widths[c] - row[c].size() + 2, ' ');
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace mlmkit::grid
