#include "grid/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "util/error.hpp"
#include "util/fs.hpp"
#include "util/rng.hpp"

namespace mlmkit::grid {

namespace fs = std::filesystem;

namespace {

constexpr const char* kJournalFile = "journal.jsonl";

std::string substitute(std::string text, const std::string& key, const std::string& value) {
  const std::string needle = "{" + key + "}";
  size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    text.replace(pos, needle.size(), value);
    pos += value.size();
  }
  return text;
}

void require_placeholder(const std::string& tmpl, const std::string& key) {
  if (tmpl.find("{" + key + "}") == std::string::npos) {
    fail(ErrorCode::config, "trainer template is missing the {" + key + "} placeholder");
  }
}

struct JournalState {
  nlohmann::json meta;
  // run_id -> latest journal record
  std::map<std::string, nlohmann::json> runs;
};

JournalState read_journal(const std::string& path) {
  JournalState state;
  std::ifstream in(path);
  if (!in) return state;
  std::string line;
  uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("type")) {
      fail(ErrorCode::parse, path + ":" + std::to_string(line_no) + ": bad journal line");
    }
    std::string type = j.at("type").get<std::string>();
    if (type == "meta") {
      state.meta = j;
    } else if (type == "run") {
      state.runs[j.at("run_id").get<std::string>()] = j;
    }
  }
  return state;
}

void apply_record(GridRun& run, const nlohmann::json& record) {
  std::string status = record.value("status", "failed");
  run.status = status == "done" ? RunStatus::done : RunStatus::failed;
  if (record.contains("metric")) run.metric = record.at("metric").get<std::string>();
  if (record.contains("validation")) run.validation = record.at("validation").get<double>();
  if (record.contains("test")) run.test = record.at("test").get<double>();
  if (record.contains("log")) run.log_path = record.at("log").get<std::string>();
}

nlohmann::json parse_trainer_report(const std::string& report_path) {
  nlohmann::json j = nlohmann::json::parse(read_text_file(report_path), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("metric") ||
      !j.contains("validation") || !j.contains("test") ||
      !j.at("validation").is_number() || !j.at("test").is_number()) {
    fail(ErrorCode::parse, report_path + ": trainer report must carry metric/validation/test");
  }
  return j;
}

}  // namespace

std::vector<uint64_t> holdout_indices(uint64_t count, double fraction, uint64_t seed) {
  if (fraction <= 0.0 || fraction >= 1.0) {
    fail(ErrorCode::invalid_argument, "holdout fraction must be in (0, 1)");
  }
  std::vector<uint64_t> all(count);
  for (uint64_t i = 0; i < count; ++i) all[i] = i;
  Xoshiro256ss rng(mix_seed(seed, 0x686f6c64u, 0));
  fisher_yates(all, rng);
  uint64_t take = static_cast<uint64_t>(static_cast<double>(count) * fraction + 0.5);
  all.resize(take);
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<GridRun> run_grid(const GridConfig& config, const RunnerOptions& options) {
  config.validate();
  for (const char* key : {"lr", "batch_size", "epochs", "output_dir"}) {
    require_placeholder(options.trainer_template, key);
  }
  if (options.grid_dir.empty()) {
    fail(ErrorCode::invalid_argument, "grid_dir is required");
  }
  ensure_dir(options.grid_dir);
  ensure_dir(fs::path(options.grid_dir) / "runs");

  const std::string journal_path = (fs::path(options.grid_dir) / kJournalFile).string();
  JournalState journal = read_journal(journal_path);

  std::vector<GridRun> runs = expand_grid(config);

  std::ofstream journal_out(journal_path, std::ios::binary | std::ios::app);
  if (!journal_out) {
    fail(ErrorCode::io, "cannot open journal: " + journal_path);
  }
  std::mutex journal_mutex;
  auto append = [&](const nlohmann::json& j) {
    std::lock_guard<std::mutex> lock(journal_mutex);
    journal_out << j.dump() << '\n';
    journal_out.flush();
  };

  if (journal.meta.is_null()) {
    nlohmann::json meta;
    meta["type"] = "meta";
    meta["task"] = config.task;
    meta["config"] = config.to_json();
    meta["trainer"] = options.trainer_template;
    meta["split_seed"] = options.split_seed;
    nlohmann::json order = nlohmann::json::array();
    for (const GridRun& r : runs) order.push_back(r.run_id);
    meta["grid"] = order;
    append(meta);
  } else {
    // resuming: the grid must be the same one
    nlohmann::json order = nlohmann::json::array();
    for (const GridRun& r : runs) order.push_back(r.run_id);
    if (journal.meta.value("grid", nlohmann::json::array()) != order) {
      fail(ErrorCode::config,
           journal_path + ": journal belongs to a different grid; use a fresh directory");
    }
  }

  // replay: done runs stay done, failed runs are retried
  std::vector<size_t> todo;
  for (size_t i = 0; i < runs.size(); ++i) {
    auto it = journal.runs.find(runs[i].run_id);
    if (it != journal.runs.end()) {
      apply_record(runs[i], it->second);
    }
    if (runs[i].status != RunStatus::done) {
      runs[i].status = RunStatus::pending;
      todo.push_back(i);
    }
  }

  std::atomic<size_t> cursor{0};
  unsigned workers = std::max(1u, options.max_parallel);
  workers = static_cast<unsigned>(std::min<size_t>(workers, std::max<size_t>(todo.size(), 1)));

  auto execute = [&](size_t run_index) {
    GridRun& run = runs[run_index];
    run.status = RunStatus::running;

    const fs::path run_dir = fs::path(options.grid_dir) / "runs" / run.run_id;
    ensure_dir(run_dir);
    const std::string log_path = (run_dir / "run.log").string();

    std::string cmd = options.trainer_template;
    cmd = substitute(cmd, "lr", format_lr(run.lr));
    cmd = substitute(cmd, "batch_size", std::to_string(run.batch_size));
    cmd = substitute(cmd, "epochs", std::to_string(config.epochs));
    cmd = substitute(cmd, "output_dir", run_dir.string());
    cmd = substitute(cmd, "task", config.task);
    cmd = substitute(cmd, "split_seed", std::to_string(options.split_seed));
    std::string shell = "( " + cmd + " ) > '" + log_path + "' 2>&1";

    nlohmann::json record;
    record["type"] = "run";
    record["run_id"] = run.run_id;
    record["lr"] = run.lr;
    record["batch_size"] = run.batch_size;
    record["log"] = log_path;

    int rc = std::system(shell.c_str());
    if (rc != 0) {
      run.status = RunStatus::failed;
      record["status"] = "failed";
      record["exit_code"] = rc;
      append(record);
      return;
    }
    try {
      nlohmann::json report = parse_trainer_report((run_dir / "report.json").string());
      run.metric = report.at("metric").get<std::string>();
      run.validation = report.at("validation").get<double>();
      run.test = report.at("test").get<double>();
      run.status = RunStatus::done;
      run.log_path = log_path;
      record["status"] = "done";
      record["metric"] = run.metric;
      record["validation"] = *run.validation;
      record["test"] = *run.test;
    } catch (const Error& e) {
      run.status = RunStatus::failed;
      record["status"] = "failed";
      record["error"] = e.what();
    }
    append(record);
  };

  if (!todo.empty()) {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          size_t i = cursor.fetch_add(1);
          if (i >= todo.size()) break;
          execute(todo[i]);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  return runs;
}

std::vector<GridRun> load_grid_state(const std::string& grid_dir, GridConfig* config_out,
                                     std::string* task_out) {
  const std::string journal_path = (fs::path(grid_dir) / kJournalFile).string();
  std::error_code ec;
  if (!fs::exists(journal_path, ec)) {
    fail(ErrorCode::io, "no journal found in: " + grid_dir);
  }
  JournalState journal = read_journal(journal_path);
  if (journal.meta.is_null() || !journal.meta.contains("config")) {
    fail(ErrorCode::parse, journal_path + ": journal has no meta record");
  }

  GridConfig config;
  const auto& cj = journal.meta.at("config");
  config.learning_rates = cj.at("learning_rates").get<std::vector<double>>();
  config.batch_sizes = cj.at("batch_sizes").get<std::vector<uint32_t>>();
  config.epochs = cj.value("epochs", config.epochs);
  config.task = cj.value("task", std::string());
  config.selection_metric = cj.value("selection_metric", config.selection_metric);
  if (config_out) *config_out = config;
  if (task_out) *task_out = journal.meta.value("task", std::string());

  std::vector<GridRun> runs = expand_grid(config);
  for (GridRun& run : runs) {
    auto it = journal.runs.find(run.run_id);
    if (it != journal.runs.end()) {
      apply_record(run, it->second);
    }
  }
  return runs;
}

}  // namespace mlmkit::grid
