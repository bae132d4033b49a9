#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mlmkit::sched {

// Warmup + polynomial decay. Defaults are the pre-training run shape:
// linear ramp to the peak over the warmup, then decay to end_lr at
// total_steps.
struct LrSchedule {
  uint64_t warmup_steps = 10000;
  double peak_lr = 7e-4;
  uint64_t total_steps = 100000;
  double end_lr = 0.0;
  double decay_power = 1.0;

  void validate() const;
};

// Run-shape constants alongside the schedule; nothing here computes with
// them, they document the target configuration.
inline constexpr uint64_t kPretrainTotalSteps = 100000;
inline constexpr uint64_t kPretrainBatchSize = 8192;

double lr_at(const LrSchedule& schedule, uint64_t step);

std::vector<std::pair<uint64_t, double>> dump_schedule(const LrSchedule& schedule,
                                                       uint64_t stride);

std::string schedule_csv(const LrSchedule& schedule, uint64_t stride);

}  // namespace mlmkit::sched
