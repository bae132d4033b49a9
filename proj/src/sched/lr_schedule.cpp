#include "sched/lr_schedule.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "util/error.hpp"

namespace mlmkit::sched {

void LrSchedule::validate() const {
  if (warmup_steps == 0 || warmup_steps >= total_steps) {
    fail(ErrorCode::config, "schedule requires 0 < warmup_steps < total_steps");
  }
  if (!(peak_lr > end_lr) || end_lr < 0.0) {
    fail(ErrorCode::config, "schedule requires peak_lr > end_lr >= 0");
  }
  if (!(decay_power > 0.0) || !std::isfinite(decay_power)) {
    fail(ErrorCode::config, "schedule requires decay_power > 0");
  }
}

double lr_at(const LrSchedule& s, uint64_t step) {
  if (step <= s.warmup_steps) {
    return s.peak_lr * (static_cast<double>(step) / static_cast<double>(s.warmup_steps));
  }
  if (step >= s.total_steps) {
    return s.end_lr;
  }
  double frac = static_cast<double>(s.total_steps - step) /
                static_cast<double>(s.total_steps - s.warmup_steps);
  if (s.decay_power != 1.0) {
    frac = std::pow(frac, s.decay_power);
  }
  return s.end_lr + (s.peak_lr - s.end_lr) * frac;
}

std::vector<std::pair<uint64_t, double>> dump_schedule(const LrSchedule& s, uint64_t stride) {
  s.validate();
  if (stride == 0) {
    fail(ErrorCode::invalid_argument, "stride must be >= 1");
  }
  std::vector<std::pair<uint64_t, double>> rows;
  for (uint64_t step = 0; step < s.total_steps; step += stride) {
    rows.emplace_back(step, lr_at(s, step));
  }
  rows.emplace_back(s.total_steps, lr_at(s, s.total_steps));
  return rows;
}

std::string schedule_csv(const LrSchedule& s, uint64_t stride) {
  std::ostringstream out;
  out << "step,lr\n";
  char buf[64];
  for (const auto& [step, lr] : dump_schedule(s, stride)) {
    std::snprintf(buf, sizeof(buf), "%.12g", lr);
    out << step << ',' << buf << '\n';
  }
  return out.str();
}

}  // namespace mlmkit::sched
