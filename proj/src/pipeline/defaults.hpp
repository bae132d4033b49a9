#pragma once

#include <array>
#include <cstdint>

// Every numeric default the pipeline uses lives here; configs/defaults.json
// mirrors this table and a test keeps the two in sync.
namespace mlmkit::defaults {

inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr uint32_t kSequenceLength = 512;
inline constexpr uint32_t kPayloadLength = 510;
inline constexpr uint32_t kVocabSize = 52009;

inline constexpr double kMaskProb = 0.15;
inline constexpr double kActionMask = 0.8;
inline constexpr double kActionRandom = 0.1;
inline constexpr double kActionKeep = 0.1;

inline constexpr uint64_t kWarmupSteps = 10000;
inline constexpr uint64_t kTotalSteps = 100000;
inline constexpr double kPeakLr = 7e-4;
inline constexpr double kEndLr = 0.0;
inline constexpr double kDecayPower = 1.0;
inline constexpr uint64_t kPretrainBatchSize = 8192;

inline constexpr std::array<double, 6> kGridLearningRates = {5e-5, 2e-5, 1e-5,
                                                             7e-6, 5e-6, 1e-6};
inline constexpr std::array<uint32_t, 4> kGridBatchSizes = {16, 32, 48, 64};
inline constexpr uint32_t kGridEpochs = 30;
inline constexpr uint32_t kGridEpochsNli = 10;
inline constexpr double kHoldoutFraction = 0.10;

inline constexpr uint64_t kDefaultMaxPerShard = 16384;

}  // namespace mlmkit::defaults
