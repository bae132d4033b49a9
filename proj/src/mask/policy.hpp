#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace mlmkit::mask {

// Labels use this value everywhere except corrupted-candidate positions;
// it is out of vocab by construction (ids are 32-bit and vocab sizes far
// smaller).
inline constexpr uint32_t kIgnoreSentinel = 0xFFFFFFFFu;

enum class ActionScope : uint8_t { word, token };

struct MaskPolicy {
  double mask_prob = 0.15;
  double p_mask = 0.8;
  double p_random = 0.1;
  double p_keep = 0.1;
  ActionScope action_scope = ActionScope::word;
  uint32_t ignore_sentinel = kIgnoreSentinel;

  void validate() const;
  nlohmann::json to_json() const;
  static MaskPolicy from_json(const nlohmann::json& j, const std::string& where);
  static MaskPolicy load(const std::string& path);
};

}  // namespace mlmkit::mask
