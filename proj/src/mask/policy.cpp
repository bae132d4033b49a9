#include "mask/policy.hpp"

#include <cmath>

#include "util/error.hpp"
#include "util/fs.hpp"

namespace mlmkit::mask {

void MaskPolicy::validate() const {
  if (!(mask_prob > 0.0) || !(mask_prob < 1.0)) {
    fail(ErrorCode::config, "mask_prob must be in (0, 1)");
  }
  if (p_mask < 0.0 || p_random < 0.0 || p_keep < 0.0) {
    fail(ErrorCode::config, "action probabilities must be non-negative");
  }
  if (std::abs(p_mask + p_random + p_keep - 1.0) > 1e-9) {
    fail(ErrorCode::config, "action probabilities must sum to 1");
  }
}

nlohmann::json MaskPolicy::to_json() const {
  return {
      {"mask_prob", mask_prob},
      {"actions", {{"mask", p_mask}, {"random", p_random}, {"keep", p_keep}}},
      {"action_scope", action_scope == ActionScope::word ? "word" : "token"},
      {"ignore_sentinel", ignore_sentinel},
  };
}

MaskPolicy MaskPolicy::from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) {
    fail(ErrorCode::parse, where + ": policy must be a JSON object");
  }
  MaskPolicy policy;
  policy.mask_prob = j.value("mask_prob", policy.mask_prob);
  if (j.contains("actions")) {
    const auto& a = j.at("actions");
    policy.p_mask = a.value("mask", policy.p_mask);
    policy.p_random = a.value("random", policy.p_random);
    policy.p_keep = a.value("keep", policy.p_keep);
  }
  std::string scope = j.value("action_scope", "word");
  if (scope == "word") {
    policy.action_scope = ActionScope::word;
  } else if (scope == "token") {
    policy.action_scope = ActionScope::token;
  } else {
    fail(ErrorCode::config, where + ": action_scope must be \"word\" or \"token\"");
  }
  policy.ignore_sentinel = j.value("ignore_sentinel", policy.ignore_sentinel);
  policy.validate();
  return policy;
}

MaskPolicy MaskPolicy::load(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded()) {
    fail(ErrorCode::parse, path + ": invalid JSON");
  }
  return from_json(j, path);
}

}  // namespace mlmkit::mask
