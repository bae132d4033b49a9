#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bpe/model.hpp"

namespace mlmkit::bpe {

struct Encoded {
  std::vector<uint32_t> ids;
  std::vector<uint8_t> word_start;  // 1 on the first token of each unit
};

// Stateful wrapper around an immutable model: caches per-unit encodings,
// so use one instance per thread.
class Encoder {
 public:
  explicit Encoder(const TokenizerModel& model);

  Encoded encode(std::string_view text);
  std::string decode(std::span<const uint32_t> ids, bool keep_specials = false) const;

  const TokenizerModel& model() const { return model_; }

 private:
  struct Rule {
    uint32_t rank;
    uint32_t merged_sid;
  };

  const std::vector<uint32_t>& encode_unit(std::string_view unit);

  const TokenizerModel& model_;
  std::vector<std::string> symbols_;
  std::unordered_map<uint64_t, Rule> rules_;
  std::vector<uint32_t> sid_to_vocab_;
  std::unordered_map<std::string, std::vector<uint32_t>> cache_;
};

}  // namespace mlmkit::bpe
