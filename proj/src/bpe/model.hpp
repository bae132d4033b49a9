#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mlmkit::bpe {

inline constexpr uint32_t kTokenizerFormatVersion = 1;
inline constexpr uint32_t kNumSpecials = 5;
inline constexpr uint32_t kFirstByteId = kNumSpecials;  // byte symbols at ids 5..260

struct SpecialTokens {
  uint32_t bos = 0;
  uint32_t eos = 1;
  uint32_t pad = 2;
  uint32_t unk = 3;
  uint32_t mask = 4;

  static constexpr const char* kBosText = "<s>";
  static constexpr const char* kEosText = "</s>";
  static constexpr const char* kPadText = "<pad>";
  static constexpr const char* kUnkText = "<unk>";
  static constexpr const char* kMaskText = "<mask>";

  bool operator==(const SpecialTokens&) const = default;
};

// Immutable after training/loading. Tokens and merges live in the
// byte-level symbol space.
struct TokenizerModel {
  std::vector<std::string> id_to_token;
  std::unordered_map<std::string, uint32_t> token_to_id;
  std::vector<std::pair<std::string, std::string>> merges;
  SpecialTokens specials;
  uint32_t requested_vocab_size = 0;
  std::string pretokenizer;

  uint32_t vocab_size() const { return static_cast<uint32_t>(id_to_token.size()); }

  void validate() const;

  bool operator==(const TokenizerModel&) const = default;
};

// Builds the id<->token tables from the fixed layout: specials, the 256
// byte symbols in byte order, then merge outputs in merge order.
TokenizerModel assemble_model(std::vector<std::pair<std::string, std::string>> merges,
                              uint32_t requested_vocab_size);

void save_model(const TokenizerModel& model, const std::string& dir);
TokenizerModel load_model(const std::string& dir);

// True when dir holds both model files.
bool model_files_present(const std::string& dir);

}  // namespace mlmkit::bpe
