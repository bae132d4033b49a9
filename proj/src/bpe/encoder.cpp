#include "bpe/encoder.hpp"

#include <limits>

#include "bpe/byte_map.hpp"
#include "bpe/pretokenize.hpp"
#include "util/error.hpp"

namespace mlmkit::bpe {

namespace {

inline uint64_t pair_key(uint32_t a, uint32_t b) {
  return (static_cast<uint64_t>(a) << 32) | b;
}

}  // namespace

Encoder::Encoder(const TokenizerModel& model) : model_(model) {
  model_.validate();

  std::unordered_map<std::string, uint32_t> symbol_ids;
  symbols_.assign(byte_to_unicode().begin(), byte_to_unicode().end());
  for (uint32_t sid = 0; sid < symbols_.size(); ++sid) {
    symbol_ids.emplace(symbols_[sid], sid);
  }
  auto intern = [&](const std::string& s) {
    auto [it, inserted] = symbol_ids.emplace(s, static_cast<uint32_t>(symbols_.size()));
    if (inserted) symbols_.push_back(s);
    return it->second;
  };

  for (size_t rank = 0; rank < model_.merges.size(); ++rank) {
    const auto& [left, right] = model_.merges[rank];
    uint32_t l = intern(left);
    uint32_t r = intern(right);
    uint32_t merged = intern(left + right);
    // first rule wins when duplicate pairs exist
    rules_.try_emplace(pair_key(l, r), Rule{static_cast<uint32_t>(rank), merged});
  }

  sid_to_vocab_.resize(symbols_.size());
  for (uint32_t sid = 0; sid < symbols_.size(); ++sid) {
    auto it = model_.token_to_id.find(symbols_[sid]);
    if (it == model_.token_to_id.end()) {
      fail(ErrorCode::format, "merge symbol not present in vocab: " + symbols_[sid]);
    }
    sid_to_vocab_[sid] = it->second;
  }
}

const std::vector<uint32_t>& Encoder::encode_unit(std::string_view unit) {
  auto cached = cache_.find(std::string(unit));
  if (cached != cache_.end()) {
    return cached->second;
  }

  std::vector<uint32_t> sids;
  sids.reserve(unit.size());
  for (unsigned char b : unit) {
    sids.push_back(b);
  }

  while (sids.size() >= 2) {
    uint32_t best_rank = std::numeric_limits<uint32_t>::max();
    uint32_t best_merged = 0;
    uint32_t best_left = 0;
    uint32_t best_right = 0;
    for (size_t i = 0; i + 1 < sids.size(); ++i) {
      auto it = rules_.find(pair_key(sids[i], sids[i + 1]));
      if (it != rules_.end() && it->second.rank < best_rank) {
        best_rank = it->second.rank;
        best_merged = it->second.merged_sid;
        best_left = sids[i];
        best_right = sids[i + 1];
      }
    }
    if (best_rank == std::numeric_limits<uint32_t>::max()) break;

    std::vector<uint32_t> rewritten;
    rewritten.reserve(sids.size());
    for (size_t i = 0; i < sids.size();) {
      if (i + 1 < sids.size() && sids[i] == best_left && sids[i + 1] == best_right) {
        rewritten.push_back(best_merged);
        i += 2;
      } else {
        rewritten.push_back(sids[i]);
        ++i;
      }
    }
    sids = std::move(rewritten);
  }

  std::vector<uint32_t> ids;
  ids.reserve(sids.size());
  for (uint32_t sid : sids) {
    ids.push_back(sid_to_vocab_[sid]);
  }
  auto [it, inserted] = cache_.emplace(std::string(unit), std::move(ids));
  return it->second;
}

Encoded Encoder::encode(std::string_view text) {
  Encoded out;
  for (std::string_view unit : pretokenize(text)) {
    const auto& ids = encode_unit(unit);
    for (size_t k = 0; k < ids.size(); ++k) {
      out.ids.push_back(ids[k]);
      out.word_start.push_back(k == 0 ? 1 : 0);
    }
  }
  return out;
}

std::string Encoder::decode(std::span<const uint32_t> ids, bool keep_specials) const {
  std::string symbols;
  for (uint32_t id : ids) {
    if (id >= model_.vocab_size()) {
      fail(ErrorCode::input, "token id out of range: " + std::to_string(id));
    }
    if (id < kNumSpecials && !keep_specials) {
      continue;
    }
    symbols += model_.id_to_token[id];
  }
  return symbols_to_bytes(symbols);
}

}  // namespace mlmkit::bpe
