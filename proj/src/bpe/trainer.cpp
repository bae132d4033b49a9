#include "bpe/trainer.hpp"

#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "bpe/byte_map.hpp"
#include "bpe/pretokenize.hpp"
#include "util/error.hpp"

namespace mlmkit::bpe {

namespace {

inline uint64_t pair_key(uint32_t a, uint32_t b) {
  return (static_cast<uint64_t>(a) << 32) | b;
}

struct Piece {
  std::vector<uint32_t> symbols;
  uint64_t freq = 0;
};

}  // namespace

TokenizerModel train_bpe(const TextSource& source, uint32_t vocab_size) {
  const uint32_t floor = 256 + kNumSpecials;
  if (vocab_size < floor) {
    fail(ErrorCode::config,
         "vocab_size must be >= " + std::to_string(floor) + ", got " + std::to_string(vocab_size));
  }

  // Unique pretokenization units with frequencies; symbols start as raw
  // byte values.
  std::unordered_map<std::string, uint64_t> unit_freq;
  uint64_t documents = 0;
  std::string text;
  while (source(text)) {
    ++documents;
    for (std::string_view unit : pretokenize(text)) {
      unit_freq[std::string(unit)] += 1;
    }
  }
  if (documents == 0) {
    fail(ErrorCode::input, "training stream is empty");
  }

  std::vector<std::string> symbols(byte_to_unicode().begin(), byte_to_unicode().end());
  std::unordered_map<std::string, uint32_t> symbol_ids;
  symbol_ids.reserve(symbols.size() * 2);
  for (uint32_t sid = 0; sid < symbols.size(); ++sid) {
    symbol_ids.emplace(symbols[sid], sid);
  }

  std::vector<Piece> pieces;
  pieces.reserve(unit_freq.size());
  for (const auto& [unit, freq] : unit_freq) {
    Piece p;
    p.freq = freq;
    p.symbols.reserve(unit.size());
    for (unsigned char b : unit) {
      p.symbols.push_back(b);
    }
    pieces.push_back(std::move(p));
  }

  std::unordered_map<uint64_t, int64_t> pair_counts;
  auto count_piece = [&](const Piece& p, int64_t sign) {
    for (size_t i = 0; i + 1 < p.symbols.size(); ++i) {
      uint64_t key = pair_key(p.symbols[i], p.symbols[i + 1]);
      int64_t& c = pair_counts[key];
      c += sign * static_cast<int64_t>(p.freq);
      if (c == 0) pair_counts.erase(key);
    }
  };
  for (const Piece& p : pieces) count_piece(p, +1);

  std::vector<std::pair<std::string, std::string>> merges;
  uint32_t distinct_tokens = floor;

  while (distinct_tokens < vocab_size && !pair_counts.empty()) {
    // argmax by count; ties by lexicographically smallest (left, right)
    int64_t best_count = std::numeric_limits<int64_t>::min();
    uint32_t best_left = 0;
    uint32_t best_right = 0;
    bool have_best = false;
    for (const auto& [key, count] : pair_counts) {
      uint32_t left = static_cast<uint32_t>(key >> 32);
      uint32_t right = static_cast<uint32_t>(key & 0xFFFFFFFFu);
      if (!have_best || count > best_count ||
          (count == best_count &&
           (symbols[left] < symbols[best_left] ||
            (symbols[left] == symbols[best_left] && symbols[right] < symbols[best_right])))) {
        best_count = count;
        best_left = left;
        best_right = right;
        have_best = true;
      }
    }

    const std::string merged_str = symbols[best_left] + symbols[best_right];
    uint32_t merged_sid;
    auto it = symbol_ids.find(merged_str);
    if (it != symbol_ids.end()) {
      // two merge paths can build the same string; the vocab entry is
      // shared, the rule is still recorded
      merged_sid = it->second;
    } else {
      merged_sid = static_cast<uint32_t>(symbols.size());
      symbols.push_back(merged_str);
      symbol_ids.emplace(merged_str, merged_sid);
      ++distinct_tokens;
    }
    merges.emplace_back(symbols[best_left], symbols[best_right]);

    for (Piece& p : pieces) {
      bool contains = false;
      for (size_t i = 0; i + 1 < p.symbols.size(); ++i) {
        if (p.symbols[i] == best_left && p.symbols[i + 1] == best_right) {
          contains = true;
          break;
        }
      }
      if (!contains) continue;
      count_piece(p, -1);
      std::vector<uint32_t> rewritten;
      rewritten.reserve(p.symbols.size());
      for (size_t i = 0; i < p.symbols.size();) {
        if (i + 1 < p.symbols.size() && p.symbols[i] == best_left &&
            p.symbols[i + 1] == best_right) {
          rewritten.push_back(merged_sid);
          i += 2;
        } else {
          rewritten.push_back(p.symbols[i]);
          ++i;
        }
      }
      p.symbols = std::move(rewritten);
      count_piece(p, +1);
    }
  }

  TokenizerModel model = assemble_model(std::move(merges), vocab_size);
  model.validate();
  return model;
}

}  // namespace mlmkit::bpe
