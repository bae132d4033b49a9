#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "bpe/model.hpp"
#include "mask/policy.hpp"
#include "pack/packer.hpp"

namespace mlmkit::mask {

enum class MaskAction : uint8_t { mask = 0, random = 1, keep = 2 };

struct WordSpan {
  uint16_t start;  // token position, inclusive
  uint16_t end;    // exclusive

  bool operator==(const WordSpan&) const = default;
};

struct MaskedWord {
  WordSpan span;
  MaskAction action;  // per-token scope stores the first token's action
};

struct MaskedSequence {
  std::vector<uint32_t> input_ids;
  std::vector<uint32_t> labels;  // original ids on selected words, sentinel elsewhere
  std::vector<MaskedWord> meta;
};

// Word spans partition the payload positions [1, n_real-1); a span opens
// at every word_start and at the payload start (a hard-split remainder
// begins mid-word).
std::vector<WordSpan> group_words(const pack::PackedSequence& seq);

// Pure function of (policy, seed, epoch, sequence_index).
MaskedSequence mask_sequence(const pack::PackedSequence& seq, const MaskPolicy& policy,
                             uint32_t vocab_size, uint64_t seed, uint64_t epoch,
                             uint64_t sequence_index);

// Masks a batch with a fixed thread partition; results are independent of
// worker count. first_index is the global index of seqs[0].
std::vector<MaskedSequence> mask_batch(const std::vector<pack::PackedSequence>& seqs,
                                       const MaskPolicy& policy, uint32_t vocab_size,
                                       uint64_t seed, uint64_t epoch, unsigned threads = 1,
                                       uint64_t first_index = 0);

struct MaskStats {
  uint64_t sequences = 0;
  uint64_t maskable_tokens = 0;
  uint64_t selected_tokens = 0;
  uint64_t selected_words = 0;
  uint64_t action_words[3] = {0, 0, 0};   // indexed by MaskAction
  uint64_t action_tokens[3] = {0, 0, 0};

  void add(const pack::PackedSequence& seq, const MaskedSequence& masked);
  double masked_fraction() const;
  double words_per_sequence() const;
  nlohmann::json to_json() const;
};

// Masked-batch file, little-endian:
//   magic "GMSK" | u32 version | u32 vocab_size | u32 sequence_length |
//   u64 count | u64 seed | u64 epoch | u32 ignore_sentinel
//   rows: input_ids u32 x 512, labels u32 x 512
inline constexpr char kMaskedMagic[4] = {'G', 'M', 'S', 'K'};
inline constexpr uint32_t kMaskedFormatVersion = 1;

void write_masked_file(const std::string& path, const std::vector<MaskedSequence>& batch,
                       uint32_t vocab_size, uint64_t seed, uint64_t epoch,
                       uint32_t ignore_sentinel);

std::vector<MaskedSequence> read_masked_file(const std::string& path);

}  // namespace mlmkit::mask
