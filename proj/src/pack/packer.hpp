#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bpe/encoder.hpp"
#include "bpe/model.hpp"

namespace mlmkit::pack {

inline constexpr uint32_t kSequenceLength = 512;
inline constexpr uint32_t kPayloadLength = kSequenceLength - 2;  // bos + eos

struct PackedSequence {
  std::vector<uint32_t> ids;        // exactly kSequenceLength
  std::vector<uint8_t> word_start;  // same shape; 0 on specials and pad
  uint16_t n_real = 0;              // bos + payload + eos

  bool operator==(const PackedSequence&) const = default;
};

struct PackStats {
  uint64_t sentences_in = 0;
  uint64_t tokens_in = 0;
  uint64_t sequences_out = 0;
  uint64_t hard_split_sentences = 0;  // sentences longer than the payload
};

struct SentencePlacement {
  uint64_t sentence_index;
  uint64_t sequence_index;
  uint32_t offset;  // position of the first token within the sequence
  uint32_t length;
};

// Greedy first-fit in stream order. A sentence that would overflow the
// open payload starts a new sequence; sentences longer than the payload
// are split at token granularity, the remainder staying open for the
// following sentences. end_document() closes the open sequence so nothing
// packs across document boundaries.
class Packer {
 public:
  using Sink = std::function<void(PackedSequence&&)>;

  Packer(const bpe::SpecialTokens& specials, Sink sink,
         std::vector<SentencePlacement>* placements = nullptr);

  void add_sentence(const bpe::Encoded& sentence);
  void end_document();
  void finish();

  const PackStats& stats() const { return stats_; }

 private:
  void flush();
  void append_run(const bpe::Encoded& sentence, size_t from, size_t count);

  bpe::SpecialTokens specials_;
  Sink sink_;
  std::vector<SentencePlacement>* placements_;
  std::vector<uint32_t> payload_ids_;
  std::vector<uint8_t> payload_word_start_;
  PackStats stats_;
};

}  // namespace mlmkit::pack
