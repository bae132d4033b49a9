#include "pack/packer.hpp"

#include "util/error.hpp"

namespace mlmkit::pack {

Packer::Packer(const bpe::SpecialTokens& specials, Sink sink,
               std::vector<SentencePlacement>* placements)
    : specials_(specials), sink_(std::move(sink)), placements_(placements) {
  payload_ids_.reserve(kPayloadLength);
  payload_word_start_.reserve(kPayloadLength);
}

void Packer::flush() {
  if (payload_ids_.empty()) return;

  PackedSequence seq;
  seq.ids.reserve(kSequenceLength);
  seq.word_start.assign(kSequenceLength, 0);
  seq.ids.push_back(specials_.bos);
  for (size_t i = 0; i < payload_ids_.size(); ++i) {
    seq.ids.push_back(payload_ids_[i]);
    seq.word_start[1 + i] = payload_word_start_[i];
  }
  seq.ids.push_back(specials_.eos);
  seq.n_real = static_cast<uint16_t>(seq.ids.size());
  seq.ids.resize(kSequenceLength, specials_.pad);

  payload_ids_.clear();
  payload_word_start_.clear();
  stats_.sequences_out += 1;
  sink_(std::move(seq));
}

void Packer::append_run(const bpe::Encoded& sentence, size_t from, size_t count) {
  if (placements_) {
    placements_->push_back(SentencePlacement{
        stats_.sentences_in - 1, stats_.sequences_out,
        static_cast<uint32_t>(1 + payload_ids_.size()), static_cast<uint32_t>(count)});
  }
  for (size_t i = from; i < from + count; ++i) {
    payload_ids_.push_back(sentence.ids[i]);
    payload_word_start_.push_back(sentence.word_start[i]);
  }
}

void Packer::add_sentence(const bpe::Encoded& sentence) {
  if (sentence.ids.size() != sentence.word_start.size()) {
    fail(ErrorCode::input, "sentence ids and word_start flags disagree in length");
  }
  if (sentence.ids.empty()) return;

  stats_.sentences_in += 1;
  stats_.tokens_in += sentence.ids.size();

  size_t len = sentence.ids.size();
  if (payload_ids_.size() + len > kPayloadLength && !payload_ids_.empty()) {
    flush();
  }
  if (len <= kPayloadLength) {
    append_run(sentence, 0, len);
    return;
  }

  stats_.hard_split_sentences += 1;
  size_t from = 0;
  while (len - from > kPayloadLength) {
    append_run(sentence, from, kPayloadLength);
    from += kPayloadLength;
    flush();
  }
  if (from < len) {
    append_run(sentence, from, len - from);
  }
}

void Packer::end_document() { flush(); }

void Packer::finish() { flush(); }

}  // namespace mlmkit::pack
