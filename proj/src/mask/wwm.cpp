#include "mask/wwm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <thread>

#include "util/error.hpp"
#include "util/rng.hpp"

namespace mlmkit::mask {

std::vector<WordSpan> group_words(const pack::PackedSequence& seq) {
  if (seq.ids.size() != pack::kSequenceLength ||
      seq.word_start.size() != pack::kSequenceLength) {
    fail(ErrorCode::input, "sequence must have exactly " +
                               std::to_string(pack::kSequenceLength) + " positions");
  }
  if (seq.n_real < 2 || seq.n_real > pack::kSequenceLength) {
    fail(ErrorCode::input, "n_real out of range: " + std::to_string(seq.n_real));
  }
  if (seq.word_start[0]) {
    fail(ErrorCode::input, "inconsistent word_start flags: set on the bos position");
  }
  for (size_t i = seq.n_real - 1; i < pack::kSequenceLength; ++i) {
    if (seq.word_start[i]) {
      fail(ErrorCode::input, "inconsistent word_start flags: set on eos or pad position " +
                                 std::to_string(i));
    }
  }

  std::vector<WordSpan> spans;
  const uint16_t payload_end = static_cast<uint16_t>(seq.n_real - 1);
  for (uint16_t pos = 1; pos < payload_end; ++pos) {
    if (pos == 1 || seq.word_start[pos]) {
      spans.push_back(WordSpan{pos, static_cast<uint16_t>(pos + 1)});
    } else {
      spans.back().end = static_cast<uint16_t>(pos + 1);
    }
  }
  return spans;
}

MaskedSequence mask_sequence(const pack::PackedSequence& seq, const MaskPolicy& policy,
                             uint32_t vocab_size, uint64_t seed, uint64_t epoch,
                             uint64_t sequence_index) {
  policy.validate();
  if (vocab_size <= bpe::kNumSpecials) {
    fail(ErrorCode::invalid_argument, "vocab_size too small for random replacement");
  }

  std::vector<WordSpan> words = group_words(seq);

  MaskedSequence out;
  out.input_ids = seq.ids;
  out.labels.assign(pack::kSequenceLength, policy.ignore_sentinel);

  const uint64_t maskable = seq.n_real >= 2 ? static_cast<uint64_t>(seq.n_real - 2) : 0;
  if (maskable == 0 || words.empty()) {
    return out;
  }
  // epsilon guards against products like 0.15*100 landing a hair above
  // the integer they represent
  const uint64_t budget = static_cast<uint64_t>(
      std::ceil(policy.mask_prob * static_cast<double>(maskable) - 1e-9));
  if (budget == 0) {
    return out;
  }

  Xoshiro256ss rng(mix_seed(seed, epoch, sequence_index));

  // uniform word order, then take words until the token budget is reached
  std::vector<uint32_t> order(words.size());
  std::iota(order.begin(), order.end(), 0u);
  fisher_yates(order, rng);

  std::vector<uint32_t> selected;
  uint64_t selected_tokens = 0;
  for (uint32_t idx : order) {
    if (selected_tokens >= budget) break;
    selected.push_back(idx);
    selected_tokens += words[idx].end - words[idx].start;
  }
  std::sort(selected.begin(), selected.end());

  const uint32_t replace_range = vocab_size - bpe::kNumSpecials;
  auto draw_action = [&]() {
    double u = rng.unit();
    if (u < policy.p_mask) return MaskAction::mask;
    if (u < policy.p_mask + policy.p_random) return MaskAction::random;
    return MaskAction::keep;
  };
  auto apply = [&](uint16_t pos, MaskAction action) {
    out.labels[pos] = seq.ids[pos];
    switch (action) {
      case MaskAction::mask:
        out.input_ids[pos] = bpe::SpecialTokens{}.mask;
        break;
      case MaskAction::random:
        out.input_ids[pos] =
            bpe::kNumSpecials + static_cast<uint32_t>(rng.below(replace_range));
        break;
      case MaskAction::keep:
        break;
    }
  };

  for (uint32_t idx : selected) {
    const WordSpan& span = words[idx];
    MaskAction first_action = MaskAction::keep;
    if (policy.action_scope == ActionScope::word) {
      MaskAction action = draw_action();
      first_action = action;
      for (uint16_t pos = span.start; pos < span.end; ++pos) {
        apply(pos, action);
      }
    } else {
      for (uint16_t pos = span.start; pos < span.end; ++pos) {
        MaskAction action = draw_action();
        if (pos == span.start) first_action = action;
        apply(pos, action);
      }
    }
    out.meta.push_back(MaskedWord{span, first_action});
  }
  return out;
}

std::vector<MaskedSequence> mask_batch(const std::vector<pack::PackedSequence>& seqs,
                                       const MaskPolicy& policy, uint32_t vocab_size,
                                       uint64_t seed, uint64_t epoch, unsigned threads,
                                       uint64_t first_index) {
  policy.validate();
  std::vector<MaskedSequence> out(seqs.size());
  if (seqs.empty()) return out;
  if (threads <= 1) {
    for (size_t i = 0; i < seqs.size(); ++i) {
      out[i] = mask_sequence(seqs[i], policy, vocab_size, seed, epoch, first_index + i);
    }
    return out;
  }
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      for (size_t i = t; i < seqs.size(); i += threads) {
        out[i] = mask_sequence(seqs[i], policy, vocab_size, seed, epoch, first_index + i);
      }
    });
  }
  for (auto& w : workers) w.join();
  return out;
}

void MaskStats::add(const pack::PackedSequence& seq, const MaskedSequence& masked) {
  sequences += 1;
  maskable_tokens += seq.n_real >= 2 ? seq.n_real - 2u : 0u;
  for (const MaskedWord& w : masked.meta) {
    selected_words += 1;
    uint64_t len = w.span.end - w.span.start;
    selected_tokens += len;
    action_words[static_cast<size_t>(w.action)] += 1;
    action_tokens[static_cast<size_t>(w.action)] += len;
  }
}

double MaskStats::masked_fraction() const {
  return maskable_tokens == 0
             ? 0.0
             : static_cast<double>(selected_tokens) / static_cast<double>(maskable_tokens);
}

double MaskStats::words_per_sequence() const {
  return sequences == 0 ? 0.0
                        : static_cast<double>(selected_words) / static_cast<double>(sequences);
}

nlohmann::json MaskStats::to_json() const {
  auto share = [&](uint64_t n) {
    return selected_words == 0 ? 0.0 : static_cast<double>(n) / static_cast<double>(selected_words);
  };
  return {
      {"sequences", sequences},
      {"maskable_tokens", maskable_tokens},
      {"selected_tokens", selected_tokens},
      {"selected_words", selected_words},
      {"masked_fraction", masked_fraction()},
      {"words_per_sequence", words_per_sequence()},
      {"action_histogram",
       {{"mask", {{"words", action_words[0]}, {"tokens", action_tokens[0]}, {"word_share", share(action_words[0])}}},
        {"random", {{"words", action_words[1]}, {"tokens", action_tokens[1]}, {"word_share", share(action_words[1])}}},
        {"keep", {{"words", action_words[2]}, {"tokens", action_tokens[2]}, {"word_share", share(action_words[2])}}}}},
  };
}

namespace {

template <typename T>
void write_pod(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_pod(std::ifstream& in, T& value) {
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
}

}  // namespace

void write_masked_file(const std::string& path, const std::vector<MaskedSequence>& batch,
                       uint32_t vocab_size, uint64_t seed, uint64_t epoch,
                       uint32_t ignore_sentinel) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    fail(ErrorCode::io, "cannot open masked batch file for writing: " + path);
  }
  out.write(kMaskedMagic, 4);
  write_pod(out, kMaskedFormatVersion);
  write_pod(out, vocab_size);
  write_pod(out, pack::kSequenceLength);
  write_pod(out, static_cast<uint64_t>(batch.size()));
  write_pod(out, seed);
  write_pod(out, epoch);
  write_pod(out, ignore_sentinel);
  for (const MaskedSequence& seq : batch) {
    out.write(reinterpret_cast<const char*>(seq.input_ids.data()),
              static_cast<std::streamsize>(seq.input_ids.size() * sizeof(uint32_t)));
    out.write(reinterpret_cast<const char*>(seq.labels.data()),
              static_cast<std::streamsize>(seq.labels.size() * sizeof(uint32_t)));
  }
  out.flush();
  if (!out) {
    fail(ErrorCode::io, "write failed: " + path);
  }
}

std::vector<MaskedSequence> read_masked_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorCode::io, "cannot open masked batch file: " + path);
  }
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMaskedMagic, 4) != 0) {
    fail(ErrorCode::format, path + ": bad magic, not a masked batch file");
  }
  uint32_t version = 0;
  uint32_t vocab_size = 0;
  uint32_t seqlen = 0;
  uint64_t count = 0;
  uint64_t seed = 0;
  uint64_t epoch = 0;
  uint32_t sentinel = 0;
  read_pod(in, version);
  read_pod(in, vocab_size);
  read_pod(in, seqlen);
  read_pod(in, count);
  read_pod(in, seed);
  read_pod(in, epoch);
  read_pod(in, sentinel);
  if (!in || version != kMaskedFormatVersion || seqlen != pack::kSequenceLength) {
    fail(ErrorCode::format, path + ": bad masked batch header");
  }
  std::vector<MaskedSequence> out(count);
  for (uint64_t i = 0; i < count; ++i) {
    out[i].input_ids.resize(pack::kSequenceLength);
    out[i].labels.resize(pack::kSequenceLength);
    in.read(reinterpret_cast<char*>(out[i].input_ids.data()),
            static_cast<std::streamsize>(pack::kSequenceLength * sizeof(uint32_t)));
    in.read(reinterpret_cast<char*>(out[i].labels.data()),
            static_cast<std::streamsize>(pack::kSequenceLength * sizeof(uint32_t)));
    if (!in) {
      fail(ErrorCode::corrupt, path + ": truncated at row " + std::to_string(i));
    }
  }
  return out;
}

}  // namespace mlmkit::mask
