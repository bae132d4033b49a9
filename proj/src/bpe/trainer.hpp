#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "bpe/model.hpp"

namespace mlmkit::bpe {

// Pulls one document text per call; returns false when exhausted.
using TextSource = std::function<bool(std::string&)>;

// Learns merges by iterated most-frequent-pair selection over the unique
// pretokenization units of the stream; ties break on the lexicographically
// smallest (left, right) symbol pair. Deterministic for a fixed stream.
TokenizerModel train_bpe(const TextSource& source, uint32_t vocab_size);

}  // namespace mlmkit::bpe
