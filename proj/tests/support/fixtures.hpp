#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "corpus/document.hpp"
#include "pack/packer.hpp"
#include "util/rng.hpp"

namespace testing_support {

// Deterministic German-looking text from a small word pool; keeps the
// encoder cache hot on large fixtures.
inline std::string synthetic_text(mlmkit::Xoshiro256ss& rng, size_t n_sentences) {
  static const std::vector<std::string> words = {
      "der",     "die",      "das",     "und",     "nicht",   "mit",     "ein",
      "eine",    "Haus",     "Stadt",   "Land",    "Wasser",  "Zeit",    "Jahr",
      "Mensch",  "Kinder",   "Straße",  "Müller",  "Bäcker",  "König",   "schön",
      "groß",    "klein",    "alt",     "neu",     "schnell", "langsam", "gut",
      "Sprache", "Wort",     "Satz",    "Text",    "Daten",   "Modell",  "Zug",
      "Berg",    "Fluss",    "Wald",    "Himmel",  "Sonne",   "Mond",    "Sterne",
      "heute",   "morgen",   "gestern", "immer",   "nie",     "oft",     "selten",
      "Bericht", "Vertrag",  "Gesetz",  "Antrag",  "Anlage",  "Nummer",  "über",
  };
  std::string out;
  for (size_t s = 0; s < n_sentences; ++s) {
    size_t n_words = 4 + rng.below(9);
    for (size_t w = 0; w < n_words; ++w) {
      std::string word = words[rng.below(words.size())];
      if (w == 0 && word[0] >= 'a' && word[0] <= 'z') {
        word[0] = static_cast<char>(word[0] - 'a' + 'A');
      }
      if (w > 0) out += ' ';
      out += word;
    }
    out += rng.below(10) == 0 ? "!" : ".";
    if (s + 1 < n_sentences) out += ' ';
  }
  return out;
}

inline std::vector<mlmkit::corpus::DocumentRecord> synthetic_documents(
    uint64_t seed, size_t n_docs, const std::string& source, size_t sentences_per_doc = 3) {
  mlmkit::Xoshiro256ss rng(seed);
  std::vector<mlmkit::corpus::DocumentRecord> docs;
  docs.reserve(n_docs);
  for (size_t i = 0; i < n_docs; ++i) {
    mlmkit::corpus::DocumentRecord rec;
    rec.id = source + "-" + std::to_string(i);
    rec.source = source;
    rec.text = synthetic_text(rng, 1 + rng.below(sentences_per_doc));
    docs.push_back(std::move(rec));
  }
  return docs;
}

// Hand-built packed sequence: word lengths fill the payload in order;
// remaining positions are pad.
inline mlmkit::pack::PackedSequence make_sequence(const std::vector<uint16_t>& word_lengths,
                                                  uint32_t bos = 0, uint32_t eos = 1,
                                                  uint32_t pad = 2, uint32_t payload_id = 100) {
  using mlmkit::pack::kSequenceLength;
  mlmkit::pack::PackedSequence seq;
  seq.ids.assign(kSequenceLength, pad);
  seq.word_start.assign(kSequenceLength, 0);
  size_t pos = 1;
  seq.ids[0] = bos;
  for (uint16_t len : word_lengths) {
    for (uint16_t k = 0; k < len; ++k) {
      seq.ids[pos] = payload_id + static_cast<uint32_t>(pos);
      seq.word_start[pos] = k == 0 ? 1 : 0;
      ++pos;
    }
  }
  seq.ids[pos] = eos;
  seq.n_real = static_cast<uint16_t>(pos + 1);
  return seq;
}

// A batch of full sequences whose word lengths cycle 1,2,3 — realistic
// subword shapes for masking statistics.
inline std::vector<mlmkit::pack::PackedSequence> make_mask_fixture(size_t n_sequences) {
  using mlmkit::pack::kPayloadLength;
  std::vector<mlmkit::pack::PackedSequence> seqs;
  seqs.reserve(n_sequences);
  for (size_t s = 0; s < n_sequences; ++s) {
    std::vector<uint16_t> lengths;
    size_t filled = 0;
    uint16_t next = static_cast<uint16_t>(1 + (s % 3));
    while (filled < kPayloadLength) {
      uint16_t len = static_cast<uint16_t>(
          std::min<size_t>(next, kPayloadLength - filled));
      lengths.push_back(len);
      filled += len;
      next = static_cast<uint16_t>(next % 3 + 1);
    }
    seqs.push_back(make_sequence(lengths));
  }
  return seqs;
}

}  // namespace testing_support
