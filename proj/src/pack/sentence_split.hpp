#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mlmkit::pack {

struct Sentence {
  std::string lead;  // whitespace between the previous sentence and this one
  std::string text;  // never empty, never pure whitespace
};

struct Segmentation {
  std::vector<Sentence> sentences;
  std::string tail;  // trailing whitespace after the last sentence

  std::string reconstruct() const;
};

// Rule-based splitter: terminator characters with a German abbreviation
// list, numeric-token and lowercase-continuation guards.
Segmentation segment_sentences(std::string_view text);

std::vector<std::string> split_sentences(std::string_view text);

}  // namespace mlmkit::pack
