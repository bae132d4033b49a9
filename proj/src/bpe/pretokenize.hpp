#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace mlmkit::bpe {

inline constexpr const char* kPretokenizerId = "gpt2";

enum class CharClass : uint8_t { space, letter, digit, other };

CharClass classify_codepoint(uint32_t cp);

// Splits text into pretokenization units: contractions, optionally
// space-prefixed letter/digit/other runs, and whitespace runs where the
// final space is carried into the following unit. Views into the input;
// concatenating them reproduces the input bytes.
std::vector<std::string_view> pretokenize(std::string_view text);

}  // namespace mlmkit::bpe
