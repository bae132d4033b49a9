#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>

namespace mlmkit::bpe {

// Byte-level symbol alphabet: every byte maps to a printable codepoint,
// printable bytes to themselves, the rest to U+0100 + n in byte order.
const std::array<std::string, 256>& byte_to_unicode();
const std::unordered_map<uint32_t, uint8_t>& unicode_to_byte();

// Raw bytes -> symbol-space string (UTF-8 of the mapped codepoints).
std::string bytes_to_symbols(std::string_view raw);

// Symbol-space string -> raw bytes. Throws on codepoints outside the
// alphabet.
std::string symbols_to_bytes(std::string_view symbols);

std::string codepoint_to_utf8(uint32_t cp);

// Decodes the codepoint at byte offset i, advancing i. Total: an invalid
// byte is consumed alone and reported as 0x110000 + byte.
uint32_t next_codepoint(std::string_view s, size_t& i);

}  // namespace mlmkit::bpe
