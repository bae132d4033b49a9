#include "bpe/byte_map.hpp"

#include "util/error.hpp"

namespace mlmkit::bpe {

std::string codepoint_to_utf8(uint32_t cp) {
  std::string out;
  if (cp <= 0x7F) {
    out.push_back(static_cast<char>(cp));
  } else if (cp <= 0x7FF) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp <= 0xFFFF) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

uint32_t next_codepoint(std::string_view s, size_t& i) {
  const uint8_t b0 = static_cast<uint8_t>(s[i]);
  auto invalid = [&] {
    ++i;
    return 0x110000u + b0;
  };
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int extra;
  uint32_t cp;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
  } else {
    return invalid();
  }
  for (int k = 1; k <= extra; ++k) {
    if (i + static_cast<size_t>(k) >= s.size() ||
        (static_cast<uint8_t>(s[i + k]) & 0xC0) != 0x80) {
      return invalid();
    }
    cp = (cp << 6) | (static_cast<uint8_t>(s[i + k]) & 0x3F);
  }
  if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return invalid();
  }
  i += static_cast<size_t>(extra) + 1;
  return cp;
}

namespace {

bool is_self_mapped(int b) {
  return (b >= 33 && b <= 126) || (b >= 161 && b <= 172) || (b >= 174 && b <= 255);
}

}  // namespace

const std::array<std::string, 256>& byte_to_unicode() {
  static const std::array<std::string, 256> table = [] {
    std::array<std::string, 256> t;
    int n = 0;
    for (int b = 0; b < 256; ++b) {
      uint32_t cp = is_self_mapped(b) ? static_cast<uint32_t>(b)
                                      : static_cast<uint32_t>(256 + n++);
      t[static_cast<size_t>(b)] = codepoint_to_utf8(cp);
    }
    return t;
  }();
  return table;
}

const std::unordered_map<uint32_t, uint8_t>& unicode_to_byte() {
  static const std::unordered_map<uint32_t, uint8_t> table = [] {
    std::unordered_map<uint32_t, uint8_t> t;
    const auto& fwd = byte_to_unicode();
    for (int b = 0; b < 256; ++b) {
      size_t i = 0;
      uint32_t cp = next_codepoint(fwd[static_cast<size_t>(b)], i);
      t.emplace(cp, static_cast<uint8_t>(b));
    }
    return t;
  }();
  return table;
}

std::string bytes_to_symbols(std::string_view raw) {
  const auto& fwd = byte_to_unicode();
  std::string out;
  out.reserve(raw.size() * 2);
  for (unsigned char b : raw) {
    out += fwd[b];
  }
  return out;
}

std::string symbols_to_bytes(std::string_view symbols) {
  const auto& back = unicode_to_byte();
  std::string out;
  out.reserve(symbols.size());
  size_t i = 0;
  while (i < symbols.size()) {
    uint32_t cp = next_codepoint(symbols, i);
    auto it = back.find(cp);
    if (it == back.end()) {
      fail(ErrorCode::input, "codepoint outside the byte alphabet: U+" + std::to_string(cp));
    }
    out.push_back(static_cast<char>(it->second));
  }
  return out;
}

}  // namespace mlmkit::bpe
