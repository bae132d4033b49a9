#include "bpe/pretokenize.hpp"

#include <algorithm>

#include "bpe/byte_map.hpp"

namespace mlmkit::bpe {

namespace {

struct Range {
  uint32_t first;
  uint32_t last;
};

bool in_ranges(uint32_t cp, const Range* ranges, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    if (cp >= ranges[i].first && cp <= ranges[i].last) return true;
  }
  return false;
}

constexpr Range kSpaceRanges[] = {
    {0x09, 0x0D},     {0x1C, 0x1F},     {0x20, 0x20},   {0x85, 0x85},
    {0xA0, 0xA0},     {0x1680, 0x1680}, {0x2000, 0x200A}, {0x2028, 0x2029},
    {0x202F, 0x202F}, {0x205F, 0x205F}, {0x3000, 0x3000},
};

constexpr Range kDigitRanges[] = {
    {0x30, 0x39},     {0xB2, 0xB3},     {0xB9, 0xB9},     {0xBC, 0xBE},
    {0x660, 0x669},   {0x6F0, 0x6F9},   {0x966, 0x96F},   {0x9E6, 0x9EF},
    {0xA66, 0xA6F},   {0xAE6, 0xAEF},   {0xB66, 0xB6F},   {0xBE6, 0xBEF},
    {0xC66, 0xC6F},   {0xCE6, 0xCEF},   {0xD66, 0xD6F},   {0xE50, 0xE59},
    {0xED0, 0xED9},   {0xF20, 0xF29},   {0x1040, 0x1049}, {0x2070, 0x2070},
    {0x2074, 0x2079}, {0x2080, 0x2089}, {0x2150, 0x2182}, {0x2185, 0x2189},
    {0xFF10, 0xFF19},
};

// Exact for the Latin blocks; block-level approximation beyond (with the
// common punctuation carved out), which only affects how exotic scripts
// split, never byte fidelity.
constexpr Range kLetterRanges[] = {
    {0x41, 0x5A},     {0x61, 0x7A},     {0xAA, 0xAA},     {0xB5, 0xB5},
    {0xBA, 0xBA},     {0xC0, 0xD6},     {0xD8, 0xF6},     {0xF8, 0x2C1},
    {0x2C6, 0x2D1},   {0x2E0, 0x2E4},   {0x370, 0x373},   {0x376, 0x377},
    {0x37A, 0x37D},   {0x37F, 0x37F},   {0x386, 0x386},   {0x388, 0x3F5},
    {0x3F7, 0x481},   {0x48A, 0x52F},   {0x531, 0x556},   {0x561, 0x587},
    {0x5D0, 0x5EA},   {0x620, 0x64A},   {0x671, 0x6D3},   {0x6FA, 0x6FC},
    {0x710, 0x72F},   {0x750, 0x77F},   {0x900, 0x963},   {0x971, 0x97F},
    {0x985, 0x9B9},   {0x1E00, 0x1FBC}, {0x1FC2, 0x1FCC}, {0x1FD0, 0x1FDB},
    {0x1FE0, 0x1FEC}, {0x1FF2, 0x1FFC}, {0x2C00, 0x2DFF}, {0x3005, 0x3007},
    {0x3041, 0x3096}, {0x30A1, 0x30FA}, {0x30FC, 0x30FF}, {0x3105, 0x312F},
    {0x3131, 0x318E}, {0x3400, 0x4DBF}, {0x4E00, 0x9FFF}, {0xA000, 0xA48C},
    {0xAC00, 0xD7A3}, {0xF900, 0xFAD9}, {0xFB00, 0xFB06}, {0xFB13, 0xFB17},
    {0xFE70, 0xFEFC}, {0xFF21, 0xFF3A}, {0xFF41, 0xFF5A}, {0xFF66, 0xFFDC},
    {0x10000, 0x16FFF}, {0x20000, 0x3FFFF},
};

struct Cp {
  uint32_t value;
  uint32_t offset;
  CharClass cls;
};

}  // namespace

CharClass classify_codepoint(uint32_t cp) {
  if (in_ranges(cp, kSpaceRanges, std::size(kSpaceRanges))) return CharClass::space;
  if (in_ranges(cp, kDigitRanges, std::size(kDigitRanges))) return CharClass::digit;
  if (in_ranges(cp, kLetterRanges, std::size(kLetterRanges))) return CharClass::letter;
  return CharClass::other;
}

std::vector<std::string_view> pretokenize(std::string_view text) {
  std::vector<Cp> cps;
  cps.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    uint32_t off = static_cast<uint32_t>(i);
    uint32_t cp = next_codepoint(text, i);
    cps.push_back(Cp{cp, off, classify_codepoint(cp)});
  }
  const size_t n = cps.size();
  const uint32_t end_off = static_cast<uint32_t>(text.size());
  auto offset_at = [&](size_t k) { return k < n ? cps[k].offset : end_off; };
  auto piece = [&](size_t from, size_t to) {
    return text.substr(offset_at(from), offset_at(to) - offset_at(from));
  };

  std::vector<std::string_view> out;
  size_t k = 0;
  while (k < n) {
    // contractions: 's 't 're 've 'm 'll 'd (lowercase, as in the
    // original pattern)
    if (cps[k].value == '\'' && k + 1 < n) {
      uint32_t c1 = cps[k + 1].value;
      uint32_t c2 = k + 2 < n ? cps[k + 2].value : 0;
      size_t len = 0;
      if (c1 == 's' || c1 == 't' || c1 == 'm' || c1 == 'd') len = 2;
      if ((c1 == 'r' && c2 == 'e') || (c1 == 'v' && c2 == 'e') || (c1 == 'l' && c2 == 'l')) {
        len = 3;
      }
      if (len > 0) {
        // ordered alternation: the contraction wins even when more
        // letters follow
        out.push_back(piece(k, k + len));
        k += len;
        continue;
      }
    }

    // " ?<class run>" for letter / digit / other
    bool matched = false;
    for (CharClass cls : {CharClass::letter, CharClass::digit, CharClass::other}) {
      size_t j = k;
      if (cps[j].value == ' ' && j + 1 < n && cps[j + 1].cls == cls) {
        ++j;
      }
      if (cps[j].cls != cls) continue;
      size_t end = j;
      while (end < n && cps[end].cls == cls) ++end;
      out.push_back(piece(k, end));
      k = end;
      matched = true;
      break;
    }
    if (matched) continue;

    // whitespace: the run keeps all but its last char when a non-space
    // follows, so that char can attach to the next unit
    size_t end = k;
    while (end < n && cps[end].cls == CharClass::space) ++end;
    if (end == n) {
      out.push_back(piece(k, end));
      k = end;
    } else if (end - k > 1) {
      out.push_back(piece(k, end - 1));
      k = end - 1;
    } else {
      out.push_back(piece(k, end));
      k = end;
    }
  }
  return out;
}

}  // namespace mlmkit::bpe
