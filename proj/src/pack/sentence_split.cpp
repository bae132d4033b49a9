#include "pack/sentence_split.hpp"

#include <unordered_set>

#include "bpe/byte_map.hpp"
#include "bpe/pretokenize.hpp"

namespace mlmkit::pack {

namespace {

using bpe::CharClass;
using bpe::classify_codepoint;
using bpe::next_codepoint;

const std::unordered_set<std::string>& abbreviations() {
  static const std::unordered_set<std::string> set = {
      "Dr.",   "Prof.", "Dipl.", "Ing.",  "Med.",  "Mag.",  "Hr.",   "Fr.",
      "Frl.",  "Nr.",   "Bd.",   "S.",    "St.",   "Str.",  "Tel.",  "Abs.",
      "Abb.",  "Abt.",  "Anm.",  "Art.",  "Aufl.", "Bsp.",  "bspw.", "bzw.",
      "bzgl.", "ca.",   "d.h.",  "dgl.",  "ebd.",  "etc.",  "evtl.", "geb.",
      "gem.",  "ggf.",  "ggfs.", "Hrsg.", "i.d.R.", "inkl.", "insb.", "Jh.",
      "Jhd.",  "Kap.",  "lt.",   "Mio.",  "Mrd.",  "Tsd.",  "max.",  "min.",
      "Mo.",   "Di.",   "Mi.",   "Do.",   "Sa.",   "So.",   "Jan.",  "Feb.",
      "Mrz.",  "Apr.",  "Jun.",  "Jul.",  "Aug.",  "Sep.",  "Sept.", "Okt.",
      "Nov.",  "Dez.",  "o.ä.",  "p.a.",  "resp.", "s.o.",  "s.u.",  "sog.",
      "u.a.",  "u.ä.",  "u.U.",  "usw.",  "u.v.m.", "v.a.", "vgl.",  "vs.",
      "z.B.",  "z.T.",  "zzgl.", "Ges.",  "mbH.",  "jr.",   "sen.",
  };
  return set;
}

bool is_terminator(uint32_t cp) {
  return cp == '.' || cp == '!' || cp == '?' || cp == 0x2026;  // …
}

bool is_closer(uint32_t cp) {
  switch (cp) {
    case '"': case '\'': case ')': case ']':
    case 0x00BB: case 0x00AB:              // » «
    case 0x201C: case 0x201D: case 0x2018: case 0x2019:  // “ ” ‘ ’
    case 0x2039: case 0x203A:              // ‹ ›
      return true;
    default:
      return false;
  }
}

bool is_opener(uint32_t cp) {
  switch (cp) {
    case '"': case '\'': case '(': case '[':
    case 0x00AB: case 0x00BB:
    case 0x201E: case 0x201C: case 0x2018: case 0x201A:  // „ “ ‘ ‚
    case 0x2039: case 0x203A:
    case 0x2013: case 0x2014:              // – —
      return true;
    default:
      return false;
  }
}

bool starts_sentence(uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return true;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return true;  // Latin-1 uppercase
  if (cp >= 0x100 && cp <= 0x17F) return true;              // Latin Extended-A
  if (classify_codepoint(cp) == CharClass::digit) return true;
  return is_opener(cp);
}

struct Cp {
  uint32_t value;
  uint32_t offset;
};

// The whitespace-delimited token ending at (and including) the '.' at
// codepoint index k.
std::string token_before(const std::vector<Cp>& cps, std::string_view text, size_t k) {
  size_t begin = k;
  while (begin > 0 && classify_codepoint(cps[begin - 1].value) != CharClass::space) {
    --begin;
  }
  size_t end_off = k + 1 < cps.size() ? cps[k + 1].offset : text.size();
  return std::string(text.substr(cps[begin].offset, end_off - cps[begin].offset));
}

bool all_digits(std::string_view token) {
  if (token.empty()) return false;
  for (char c : token) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

std::string Segmentation::reconstruct() const {
  std::string out;
  for (const Sentence& s : sentences) {
    out += s.lead;
    out += s.text;
  }
  out += tail;
  return out;
}

Segmentation segment_sentences(std::string_view text) {
  std::vector<Cp> cps;
  cps.reserve(text.size());
  {
    size_t i = 0;
    while (i < text.size()) {
      uint32_t off = static_cast<uint32_t>(i);
      cps.push_back(Cp{next_codepoint(text, i), off});
    }
  }
  const size_t n = cps.size();
  auto offset_at = [&](size_t k) {
    return k < n ? static_cast<size_t>(cps[k].offset) : text.size();
  };

  Segmentation seg;
  size_t cursor = 0;  // codepoint index where the pending sentence (incl. lead) begins

  auto emit = [&](size_t end_k) {
    // split [cursor, end_k) into lead whitespace + text
    size_t body = cursor;
    while (body < end_k && classify_codepoint(cps[body].value) == CharClass::space) {
      ++body;
    }
    if (body == end_k) {
      return;  // pure whitespace, keep accumulating into the next lead
    }
    Sentence s;
    s.lead = std::string(text.substr(offset_at(cursor), offset_at(body) - offset_at(cursor)));
    s.text = std::string(text.substr(offset_at(body), offset_at(end_k) - offset_at(body)));
    seg.sentences.push_back(std::move(s));
    cursor = end_k;
  };

  size_t k = 0;
  while (k < n) {
    if (!is_terminator(cps[k].value)) {
      ++k;
      continue;
    }
    // extend over a terminator run ("..."/"?!")
    bool has_dot = false;
    size_t run_end = k;
    while (run_end < n && is_terminator(cps[run_end].value)) {
      has_dot = has_dot || cps[run_end].value == '.';
      ++run_end;
    }
    size_t after = run_end;
    while (after < n && is_closer(cps[after].value)) ++after;

    // look ahead over whitespace to the next sentence candidate
    size_t next = after;
    while (next < n && classify_codepoint(cps[next].value) == CharClass::space) ++next;

    bool split = false;
    if (next == n) {
      split = after == n;  // trailing punctuation closes the last sentence
    } else if (next > after && starts_sentence(cps[next].value)) {
      split = true;
    }
    if (split && has_dot && run_end == k + 1) {
      // single '.' gets the abbreviation and number guards
      std::string token = token_before(cps, text, k);
      if (abbreviations().contains(token)) {
        split = false;
      } else if (token.size() >= 2 && all_digits(std::string_view(token).substr(0, token.size() - 1))) {
        split = false;
      } else {
        // single capital initial, e.g. "A."
        size_t ti = 0;
        uint32_t first = next_codepoint(token, ti);
        if (ti == token.size() - 1 && token.back() == '.' &&
            ((first >= 'A' && first <= 'Z') || (first >= 0xC0 && first <= 0xDE && first != 0xD7))) {
          split = false;
        }
      }
    }

    if (split) {
      emit(after);
      k = after;
    } else {
      k = run_end;
    }
  }
  // remainder: trailing text becomes a sentence, trailing whitespace the tail
  size_t body = cursor;
  size_t last_non_space = n;
  for (size_t i = n; i > body; --i) {
    if (classify_codepoint(cps[i - 1].value) != CharClass::space) {
      last_non_space = i;
      break;
    }
    last_non_space = i - 1;
  }
  if (last_non_space > body) {
    emit(last_non_space);
  }
  seg.tail = std::string(text.substr(offset_at(cursor)));
  return seg;
}

std::vector<std::string> split_sentences(std::string_view text) {
  Segmentation seg = segment_sentences(text);
  std::vector<std::string> out;
  out.reserve(seg.sentences.size());
  for (auto& s : seg.sentences) {
    out.push_back(std::move(s.text));
  }
  return out;
}

}  // namespace mlmkit::pack
