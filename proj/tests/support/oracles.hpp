#pragma once

// Independent reference implementations used only by tests. They follow
// the definitions directly (full recounts, set semantics) and stay free of
// the production code paths they check.

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bpe/byte_map.hpp"
#include "bpe/pretokenize.hpp"
#include "metrics/eval.hpp"

namespace testing_support {

// Brute-force BPE: recounts every adjacent pair from scratch each
// iteration over std::map (sorted keys), picks the max count with the
// lexicographically smallest (left, right) tie-break.
inline std::vector<std::pair<std::string, std::string>> brute_force_bpe_merges(
    const std::vector<std::string>& documents, size_t max_merges) {
  std::map<std::vector<std::string>, uint64_t> pieces;
  for (const std::string& doc : documents) {
    for (auto unit : mlmkit::bpe::pretokenize(doc)) {
      std::vector<std::string> symbols;
      for (unsigned char b : std::string(unit)) {
        symbols.push_back(mlmkit::bpe::byte_to_unicode()[b]);
      }
      pieces[symbols] += 1;
    }
  }

  std::vector<std::pair<std::string, std::string>> merges;
  while (merges.size() < max_merges) {
    std::map<std::pair<std::string, std::string>, int64_t> counts;
    for (const auto& [symbols, freq] : pieces) {
      for (size_t i = 0; i + 1 < symbols.size(); ++i) {
        counts[{symbols[i], symbols[i + 1]}] += static_cast<int64_t>(freq);
      }
    }
    if (counts.empty()) break;
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it) {
      if (it->second > best->second) best = it;  // ties keep the smaller key
    }
    const auto [left, right] = best->first;
    merges.emplace_back(left, right);

    std::map<std::vector<std::string>, uint64_t> rewritten;
    for (const auto& [symbols, freq] : pieces) {
      std::vector<std::string> out;
      for (size_t i = 0; i < symbols.size();) {
        if (i + 1 < symbols.size() && symbols[i] == left && symbols[i + 1] == right) {
          out.push_back(left + right);
          i += 2;
        } else {
          out.push_back(symbols[i]);
          ++i;
        }
      }
      rewritten[out] += freq;
    }
    pieces = std::move(rewritten);
  }
  return merges;
}

// Applies a merge list in order (each merge replaces all occurrences
// left to right) to a single word's byte symbols.
inline std::vector<std::string> apply_merges_in_order(
    const std::string& word, const std::vector<std::pair<std::string, std::string>>& merges) {
  std::vector<std::string> symbols;
  for (unsigned char b : word) {
    symbols.push_back(mlmkit::bpe::byte_to_unicode()[b]);
  }
  for (const auto& [left, right] : merges) {
    std::vector<std::string> out;
    for (size_t i = 0; i < symbols.size();) {
      if (i + 1 < symbols.size() && symbols[i] == left && symbols[i + 1] == right) {
        out.push_back(left + right);
        i += 2;
      } else {
        out.push_back(symbols[i]);
        ++i;
      }
    }
    symbols = std::move(out);
  }
  return symbols;
}

// Multiset-intersection span F1 straight from the definition.
struct BruteF1 {
  double precision;
  double recall;
  double f1;
};

inline BruteF1 brute_force_span_f1(std::vector<mlmkit::metrics::Span> gold,
                                   std::vector<mlmkit::metrics::Span> pred) {
  if (gold.empty() && pred.empty()) {
    return {1.0, 1.0, 1.0};
  }
  std::sort(gold.begin(), gold.end());
  std::sort(pred.begin(), pred.end());
  std::vector<mlmkit::metrics::Span> matched;
  std::set_intersection(gold.begin(), gold.end(), pred.begin(), pred.end(),
                        std::back_inserter(matched));
  double tp = static_cast<double>(matched.size());
  double p = pred.empty() ? 0.0 : tp / static_cast<double>(pred.size());
  double r = gold.empty() ? 0.0 : tp / static_cast<double>(gold.size());
  double f1 = (p + r) > 0 ? 2 * p * r / (p + r) : 0.0;
  return {p, r, f1};
}

// Inverse of bio_to_spans for well-formed, non-overlapping span sets.
inline std::vector<std::string> spans_to_bio(const std::vector<mlmkit::metrics::Span>& spans,
                                             size_t length) {
  std::vector<std::string> tags(length, "O");
  for (const auto& span : spans) {
    tags[static_cast<size_t>(span.start)] = "B-" + span.label;
    for (int32_t i = span.start + 1; i < span.end; ++i) {
      tags[static_cast<size_t>(i)] = "I-" + span.label;
    }
  }
  return tags;
}

}  // namespace testing_support
