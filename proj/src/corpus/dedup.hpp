#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "corpus/document.hpp"
#include "util/hash.hpp"

namespace mlmkit::corpus {

struct DedupCounts {
  uint64_t kept = 0;
  uint64_t dropped = 0;
};

// Trim plus collapse of internal ASCII whitespace runs; no case folding.
std::string normalize_for_hash(std::string_view text);

// Keeps the first occurrence of each normalized-content hash, order
// otherwise preserved.
class Deduper {
 public:
  bool keep(std::string_view text);

  const DedupCounts& counts() const { return counts_; }

 private:
  std::unordered_set<Hash128, Hash128Hasher> seen_;
  DedupCounts counts_;
};

std::vector<DocumentRecord> dedup_records(const std::vector<DocumentRecord>& docs,
                                          DedupCounts* counts = nullptr);

// Streams the files into out_path, copying the raw line bytes of kept
// documents.
DedupCounts dedup_jsonl(const std::vector<std::string>& paths, const std::string& source,
                        const std::string& out_path);

}  // namespace mlmkit::corpus
