#include "corpus/dedup.hpp"

#include <fstream>

#include "corpus/jsonl.hpp"
#include "util/error.hpp"

namespace mlmkit::corpus {

namespace {

constexpr uint64_t kDedupHashSeed = 0x6d6c6d6b64647570ULL;

bool is_ascii_ws(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

std::string normalize_for_hash(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  size_t i = 0;
  size_t end = text.size();
  while (i < end && is_ascii_ws(text[i])) ++i;
  while (end > i && is_ascii_ws(text[end - 1])) --end;
  bool in_run = false;
  for (; i < end; ++i) {
    if (is_ascii_ws(text[i])) {
      in_run = true;
      continue;
    }
    if (in_run) {
      out.push_back(' ');
      in_run = false;
    }
    out.push_back(text[i]);
  }
  return out;
}

bool Deduper::keep(std::string_view text) {
  Hash128 h = murmur3_128(normalize_for_hash(text), kDedupHashSeed);
  if (seen_.insert(h).second) {
    counts_.kept += 1;
    return true;
  }
  counts_.dropped += 1;
  return false;
}

std::vector<DocumentRecord> dedup_records(const std::vector<DocumentRecord>& docs,
                                          DedupCounts* counts) {
  Deduper dedupe;
  std::vector<DocumentRecord> kept;
  for (const DocumentRecord& doc : docs) {
    if (dedupe.keep(doc.text)) {
      kept.push_back(doc);
    }
  }
  if (counts) *counts = dedupe.counts();
  return kept;
}

DedupCounts dedup_jsonl(const std::vector<std::string>& paths, const std::string& source,
                        const std::string& out_path) {
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    fail(ErrorCode::io, "cannot open output file: " + out_path);
  }
  Deduper dedupe;
  JsonlChain chain(paths, source);
  JsonlDocument doc;
  while (chain.next(doc)) {
    if (dedupe.keep(doc.rec.text)) {
      append_jsonl_line(out, doc.raw);
    }
  }
  out.flush();
  if (!out) {
    fail(ErrorCode::io, "write failed: " + out_path);
  }
  return dedupe.counts();
}

}  // namespace mlmkit::corpus
