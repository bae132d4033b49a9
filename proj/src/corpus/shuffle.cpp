#include "corpus/shuffle.hpp"

#include <filesystem>
#include <fstream>
#include <numeric>

#include "corpus/jsonl.hpp"
#include "util/error.hpp"
#include "util/fs.hpp"
#include "util/hash.hpp"
#include "util/rng.hpp"

namespace mlmkit::corpus {

namespace fs = std::filesystem;

size_t shuffle_bucket(std::string_view source, std::string_view id, uint64_t seed) {
  std::string key;
  key.reserve(source.size() + id.size() + 1);
  key.append(source);
  key.push_back('\x1f');
  key.append(id);
  return static_cast<size_t>(murmur3_128(key, seed).lo % kShuffleBuckets);
}

std::vector<size_t> shuffle_order(const std::vector<DocumentRecord>& docs, uint64_t seed) {
  std::vector<std::vector<size_t>> buckets(kShuffleBuckets);
  for (size_t i = 0; i < docs.size(); ++i) {
    buckets[shuffle_bucket(docs[i].source, docs[i].id, seed)].push_back(i);
  }
  std::vector<size_t> order;
  order.reserve(docs.size());
  for (size_t b = 0; b < kShuffleBuckets; ++b) {
    Xoshiro256ss rng(mix_seed(seed, b, 0));
    fisher_yates(buckets[b], rng);
    order.insert(order.end(), buckets[b].begin(), buckets[b].end());
  }
  return order;
}

std::vector<DocumentRecord> shuffle_records(const std::vector<DocumentRecord>& docs,
                                            uint64_t seed) {
  std::vector<DocumentRecord> out;
  out.reserve(docs.size());
  for (size_t i : shuffle_order(docs, seed)) {
    out.push_back(docs[i]);
  }
  return out;
}

uint64_t shuffle_jsonl(const std::vector<std::pair<std::string, std::string>>& path_sources,
                       uint64_t seed, const std::string& out_path, const std::string& tmp_dir) {
  ensure_dir(tmp_dir);

  std::vector<fs::path> bucket_paths(kShuffleBuckets);
  {
    std::vector<std::ofstream> bucket_files(kShuffleBuckets);
    for (size_t b = 0; b < kShuffleBuckets; ++b) {
      bucket_paths[b] = fs::path(tmp_dir) / ("bucket-" + std::to_string(b) + ".jsonl");
      bucket_files[b].open(bucket_paths[b], std::ios::binary | std::ios::trunc);
      if (!bucket_files[b]) {
        fail(ErrorCode::io, "cannot open shuffle bucket: " + bucket_paths[b].string());
      }
    }
    for (const auto& [path, source] : path_sources) {
      JsonlReader reader(path, source);
      JsonlDocument doc;
      while (reader.next(doc)) {
        size_t b = shuffle_bucket(doc.rec.source, doc.rec.id, seed);
        append_jsonl_line(bucket_files[b], doc.raw);
      }
    }
  }

  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    fail(ErrorCode::io, "cannot open output file: " + out_path);
  }
  uint64_t total = 0;
  for (size_t b = 0; b < kShuffleBuckets; ++b) {
    std::vector<std::string> lines;
    {
      std::ifstream in(bucket_paths[b], std::ios::binary);
      std::string line;
      while (std::getline(in, line)) {
        if (!line.empty()) lines.push_back(std::move(line));
      }
    }
    Xoshiro256ss rng(mix_seed(seed, b, 0));
    fisher_yates(lines, rng);
    for (const std::string& line : lines) {
      append_jsonl_line(out, line);
    }
    total += lines.size();
    std::error_code ec;
    fs::remove(bucket_paths[b], ec);
  }
  out.flush();
  if (!out) {
    fail(ErrorCode::io, "write failed: " + out_path);
  }
  return total;
}

}  // namespace mlmkit::corpus
