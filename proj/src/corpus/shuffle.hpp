#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "corpus/document.hpp"

namespace mlmkit::corpus {

inline constexpr size_t kShuffleBuckets = 256;

// Bucket assignment keyed on (seed, source, id); permutation within a
// bucket comes from a per-bucket generator. The file path below applies
// the same math, so both orderings are identical for the same stream.
size_t shuffle_bucket(std::string_view source, std::string_view id, uint64_t seed);

std::vector<size_t> shuffle_order(const std::vector<DocumentRecord>& docs, uint64_t seed);

std::vector<DocumentRecord> shuffle_records(const std::vector<DocumentRecord>& docs,
                                            uint64_t seed);

// External-memory shuffle: lines are partitioned into bucket files under
// tmp_dir, then each bucket is permuted in memory and appended to
// out_path.
uint64_t shuffle_jsonl(const std::vector<std::pair<std::string, std::string>>& path_sources,
                       uint64_t seed, const std::string& out_path, const std::string& tmp_dir);

}  // namespace mlmkit::corpus
