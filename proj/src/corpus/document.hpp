#pragma once

#include <cstdint>
#include <string>

namespace mlmkit::corpus {

struct DocumentRecord {
  std::string id;
  std::string source;
  std::string text;

  bool operator==(const DocumentRecord&) const = default;
};

struct CorpusStats {
  uint64_t documents = 0;
  uint64_t bytes = 0;

  void add_text_bytes(uint64_t n) {
    documents += 1;
    bytes += n;
  }

  void merge(const CorpusStats& other) {
    documents += other.documents;
    bytes += other.bytes;
  }

  double mean_doc_len() const {
    return documents == 0 ? 0.0 : static_cast<double>(bytes) / static_cast<double>(documents);
  }
};

}  // namespace mlmkit::corpus
