#pragma once

#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "corpus/document.hpp"

namespace mlmkit::corpus {

struct JsonlDocument {
  DocumentRecord rec;
  std::string raw;  // original line bytes, used when copying lines through
  uint64_t line_no = 0;
};

// One {"id","source","text"} object per line. "source" falls back to the
// supplied default. Blank lines are skipped; anything else malformed is a
// parse error naming file and line.
class JsonlReader {
 public:
  JsonlReader(std::string path, std::string default_source);

  bool next(JsonlDocument& out);

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::string default_source_;
  std::ifstream in_;
  uint64_t line_no_ = 0;
};

// Reads several files in order as one stream.
class JsonlChain {
 public:
  JsonlChain(std::vector<std::string> paths, std::string default_source);

  bool next(JsonlDocument& out);

 private:
  std::vector<std::string> paths_;
  std::string default_source_;
  size_t index_ = 0;
  std::unique_ptr<JsonlReader> current_;
};

void append_jsonl_line(std::ofstream& out, const std::string& raw);

std::string document_to_json_line(const DocumentRecord& rec);

}  // namespace mlmkit::corpus
