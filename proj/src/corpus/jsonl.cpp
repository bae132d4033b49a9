#include "corpus/jsonl.hpp"

#include <memory>

#include "json.hpp"
#include "util/error.hpp"

namespace mlmkit::corpus {

namespace {

bool is_blank(const std::string& line) {
  for (char c : line) {
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

bool all_whitespace(const std::string& text) {
  for (char c : text) {
    switch (c) {
      case ' ': case '\t': case '\n': case '\r': case '\f': case '\v':
        continue;
      default:
        return false;
    }
  }
  return true;
}

}  // namespace

JsonlReader::JsonlReader(std::string path, std::string default_source)
    : path_(std::move(path)), default_source_(std::move(default_source)), in_(path_) {
  if (!in_) {
    fail(ErrorCode::io, "cannot open documents file: " + path_);
  }
}

bool JsonlReader::next(JsonlDocument& out) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (is_blank(line)) continue;
    const std::string where = path_ + ":" + std::to_string(line_no_);
    std::string parse_input = line;
    if (!parse_input.empty() && parse_input.back() == '\r') parse_input.pop_back();
    nlohmann::json j = nlohmann::json::parse(parse_input, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      fail(ErrorCode::parse, where + ": not a JSON object");
    }
    if (!j.contains("id") || !j.at("id").is_string()) {
      fail(ErrorCode::parse, where + ": missing string field \"id\"");
    }
    if (!j.contains("text") || !j.at("text").is_string()) {
      fail(ErrorCode::parse, where + ": missing string field \"text\"");
    }
    out.rec.id = j.at("id").get<std::string>();
    out.rec.text = j.at("text").get<std::string>();
    out.rec.source = j.contains("source") && j.at("source").is_string()
                         ? j.at("source").get<std::string>()
                         : default_source_;
    if (all_whitespace(out.rec.text)) {
      fail(ErrorCode::input, where + ": text is empty after whitespace trim");
    }
    out.raw = std::move(parse_input);
    out.line_no = line_no_;
    return true;
  }
  if (in_.bad()) {
    fail(ErrorCode::io, "read failed: " + path_);
  }
  return false;
}

JsonlChain::JsonlChain(std::vector<std::string> paths, std::string default_source)
    : paths_(std::move(paths)), default_source_(std::move(default_source)) {}

bool JsonlChain::next(JsonlDocument& out) {
  while (true) {
    if (!current_) {
      if (index_ >= paths_.size()) return false;
      current_ = std::make_unique<JsonlReader>(paths_[index_++], default_source_);
    }
    if (current_->next(out)) return true;
    current_.reset();
  }
}

void append_jsonl_line(std::ofstream& out, const std::string& raw) {
  out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
  out.put('\n');
}

std::string document_to_json_line(const DocumentRecord& rec) {
  nlohmann::json j;
  j["id"] = rec.id;
  j["source"] = rec.source;
  j["text"] = rec.text;
  return j.dump();
}

}  // namespace mlmkit::corpus
