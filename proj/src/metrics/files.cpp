#include "metrics/files.hpp"

#include <fstream>
#include <sstream>

#include "util/error.hpp"

namespace mlmkit::metrics {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream ss(line);
  std::string field;
  while (ss >> field) fields.push_back(field);
  return fields;
}

std::ifstream open_or_fail(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorCode::io, "cannot open file: " + path);
  }
  return in;
}

Span span_from_json(const nlohmann::json& j, int32_t sentence, const std::string& path) {
  if (!j.is_object() || !j.contains("start") || !j.contains("end") || !j.contains("label")) {
    fail(ErrorCode::parse, path + ": span objects need start, end, label");
  }
  Span s;
  s.sentence = j.value("sentence", sentence);
  s.start = j.at("start").get<int32_t>();
  s.end = j.at("end").get<int32_t>();
  s.label = j.at("label").get<std::string>();
  s.level = level_from_name(j.value("level", "outer"));
  return s;
}

}  // namespace

ConllSentences read_conll(const std::string& path) {
  std::ifstream in = open_or_fail(path);
  ConllSentences out;
  std::vector<std::string> gold_sentence;
  std::vector<std::string> pred_sentence;
  int columns = 0;
  std::string line;
  uint64_t line_no = 0;

  auto flush = [&] {
    if (!gold_sentence.empty()) {
      out.gold.push_back(std::move(gold_sentence));
      gold_sentence.clear();
      if (columns == 3) {
        out.pred.push_back(std::move(pred_sentence));
        pred_sentence.clear();
      }
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_ws(line);
    if (fields.empty()) {
      flush();
      continue;
    }
    if (columns == 0) {
      if (fields.size() != 2 && fields.size() != 3) {
        fail(ErrorCode::parse, path + ":" + std::to_string(line_no) +
                                   ": expected 2 or 3 columns, got " +
                                   std::to_string(fields.size()));
      }
      columns = static_cast<int>(fields.size());
    } else if (static_cast<int>(fields.size()) != columns) {
      fail(ErrorCode::parse, path + ":" + std::to_string(line_no) +
                                 ": inconsistent column count");
    }
    gold_sentence.push_back(fields[1]);
    if (columns == 3) pred_sentence.push_back(fields[2]);
  }
  flush();
  return out;
}

std::vector<Span> read_span_json(const std::string& path) {
  std::ifstream in = open_or_fail(path);
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) {
    fail(ErrorCode::parse, path + ": invalid JSON");
  }
  if (!doc.is_array()) {
    fail(ErrorCode::parse, path + ": expected a JSON array");
  }
  std::vector<Span> spans;
  int32_t sentence = 0;
  for (const auto& item : doc) {
    if (item.is_object() && item.contains("spans")) {
      for (const auto& sj : item.at("spans")) {
        spans.push_back(span_from_json(sj, sentence, path));
      }
      ++sentence;
    } else {
      spans.push_back(span_from_json(item, 0, path));
    }
  }
  return spans;
}

LabelColumns read_labels(const std::string& path) {
  std::ifstream in = open_or_fail(path);
  LabelColumns out;
  std::string line;
  uint64_t line_no = 0;
  int columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (fields.size() > 2) {
      fail(ErrorCode::parse, path + ":" + std::to_string(line_no) +
                                 ": expected 1 or 2 columns per line");
    }
    if (columns == 0) columns = static_cast<int>(fields.size());
    if (static_cast<int>(fields.size()) != columns) {
      fail(ErrorCode::parse, path + ":" + std::to_string(line_no) +
                                 ": inconsistent column count");
    }
    out.first.push_back(fields[0]);
    if (columns == 2) out.second.push_back(fields[1]);
  }
  return out;
}

std::vector<double> read_losses(const std::string& path) {
  std::ifstream in = open_or_fail(path);
  std::vector<double> losses;
  std::string line;
  uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    try {
      size_t pos = 0;
      double v = std::stod(fields[0], &pos);
      if (pos != fields[0].size()) throw std::invalid_argument("trailing");
      losses.push_back(v);
    } catch (const std::exception&) {
      fail(ErrorCode::parse,
           path + ":" + std::to_string(line_no) + ": not a number: '" + fields[0] + "'");
    }
  }
  return losses;
}

namespace {

std::vector<Span> spans_from_conll(const std::vector<std::vector<std::string>>& sentences) {
  std::vector<Span> spans;
  for (size_t i = 0; i < sentences.size(); ++i) {
    auto s = bio_to_spans(sentences[i], static_cast<int32_t>(i));
    spans.insert(spans.end(), s.begin(), s.end());
  }
  return spans;
}

std::pair<std::vector<Span>, std::vector<Span>> ner_spans(const std::string& gold_path,
                                                          const std::string& pred_path) {
  if (pred_path.empty()) {
    ConllSentences data = read_conll(gold_path);
    if (data.pred.empty() && !data.gold.empty()) {
      fail(ErrorCode::input, gold_path + ": need 3 columns (token gold pred) or a --pred file");
    }
    return {spans_from_conll(data.gold), spans_from_conll(data.pred)};
  }
  ConllSentences gold = read_conll(gold_path);
  ConllSentences pred = read_conll(pred_path);
  if (!gold.pred.empty() || !pred.pred.empty()) {
    fail(ErrorCode::input, "with separate files, each must have 2 columns (token tag)");
  }
  if (gold.gold.size() != pred.gold.size()) {
    fail(ErrorCode::input, "gold and pred disagree on sentence count");
  }
  for (size_t i = 0; i < gold.gold.size(); ++i) {
    if (gold.gold[i].size() != pred.gold[i].size()) {
      fail(ErrorCode::input, "gold and pred disagree on sentence " + std::to_string(i) +
                                 " length");
    }
  }
  return {spans_from_conll(gold.gold), spans_from_conll(pred.gold)};
}

std::pair<std::vector<std::string>, std::vector<std::string>> label_pair(
    const std::string& gold_path, const std::string& pred_path) {
  if (pred_path.empty()) {
    LabelColumns cols = read_labels(gold_path);
    if (cols.second.empty() && !cols.first.empty()) {
      fail(ErrorCode::input, gold_path + ": need two columns (gold pred) or a --pred file");
    }
    return {cols.first, cols.second};
  }
  LabelColumns gold = read_labels(gold_path);
  LabelColumns pred = read_labels(pred_path);
  if (!gold.second.empty() || !pred.second.empty()) {
    fail(ErrorCode::input, "with separate files, each must have a single label column");
  }
  return {gold.first, pred.first};
}

}  // namespace

EvalReport eval_files(const std::string& kind, const std::string& gold_path,
                      const std::string& pred_path, const std::string& average) {
  bool micro = false;
  if (!average.empty()) {
    if (average == "micro") {
      micro = true;
    } else if (average != "macro") {
      fail(ErrorCode::invalid_argument, "average must be macro or micro, got: " + average);
    }
  }
  if (kind == "ner") {
    auto [gold, pred] = ner_spans(gold_path, pred_path);
    return span_f1(gold, pred);
  }
  if (kind == "nested") {
    if (pred_path.empty()) {
      fail(ErrorCode::invalid_argument, "nested needs both --gold and --pred span JSON files");
    }
    return nested_f1(read_span_json(gold_path), read_span_json(pred_path));
  }
  if (kind == "cls") {
    auto [gold, pred] = label_pair(gold_path, pred_path);
    return mean_f1(gold, pred, micro);
  }
  if (kind == "nli") {
    auto [gold, pred] = label_pair(gold_path, pred_path);
    return accuracy(gold, pred);
  }
  if (kind == "ppl") {
    return perplexity(read_losses(gold_path));
  }
  fail(ErrorCode::invalid_argument, "unknown metric kind: " + kind);
}

}  // namespace mlmkit::metrics
