#pragma once

#include <string>
#include <vector>

#include "metrics/eval.hpp"

namespace mlmkit::metrics {

// Whitespace-separated columns, blank line between sentences.
// Expected column counts: 3 (token gold pred) or 2 (token tag).
struct ConllSentences {
  std::vector<std::vector<std::string>> gold;
  std::vector<std::vector<std::string>> pred;  // empty when file had 2 columns
};

ConllSentences read_conll(const std::string& path);

// Span JSON: either a flat array of span objects (optional "sentence"
// field) or an array of {"spans": [...]} sentence objects. Span objects
// carry start, end, label and an optional level ("outer"/"inner").
std::vector<Span> read_span_json(const std::string& path);

// One label per line; a line with two columns is split into (gold, pred).
struct LabelColumns {
  std::vector<std::string> first;
  std::vector<std::string> second;  // empty when single-column
};

LabelColumns read_labels(const std::string& path);

std::vector<double> read_losses(const std::string& path);

// kind: ner | nested | cls | nli | ppl. pred_path may be empty when the
// gold file carries both columns (ner, cls, nli) or is unused (ppl).
EvalReport eval_files(const std::string& kind, const std::string& gold_path,
                      const std::string& pred_path, const std::string& average);

}  // namespace mlmkit::metrics
