#include "metrics/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "util/error.hpp"

namespace mlmkit::metrics {

const char* level_name(SpanLevel level) {
  return level == SpanLevel::outer ? "outer" : "inner";
}

SpanLevel level_from_name(const std::string& name) {
  if (name == "outer") return SpanLevel::outer;
  if (name == "inner") return SpanLevel::inner;
  fail(ErrorCode::input, "unknown span level: " + name);
}

double ClassCounts::precision() const {
  return (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
}

double ClassCounts::recall() const {
  return (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
}

double ClassCounts::f1() const {
  if (tp == 0 && fp == 0 && fn == 0) return 1.0;
  double p = precision();
  double r = recall();
  return (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json j;
  j["metric"] = metric;
  j["value"] = value;
  if (precision) j["precision"] = *precision;
  if (recall) j["recall"] = *recall;
  if (counts) {
    j["counts"] = {{"tp", counts->tp}, {"fp", counts->fp}, {"fn", counts->fn}};
  }
  if (correct) j["counts"]["correct"] = *correct;
  if (total) j["counts"]["total"] = *total;
  if (!per_class.empty()) {
    nlohmann::json pc = nlohmann::json::object();
    for (const auto& [name, c] : per_class) {
      pc[name] = {{"tp", c.tp},
                  {"fp", c.fp},
                  {"fn", c.fn},
                  {"precision", c.precision()},
                  {"recall", c.recall()},
                  {"f1", c.f1()}};
    }
    j["per_class"] = pc;
  }
  return j;
}

std::vector<Span> bio_to_spans(const std::vector<std::string>& tags, int32_t sentence) {
  std::vector<Span> spans;
  std::optional<Span> open;

  auto close = [&] {
    if (open) {
      spans.push_back(*open);
      open.reset();
    }
  };

  for (size_t i = 0; i < tags.size(); ++i) {
    const std::string& tag = tags[i];
    if (tag == "O") {
      close();
      continue;
    }
    if (tag.size() < 3 || (tag[0] != 'B' && tag[0] != 'I') || tag[1] != '-') {
      fail(ErrorCode::input,
           "unknown BIO tag at position " + std::to_string(i) + ": '" + tag + "'");
    }
    std::string label = tag.substr(2);
    int32_t pos = static_cast<int32_t>(i);
    if (tag[0] == 'B') {
      close();
      open = Span{sentence, pos, pos + 1, label, SpanLevel::outer};
    } else {
      if (open && open->label == label) {
        open->end = pos + 1;
      } else {
        close();
        open = Span{sentence, pos, pos + 1, label, SpanLevel::outer};
      }
    }
  }
  close();
  return spans;
}

namespace {

struct MatchResult {
  ClassCounts totals;
  std::map<std::string, ClassCounts> per_class;
};

// Multiset matching over a caller-chosen key; per-class counts keyed by
// a caller-chosen class name.
template <typename Key, typename KeyFn, typename ClassFn>
MatchResult match_spans(const std::vector<Span>& gold, const std::vector<Span>& pred,
                        KeyFn key_of, ClassFn class_of) {
  std::map<Key, int64_t> gold_count;
  for (const Span& s : gold) gold_count[key_of(s)] += 1;

  MatchResult res;
  for (const Span& s : pred) {
    auto it = gold_count.find(key_of(s));
    if (it != gold_count.end() && it->second > 0) {
      it->second -= 1;
      res.totals.tp += 1;
      res.per_class[class_of(s)].tp += 1;
    } else {
      res.totals.fp += 1;
      res.per_class[class_of(s)].fp += 1;
    }
  }
  for (const auto& [key, remaining] : gold_count) {
    if (remaining > 0) {
      res.totals.fn += remaining;
    }
  }
  // Unmatched gold per class needs another pass since the key holds more
  // than the class name.
  std::map<Key, int64_t> leftover = std::move(gold_count);
  for (const Span& s : gold) {
    auto it = leftover.find(key_of(s));
    if (it != leftover.end() && it->second > 0) {
      it->second -= 1;
      res.per_class[class_of(s)].fn += 1;
    }
  }
  return res;
}

EvalReport report_from_counts(std::string metric, MatchResult res, bool both_empty) {
  EvalReport report;
  report.metric = std::move(metric);
  if (both_empty) {
    report.value = 1.0;
    report.precision = 1.0;
    report.recall = 1.0;
    report.counts = ClassCounts{};
    return report;
  }
  report.counts = res.totals;
  report.precision = res.totals.precision();
  report.recall = res.totals.recall();
  report.value = res.totals.f1();
  report.per_class = std::move(res.per_class);
  return report;
}

void check_span(const Span& s) {
  if (s.start >= s.end) {
    fail(ErrorCode::input, "span start must be < end");
  }
  if (s.label.empty()) {
    fail(ErrorCode::input, "span label must be non-empty");
  }
}

}  // namespace

EvalReport span_f1(const std::vector<Span>& gold, const std::vector<Span>& pred) {
  for (const Span& s : gold) check_span(s);
  for (const Span& s : pred) check_span(s);
  using Key = std::tuple<int32_t, int32_t, int32_t, std::string>;
  auto key_of = [](const Span& s) { return Key{s.sentence, s.start, s.end, s.label}; };
  auto class_of = [](const Span& s) { return s.label; };
  auto res = match_spans<Key>(gold, pred, key_of, class_of);
  return report_from_counts("span_f1", std::move(res), gold.empty() && pred.empty());
}

EvalReport nested_f1(const std::vector<Span>& gold, const std::vector<Span>& pred) {
  for (const Span& s : gold) check_span(s);
  for (const Span& s : pred) check_span(s);
  using Key = std::tuple<int32_t, uint8_t, int32_t, int32_t, std::string>;
  auto key_of = [](const Span& s) {
    return Key{s.sentence, static_cast<uint8_t>(s.level), s.start, s.end, s.label};
  };
  auto class_of = [](const Span& s) {
    return std::string(level_name(s.level)) + "/" + s.label;
  };
  auto res = match_spans<Key>(gold, pred, key_of, class_of);
  return report_from_counts("nested_f1", std::move(res), gold.empty() && pred.empty());
}

EvalReport mean_f1(const std::vector<std::string>& gold, const std::vector<std::string>& pred,
                   bool micro) {
  if (gold.size() != pred.size()) {
    fail(ErrorCode::input, "gold/pred length mismatch: " + std::to_string(gold.size()) +
                               " vs " + std::to_string(pred.size()));
  }
  std::set<std::string> gold_classes(gold.begin(), gold.end());
  std::map<std::string, ClassCounts> per_class;
  for (size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] == pred[i]) {
      per_class[gold[i]].tp += 1;
    } else {
      per_class[pred[i]].fp += 1;
      per_class[gold[i]].fn += 1;
    }
  }

  EvalReport report;
  report.metric = micro ? "micro_f1" : "mean_f1";
  report.per_class = per_class;
  if (micro) {
    ClassCounts pooled;
    for (const auto& [name, c] : per_class) {
      pooled.tp += c.tp;
      pooled.fp += c.fp;
      pooled.fn += c.fn;
    }
    report.counts = pooled;
    report.precision = gold.empty() ? 1.0 : pooled.precision();
    report.recall = gold.empty() ? 1.0 : pooled.recall();
    report.value = gold.empty() ? 1.0 : pooled.f1();
    return report;
  }
  if (gold_classes.empty()) {
    report.value = 1.0;
    return report;
  }
  double sum = 0.0;
  for (const std::string& cls : gold_classes) {
    sum += per_class[cls].f1();
  }
  report.value = sum / static_cast<double>(gold_classes.size());
  return report;
}

EvalReport accuracy(const std::vector<std::string>& gold, const std::vector<std::string>& pred) {
  if (gold.size() != pred.size()) {
    fail(ErrorCode::input, "gold/pred length mismatch: " + std::to_string(gold.size()) +
                               " vs " + std::to_string(pred.size()));
  }
  int64_t correct = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] == pred[i]) ++correct;
  }
  EvalReport report;
  report.metric = "accuracy";
  report.correct = correct;
  report.total = static_cast<int64_t>(gold.size());
  report.value = gold.empty() ? 1.0 : static_cast<double>(correct) / static_cast<double>(gold.size());
  return report;
}

EvalReport perplexity(const std::vector<double>& nll_per_token) {
  if (nll_per_token.empty()) {
    fail(ErrorCode::input, "perplexity requires at least one loss value");
  }
  double sum = 0.0;
  for (double loss : nll_per_token) {
    if (!std::isfinite(loss) || loss < 0.0) {
      fail(ErrorCode::input, "losses must be finite and non-negative");
    }
    sum += loss;
  }
  EvalReport report;
  report.metric = "perplexity";
  report.total = static_cast<int64_t>(nll_per_token.size());
  report.value = std::exp(sum / static_cast<double>(nll_per_token.size()));
  return report;
}

}  // namespace mlmkit::metrics
