#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace mlmkit::metrics {

enum class SpanLevel : uint8_t { outer, inner };

const char* level_name(SpanLevel level);
SpanLevel level_from_name(const std::string& name);

struct Span {
  int32_t sentence = 0;
  int32_t start = 0;
  int32_t end = 0;  // exclusive
  std::string label;
  SpanLevel level = SpanLevel::outer;

  bool operator==(const Span&) const = default;
  auto operator<=>(const Span&) const = default;
};

struct ClassCounts {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t fn = 0;

  double precision() const;
  double recall() const;
  double f1() const;
};

struct EvalReport {
  std::string metric;
  double value = 0.0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<ClassCounts> counts;
  std::optional<int64_t> correct;
  std::optional<int64_t> total;
  std::map<std::string, ClassCounts> per_class;

  nlohmann::json to_json() const;
};

// BIO decoding with lenient repair: a stray I-X opens a new span.
std::vector<Span> bio_to_spans(const std::vector<std::string>& tags, int32_t sentence = 0);

// Exact-match micro F1 over (sentence, start, end, label); level ignored.
EvalReport span_f1(const std::vector<Span>& gold, const std::vector<Span>& pred);

// Two-level variant: matching additionally requires equal level; counts
// pooled over the union of both levels.
EvalReport nested_f1(const std::vector<Span>& gold, const std::vector<Span>& pred);

// Macro-averaged one-vs-rest F1 over classes present in gold. micro=true
// pools counts instead.
EvalReport mean_f1(const std::vector<std::string>& gold, const std::vector<std::string>& pred,
                   bool micro = false);

EvalReport accuracy(const std::vector<std::string>& gold, const std::vector<std::string>& pred);

// exp of the mean natural-log loss.
EvalReport perplexity(const std::vector<double>& nll_per_token);

}  // namespace mlmkit::metrics
