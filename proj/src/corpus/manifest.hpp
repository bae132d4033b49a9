#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "corpus/document.hpp"

namespace mlmkit::corpus {

struct ManifestEntry {
  std::string name;
  std::vector<std::string> paths;  // resolved against the manifest location
  bool dedup = false;
  std::optional<uint64_t> expected_documents;
  std::optional<uint64_t> expected_bytes;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;

  static CorpusManifest load(const std::string& path);
};

struct EntryReport {
  std::string name;
  CorpusStats actual;
  std::optional<uint64_t> expected_documents;
  std::optional<uint64_t> expected_bytes;
  uint64_t duplicate_ids = 0;
  std::vector<std::string> problems;  // missing paths, parse failures, mismatches

  bool ok() const { return problems.empty(); }
};

struct ValidationReport {
  std::vector<EntryReport> entries;
  uint64_t expected_documents = 0;
  uint64_t expected_bytes = 0;
  uint64_t actual_documents = 0;
  uint64_t actual_bytes = 0;
  bool ok = true;

  double expected_size_gb() const;
  double actual_size_gb() const;
  nlohmann::json to_json() const;
};

double bytes_to_gb(uint64_t bytes);  // rounded to 2 decimals

// Assembles a report from per-entry counts; the totals and mismatch flags
// are pure functions of manifest + counts.
ValidationReport build_report(const CorpusManifest& manifest,
                              const std::vector<CorpusStats>& actuals);

// Scans the files behind every entry and reports counts, duplicate ids
// and mismatches against the expectations.
ValidationReport validate_manifest(const CorpusManifest& manifest);

}  // namespace mlmkit::corpus
