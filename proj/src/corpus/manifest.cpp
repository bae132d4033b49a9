#include "corpus/manifest.hpp"

#include <cmath>
#include <filesystem>
#include <set>
#include <unordered_set>

#include "corpus/jsonl.hpp"
#include "util/error.hpp"
#include "util/fs.hpp"
#include "util/hash.hpp"

namespace mlmkit::corpus {

namespace fs = std::filesystem;

CorpusManifest CorpusManifest::load(const std::string& path) {
  nlohmann::json doc = nlohmann::json::parse(read_text_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("entries") ||
      !doc.at("entries").is_array()) {
    fail(ErrorCode::parse, path + ": manifest must be an object with an \"entries\" array");
  }

  const fs::path base = fs::path(path).parent_path();
  CorpusManifest manifest;
  std::set<std::string> names;
  for (const auto& e : doc.at("entries")) {
    ManifestEntry entry;
    if (!e.is_object() || !e.contains("name") || !e.at("name").is_string() ||
        !e.contains("paths") || !e.at("paths").is_array()) {
      fail(ErrorCode::parse, path + ": each entry needs \"name\" and \"paths\"");
    }
    entry.name = e.at("name").get<std::string>();
    if (!names.insert(entry.name).second) {
      fail(ErrorCode::config, path + ": duplicate entry name: " + entry.name);
    }
    for (const auto& p : e.at("paths")) {
      if (!p.is_string()) {
        fail(ErrorCode::parse, path + ": entry paths must be strings");
      }
      fs::path item = p.get<std::string>();
      entry.paths.push_back(item.is_absolute() ? item.string() : (base / item).string());
    }
    entry.dedup = e.value("dedup", false);
    if (e.contains("expected_documents")) {
      entry.expected_documents = e.at("expected_documents").get<uint64_t>();
    }
    if (e.contains("expected_bytes")) {
      entry.expected_bytes = e.at("expected_bytes").get<uint64_t>();
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

double bytes_to_gb(uint64_t bytes) {
  return std::round(static_cast<double>(bytes) / 1e9 * 100.0) / 100.0;
}

double ValidationReport::expected_size_gb() const { return bytes_to_gb(expected_bytes); }
double ValidationReport::actual_size_gb() const { return bytes_to_gb(actual_bytes); }

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json j;
  nlohmann::json entries_json = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json ej;
    ej["name"] = e.name;
    ej["documents"] = e.actual.documents;
    ej["bytes"] = e.actual.bytes;
    ej["size_gb"] = bytes_to_gb(e.actual.bytes);
    if (e.expected_documents) ej["expected_documents"] = *e.expected_documents;
    if (e.expected_bytes) ej["expected_bytes"] = *e.expected_bytes;
    ej["duplicate_ids"] = e.duplicate_ids;
    ej["ok"] = e.ok();
    if (!e.problems.empty()) ej["problems"] = e.problems;
    entries_json.push_back(std::move(ej));
  }
  j["entries"] = std::move(entries_json);
  j["totals"] = {
      {"expected_documents", expected_documents},
      {"expected_bytes", expected_bytes},
      {"expected_size_gb", expected_size_gb()},
      {"actual_documents", actual_documents},
      {"actual_bytes", actual_bytes},
      {"actual_size_gb", actual_size_gb()},
  };
  j["ok"] = ok;
  return j;
}

ValidationReport build_report(const CorpusManifest& manifest,
                              const std::vector<CorpusStats>& actuals) {
  if (actuals.size() != manifest.entries.size()) {
    fail(ErrorCode::invalid_argument, "one stats record per manifest entry required");
  }
  ValidationReport report;
  for (size_t i = 0; i < manifest.entries.size(); ++i) {
    const ManifestEntry& entry = manifest.entries[i];
    EntryReport er;
    er.name = entry.name;
    er.actual = actuals[i];
    er.expected_documents = entry.expected_documents;
    er.expected_bytes = entry.expected_bytes;
    if (entry.expected_documents && *entry.expected_documents != actuals[i].documents) {
      er.problems.push_back("documents mismatch: expected " +
                            std::to_string(*entry.expected_documents) + ", counted " +
                            std::to_string(actuals[i].documents));
    }
    if (entry.expected_bytes && *entry.expected_bytes != actuals[i].bytes) {
      er.problems.push_back("bytes mismatch: expected " +
                            std::to_string(*entry.expected_bytes) + ", counted " +
                            std::to_string(actuals[i].bytes));
    }
    report.expected_documents += entry.expected_documents.value_or(actuals[i].documents);
    report.expected_bytes += entry.expected_bytes.value_or(actuals[i].bytes);
    report.actual_documents += actuals[i].documents;
    report.actual_bytes += actuals[i].bytes;
    report.ok = report.ok && er.ok();
    report.entries.push_back(std::move(er));
  }
  return report;
}

ValidationReport validate_manifest(const CorpusManifest& manifest) {
  std::vector<CorpusStats> actuals(manifest.entries.size());
  std::vector<EntryReport> scan_problems(manifest.entries.size());

  for (size_t i = 0; i < manifest.entries.size(); ++i) {
    const ManifestEntry& entry = manifest.entries[i];
    bool paths_ok = true;
    for (const std::string& p : entry.paths) {
      std::error_code ec;
      if (!fs::exists(p, ec)) {
        scan_problems[i].problems.push_back("missing path: " + p);
        paths_ok = false;
      }
    }
    if (!paths_ok) continue;

    try {
      std::unordered_set<Hash128, Hash128Hasher> ids;
      JsonlChain chain(entry.paths, entry.name);
      JsonlDocument doc;
      while (chain.next(doc)) {
        actuals[i].add_text_bytes(doc.rec.text.size());
        if (!ids.insert(murmur3_128(doc.rec.id, 0x1d5)).second) {
          scan_problems[i].duplicate_ids += 1;
        }
      }
      if (scan_problems[i].duplicate_ids > 0) {
        scan_problems[i].problems.push_back(
            std::to_string(scan_problems[i].duplicate_ids) + " duplicate document ids");
      }
    } catch (const Error& e) {
      scan_problems[i].problems.push_back(e.what());
    }
  }

  ValidationReport report = build_report(manifest, actuals);
  for (size_t i = 0; i < report.entries.size(); ++i) {
    report.entries[i].duplicate_ids = scan_problems[i].duplicate_ids;
    for (auto& p : scan_problems[i].problems) {
      report.entries[i].problems.push_back(std::move(p));
    }
    report.ok = report.ok && report.entries[i].ok();
  }
  return report;
}

}  // namespace mlmkit::corpus
