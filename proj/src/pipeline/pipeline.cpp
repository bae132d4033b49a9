#include "pipeline/pipeline.hpp"

#include <filesystem>
#include <fstream>

#include "bpe/encoder.hpp"
#include "bpe/model.hpp"
#include "bpe/trainer.hpp"
#include "corpus/dedup.hpp"
#include "corpus/jsonl.hpp"
#include "corpus/manifest.hpp"
#include "corpus/shuffle.hpp"
#include "mask/policy.hpp"
#include "mask/wwm.hpp"
#include "pack/packer.hpp"
#include "pack/sentence_split.hpp"
#include "pack/shard.hpp"
#include "pipeline/defaults.hpp"
#include "util/error.hpp"
#include "util/fs.hpp"
#include "util/hash.hpp"

namespace mlmkit::pipeline {

namespace fs = std::filesystem;

PipelineConfig PipelineConfig::load(const std::string& path) {
  nlohmann::json j = nlohmann::json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    fail(ErrorCode::parse, path + ": invalid pipeline config JSON");
  }
  PipelineConfig config;
  if (!j.contains("manifest") || !j.at("manifest").is_string()) {
    fail(ErrorCode::config, path + ": config needs a \"manifest\" path");
  }
  const fs::path base = fs::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    fs::path item = p;
    return item.is_absolute() ? item.string() : (base / item).string();
  };
  config.manifest = resolve(j.at("manifest").get<std::string>());
  config.work_dir = j.value("work_dir", std::string());
  if (!config.work_dir.empty()) config.work_dir = resolve(config.work_dir);
  config.tokenizer_dir = j.value("tokenizer_dir", config.tokenizer_dir);
  config.shard_dir = j.value("shard_dir", config.shard_dir);
  if (j.contains("mask_policy")) {
    config.mask_policy = resolve(j.at("mask_policy").get<std::string>());
  }
  if (j.contains("grid_configs")) {
    for (const auto& g : j.at("grid_configs")) {
      config.grid_configs.push_back(resolve(g.get<std::string>()));
    }
  }
  config.seed = j.value("seed", config.seed);
  config.vocab_size = j.value("vocab_size", config.vocab_size);
  config.max_per_shard = j.value("max_per_shard", config.max_per_shard);
  if (j.contains("schedule")) {
    const auto& s = j.at("schedule");
    config.schedule.warmup_steps = s.value("warmup_steps", config.schedule.warmup_steps);
    config.schedule.peak_lr = s.value("peak_lr", config.schedule.peak_lr);
    config.schedule.total_steps = s.value("total_steps", config.schedule.total_steps);
    config.schedule.end_lr = s.value("end_lr", config.schedule.end_lr);
    config.schedule.decay_power = s.value("decay_power", config.schedule.decay_power);
  }
  return config;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["ok"] = ok;
  if (!failed_stage.empty()) j["failed_stage"] = failed_stage;
  if (!config_snapshot.is_null()) j["config"] = config_snapshot;
  nlohmann::json stages_json = nlohmann::json::array();
  for (const StageResult& s : stages) {
    nlohmann::json sj;
    sj["name"] = s.name;
    sj["status"] = s.status;
    auto refs = [](const std::vector<ArtifactRef>& list) {
      nlohmann::json arr = nlohmann::json::array();
      for (const ArtifactRef& r : list) {
        arr.push_back({{"path", r.path}, {"content_hash", r.content_hash}});
      }
      return arr;
    };
    sj["inputs"] = refs(s.inputs);
    sj["outputs"] = refs(s.outputs);
    if (!s.details.is_null()) sj["details"] = s.details;
    if (!s.error.empty()) sj["error"] = s.error;
    stages_json.push_back(std::move(sj));
  }
  j["stages"] = std::move(stages_json);
  return j;
}

namespace {

// paths inside the manifest stay relative to the work dir so two runs in
// different directories produce byte-identical manifests
std::string rel_to(const fs::path& base, const std::string& path) {
  std::error_code ec;
  fs::path rel = fs::relative(path, base, ec);
  return ec || rel.empty() ? path : rel.string();
}

ArtifactRef make_ref(const fs::path& work, const std::string& path) {
  return ArtifactRef{rel_to(work, path), to_hex(hash_file(path))};
}

struct StageRunner {
  RunManifest& manifest;
  bool halted = false;

  template <typename Fn>
  void stage(const std::string& name, Fn&& body) {
    StageResult result;
    result.name = name;
    if (halted) {
      result.status = "skipped";
      manifest.stages.push_back(std::move(result));
      return;
    }
    try {
      body(result);
      result.status = "done";
    } catch (const std::exception& e) {
      result.status = "failed";
      result.error = e.what();
      manifest.ok = false;
      manifest.failed_stage = name;
      halted = true;
    }
    manifest.stages.push_back(std::move(result));
  }
};

}  // namespace

RunManifest run_pipeline(const PipelineConfig& config, const std::string& work_dir_override) {
  RunManifest manifest;
  manifest.seed = config.seed;
  {
    nlohmann::json grid_names = nlohmann::json::array();
    for (const std::string& g : config.grid_configs) {
      grid_names.push_back(fs::path(g).filename().string());
    }
    manifest.config_snapshot = {
        {"schedule",
         {{"warmup_steps", config.schedule.warmup_steps},
          {"peak_lr", config.schedule.peak_lr},
          {"total_steps", config.schedule.total_steps},
          {"end_lr", config.schedule.end_lr},
          {"decay_power", config.schedule.decay_power}}},
        {"grid_configs", grid_names},
    };
  }

  std::string work_dir = !work_dir_override.empty() ? work_dir_override : config.work_dir;
  if (work_dir.empty()) {
    fail(ErrorCode::config, "pipeline needs a work_dir (config field or override)");
  }
  const fs::path work = work_dir;
  ensure_dir(work);
  auto resolve_out = [&](const std::string& p) {
    fs::path item = p;
    return item.is_absolute() ? item.string() : (work / item).string();
  };
  const std::string tokenizer_dir = resolve_out(config.tokenizer_dir);
  const std::string shard_dir = resolve_out(config.shard_dir);
  const uint32_t vocab_size =
      config.vocab_size != 0 ? config.vocab_size : defaults::kVocabSize;
  const uint64_t max_per_shard =
      config.max_per_shard != 0 ? config.max_per_shard : defaults::kDefaultMaxPerShard;

  corpus::CorpusManifest corpus_manifest;
  std::vector<std::string> dedup_files;   // one per entry, in manifest order
  std::string shuffled_path = (work / "shuffled.jsonl").string();

  StageRunner runner{manifest};

  runner.stage("validate", [&](StageResult& result) {
    result.inputs.push_back(make_ref(work, config.manifest));
    corpus_manifest = corpus::CorpusManifest::load(config.manifest);
    corpus::ValidationReport report = corpus::validate_manifest(corpus_manifest);
    const std::string report_path = (work / "validate_report.json").string();
    write_text_file(report_path, report.to_json().dump(2) + "\n");
    result.outputs.push_back(make_ref(work, report_path));
    result.details = {{"entries", report.entries.size()},
                      {"documents", report.actual_documents},
                      {"bytes", report.actual_bytes}};
    if (!report.ok) {
      std::string why;
      for (const auto& e : report.entries) {
        for (const auto& p : e.problems) {
          why += (why.empty() ? "" : "; ") + e.name + ": " + p;
        }
      }
      fail(ErrorCode::input, "manifest validation failed: " + why);
    }
  });

  runner.stage("dedup", [&](StageResult& result) {
    const fs::path dedup_dir = work / "dedup";
    ensure_dir(dedup_dir);
    nlohmann::json details = nlohmann::json::array();
    for (const corpus::ManifestEntry& entry : corpus_manifest.entries) {
      const std::string out_path = (dedup_dir / (entry.name + ".jsonl")).string();
      if (entry.dedup) {
        corpus::DedupCounts counts = corpus::dedup_jsonl(entry.paths, entry.name, out_path);
        details.push_back({{"name", entry.name},
                           {"dedup", true},
                           {"kept", counts.kept},
                           {"dropped", counts.dropped}});
      } else {
        // pass through byte-identical
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::io, "cannot open: " + out_path);
        for (const std::string& p : entry.paths) {
          out << read_text_file(p);
        }
        out.flush();
        if (!out) fail(ErrorCode::io, "write failed: " + out_path);
        details.push_back({{"name", entry.name}, {"dedup", false}});
      }
      dedup_files.push_back(out_path);
      result.outputs.push_back(make_ref(work, out_path));
    }
    result.details = std::move(details);
  });

  runner.stage("shuffle", [&](StageResult& result) {
    std::vector<std::pair<std::string, std::string>> path_sources;
    for (size_t i = 0; i < corpus_manifest.entries.size(); ++i) {
      path_sources.emplace_back(dedup_files[i], corpus_manifest.entries[i].name);
      result.inputs.push_back(make_ref(work, dedup_files[i]));
    }
    uint64_t total = corpus::shuffle_jsonl(path_sources, config.seed, shuffled_path,
                                           (work / "shuffle_tmp").string());
    result.outputs.push_back(make_ref(work, shuffled_path));
    result.details = {{"documents", total}, {"seed", config.seed}};
  });

  bpe::TokenizerModel model;
  runner.stage("tokenizer", [&](StageResult& result) {
    if (bpe::model_files_present(tokenizer_dir)) {
      model = bpe::load_model(tokenizer_dir);
      result.details = {{"mode", "loaded"}, {"vocab_size", model.vocab_size()}};
    } else {
      corpus::JsonlReader reader(shuffled_path, "train");
      corpus::JsonlDocument doc;
      auto source = [&](std::string& text) {
        if (!reader.next(doc)) return false;
        text = doc.rec.text;
        return true;
      };
      model = bpe::train_bpe(source, vocab_size);
      bpe::save_model(model, tokenizer_dir);
      result.details = {{"mode", "trained"},
                        {"vocab_size", model.vocab_size()},
                        {"requested_vocab_size", model.requested_vocab_size}};
    }
    result.outputs.push_back(make_ref(work, (fs::path(tokenizer_dir) / "vocab.txt").string()));
    result.outputs.push_back(make_ref(work, (fs::path(tokenizer_dir) / "merges.txt").string()));
  });

  runner.stage("pack", [&](StageResult& result) {
    result.inputs.push_back(make_ref(work, shuffled_path));
    bpe::Encoder encoder(model);
    pack::ShardWriter writer(shard_dir, model.vocab_size(), max_per_shard);
    pack::Packer packer(model.specials,
                        [&](pack::PackedSequence&& seq) { writer.add(seq); });
    corpus::JsonlReader reader(shuffled_path, "train");
    corpus::JsonlDocument doc;
    while (reader.next(doc)) {
      pack::Segmentation seg = pack::segment_sentences(doc.rec.text);
      for (const pack::Sentence& sentence : seg.sentences) {
        packer.add_sentence(encoder.encode(sentence.lead + sentence.text));
      }
      packer.end_document();
    }
    packer.finish();
    std::vector<std::string> files = writer.finish();
    for (const std::string& f : files) {
      result.outputs.push_back(make_ref(work, f));
    }
    const pack::PackStats& stats = packer.stats();
    result.details = {{"sentences", stats.sentences_in},
                      {"tokens", stats.tokens_in},
                      {"sequences", stats.sequences_out},
                      {"hard_split_sentences", stats.hard_split_sentences},
                      {"shards", files.size()}};
  });

  runner.stage("mask-stats", [&](StageResult& result) {
    if (config.mask_policy.empty()) {
      result.status = "done";
      result.details = {{"skipped", "no mask policy configured"}};
      return;
    }
    result.inputs.push_back(make_ref(work, config.mask_policy));
    mask::MaskPolicy policy = mask::MaskPolicy::load(config.mask_policy);
    mask::MaskStats stats;
    uint64_t index = 0;  // global across the shard directory
    for (const std::string& path : pack::list_shards(shard_dir)) {
      pack::ShardReader reader(path);
      pack::PackedSequence seq;
      while (reader.next(seq)) {
        mask::MaskedSequence masked =
            mask::mask_sequence(seq, policy, reader.header().vocab_size, config.seed,
                                /*epoch=*/0, index++);
        stats.add(seq, masked);
      }
    }
    const std::string stats_path = (work / "mask_stats.json").string();
    write_text_file(stats_path, stats.to_json().dump(2) + "\n");
    result.outputs.push_back(make_ref(work, stats_path));
    result.details = {{"seed", config.seed}, {"epoch", 0}};
  });

  const std::string manifest_path = (work / "run_manifest.json").string();
  write_text_file(manifest_path, manifest.to_json().dump(2) + "\n");
  return manifest;
}

nlohmann::json version_info() {
  return {
      {"tool_version", defaults::kToolVersion},
      {"shard_format_version", pack::kShardFormatVersion},
      {"tokenizer_format_version", bpe::kTokenizerFormatVersion},
  };
}

nlohmann::json defaults_json() {
  return {
      {"sequence_length", defaults::kSequenceLength},
      {"payload_length", defaults::kPayloadLength},
      {"vocab_size", defaults::kVocabSize},
      {"mask_prob", defaults::kMaskProb},
      {"actions",
       {{"mask", defaults::kActionMask},
        {"random", defaults::kActionRandom},
        {"keep", defaults::kActionKeep}}},
      {"schedule",
       {{"warmup_steps", defaults::kWarmupSteps},
        {"peak_lr", defaults::kPeakLr},
        {"total_steps", defaults::kTotalSteps},
        {"end_lr", defaults::kEndLr},
        {"decay_power", defaults::kDecayPower},
        {"pretrain_batch_size", defaults::kPretrainBatchSize}}},
      {"grid",
       {{"learning_rates", defaults::kGridLearningRates},
        {"batch_sizes", defaults::kGridBatchSizes},
        {"epochs", defaults::kGridEpochs},
        {"nli_epochs", defaults::kGridEpochsNli},
        {"holdout_fraction", defaults::kHoldoutFraction}}},
      {"max_per_shard", defaults::kDefaultMaxPerShard},
  };
}

}  // namespace mlmkit::pipeline
