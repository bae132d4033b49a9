#include "mlmkit/mlmkit.h"

#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "bpe/encoder.hpp"
#include "bpe/model.hpp"
#include "bpe/trainer.hpp"
#include "corpus/dedup.hpp"
#include "corpus/jsonl.hpp"
#include "corpus/manifest.hpp"
#include "corpus/shuffle.hpp"
#include "grid/grid.hpp"
#include "grid/runner.hpp"
#include "mask/policy.hpp"
#include "mask/wwm.hpp"
#include "metrics/files.hpp"
#include "pack/packer.hpp"
#include "pack/sentence_split.hpp"
#include "pack/shard.hpp"
#include "pipeline/pipeline.hpp"
#include "sched/lr_schedule.hpp"
#include "util/error.hpp"
#include "util/fs.hpp"

using namespace mlmkit;

namespace {

thread_local std::string g_last_error;

mlmkit_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return MLMKIT_ERR_INVALID_ARGUMENT;
    case ErrorCode::io: return MLMKIT_ERR_IO;
    case ErrorCode::parse: return MLMKIT_ERR_PARSE;
    case ErrorCode::config: return MLMKIT_ERR_CONFIG;
    case ErrorCode::input: return MLMKIT_ERR_INPUT;
    case ErrorCode::format: return MLMKIT_ERR_FORMAT;
    case ErrorCode::corrupt: return MLMKIT_ERR_CORRUPT;
    case ErrorCode::selection: return MLMKIT_ERR_SELECTION;
    case ErrorCode::runtime: return MLMKIT_ERR_RUNTIME;
  }
  return MLMKIT_ERR_UNKNOWN;
}

template <typename Fn>
mlmkit_status guarded(Fn&& body) {
  try {
    body();
    return MLMKIT_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MLMKIT_ERR_RUNTIME;
  } catch (...) {
    g_last_error = "unknown error";
    return MLMKIT_ERR_UNKNOWN;
  }
}

void require(bool ok, const char* what) {
  if (!ok) {
    fail(ErrorCode::invalid_argument, what);
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

void set_out_string(char** out, const std::string& s) {
  require(out != nullptr, "output string pointer is null");
  *out = copy_string(s);
}

}  // namespace

struct mlmkit_tokenizer {
  bpe::TokenizerModel model;
  bpe::Encoder encoder;

  explicit mlmkit_tokenizer(bpe::TokenizerModel m)
      : model(std::move(m)), encoder(model) {}
};

struct mlmkit_encoding {
  bpe::Encoded data;
};

extern "C" {

const char* mlmkit_status_name(mlmkit_status status) {
  switch (status) {
    case MLMKIT_OK: return "ok";
    case MLMKIT_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case MLMKIT_ERR_IO: return "io";
    case MLMKIT_ERR_PARSE: return "parse";
    case MLMKIT_ERR_CONFIG: return "config";
    case MLMKIT_ERR_INPUT: return "input";
    case MLMKIT_ERR_FORMAT: return "format";
    case MLMKIT_ERR_CORRUPT: return "corrupt";
    case MLMKIT_ERR_SELECTION: return "selection";
    case MLMKIT_ERR_RUNTIME: return "runtime";
    case MLMKIT_ERR_UNKNOWN: return "unknown";
  }
  return "unknown";
}

const char* mlmkit_last_error(void) { return g_last_error.c_str(); }

void mlmkit_string_free(char* s) { delete[] s; }

mlmkit_status mlmkit_version_json(char** out_json) {
  return guarded([&] { set_out_string(out_json, pipeline::version_info().dump()); });
}

mlmkit_status mlmkit_defaults_json(char** out_json) {
  return guarded([&] { set_out_string(out_json, pipeline::defaults_json().dump()); });
}

mlmkit_status mlmkit_tokenizer_train(const char* const* jsonl_paths, size_t n_paths,
                                     uint32_t vocab_size, mlmkit_tokenizer** out) {
  return guarded([&] {
    require(jsonl_paths != nullptr && n_paths > 0, "at least one input path is required");
    require(out != nullptr, "output handle pointer is null");
    std::vector<std::string> paths(jsonl_paths, jsonl_paths + n_paths);
    corpus::JsonlChain chain(paths, "train");
    corpus::JsonlDocument doc;
    auto source = [&](std::string& text) {
      if (!chain.next(doc)) return false;
      text = doc.rec.text;
      return true;
    };
    *out = new mlmkit_tokenizer(bpe::train_bpe(source, vocab_size));
  });
}

mlmkit_status mlmkit_tokenizer_load(const char* dir, mlmkit_tokenizer** out) {
  return guarded([&] {
    require(dir != nullptr, "dir is null");
    require(out != nullptr, "output handle pointer is null");
    *out = new mlmkit_tokenizer(bpe::load_model(dir));
  });
}

mlmkit_status mlmkit_tokenizer_save(const mlmkit_tokenizer* tok, const char* dir) {
  return guarded([&] {
    require(tok != nullptr, "tokenizer handle is null");
    require(dir != nullptr, "dir is null");
    bpe::save_model(tok->model, dir);
  });
}

void mlmkit_tokenizer_free(mlmkit_tokenizer* tok) { delete tok; }

mlmkit_status mlmkit_tokenizer_vocab_size(const mlmkit_tokenizer* tok, uint32_t* out_size) {
  return guarded([&] {
    require(tok != nullptr, "tokenizer handle is null");
    require(out_size != nullptr, "output pointer is null");
    *out_size = tok->model.vocab_size();
  });
}

mlmkit_status mlmkit_tokenizer_encode(mlmkit_tokenizer* tok, const char* text, size_t len,
                                      mlmkit_encoding** out) {
  return guarded([&] {
    require(tok != nullptr, "tokenizer handle is null");
    require(text != nullptr || len == 0, "text is null");
    require(out != nullptr, "output handle pointer is null");
    auto* enc = new mlmkit_encoding;
    enc->data = tok->encoder.encode(std::string_view(text, len));
    *out = enc;
  });
}

size_t mlmkit_encoding_size(const mlmkit_encoding* enc) {
  return enc ? enc->data.ids.size() : 0;
}

const uint32_t* mlmkit_encoding_ids(const mlmkit_encoding* enc) {
  return enc ? enc->data.ids.data() : nullptr;
}

const uint8_t* mlmkit_encoding_word_start(const mlmkit_encoding* enc) {
  return enc ? enc->data.word_start.data() : nullptr;
}

void mlmkit_encoding_free(mlmkit_encoding* enc) { delete enc; }

mlmkit_status mlmkit_tokenizer_decode(const mlmkit_tokenizer* tok, const uint32_t* ids,
                                      size_t n_ids, int keep_specials, char** out_text,
                                      size_t* out_len) {
  return guarded([&] {
    require(tok != nullptr, "tokenizer handle is null");
    require(ids != nullptr || n_ids == 0, "ids is null");
    require(out_text != nullptr, "output string pointer is null");
    std::string text =
        tok->encoder.decode(std::span<const uint32_t>(ids, n_ids), keep_specials != 0);
    if (out_len) *out_len = text.size();
    *out_text = copy_string(text);
  });
}

mlmkit_status mlmkit_corpus_validate(const char* manifest_path, char** out_report_json) {
  return guarded([&] {
    require(manifest_path != nullptr, "manifest_path is null");
    auto manifest = corpus::CorpusManifest::load(manifest_path);
    auto report = corpus::validate_manifest(manifest);
    set_out_string(out_report_json, report.to_json().dump());
    if (!report.ok) {
      fail(ErrorCode::input, "manifest validation failed (see report)");
    }
  });
}

mlmkit_status mlmkit_corpus_dedup(const char* manifest_path, const char* out_dir,
                                  char** out_summary_json) {
  return guarded([&] {
    require(manifest_path != nullptr, "manifest_path is null");
    require(out_dir != nullptr, "out_dir is null");
    auto manifest = corpus::CorpusManifest::load(manifest_path);
    ensure_dir(out_dir);
    nlohmann::json summary = nlohmann::json::array();
    for (const corpus::ManifestEntry& entry : manifest.entries) {
      const std::string out_path =
          (std::filesystem::path(out_dir) / (entry.name + ".jsonl")).string();
      if (entry.dedup) {
        corpus::DedupCounts counts = corpus::dedup_jsonl(entry.paths, entry.name, out_path);
        summary.push_back({{"name", entry.name},
                           {"dedup", true},
                           {"kept", counts.kept},
                           {"dropped", counts.dropped},
                           {"output", out_path}});
      } else {
        std::string all;
        for (const std::string& p : entry.paths) all += read_text_file(p);
        write_text_file(out_path, all);
        summary.push_back({{"name", entry.name}, {"dedup", false}, {"output", out_path}});
      }
    }
    set_out_string(out_summary_json, summary.dump());
  });
}

mlmkit_status mlmkit_corpus_shuffle(const char* manifest_path, uint64_t seed,
                                    const char* out_path, char** out_summary_json) {
  return guarded([&] {
    require(manifest_path != nullptr, "manifest_path is null");
    require(out_path != nullptr, "out_path is null");
    auto manifest = corpus::CorpusManifest::load(manifest_path);
    std::vector<std::pair<std::string, std::string>> path_sources;
    for (const corpus::ManifestEntry& entry : manifest.entries) {
      for (const std::string& p : entry.paths) {
        path_sources.emplace_back(p, entry.name);
      }
    }
    const std::string tmp_dir = std::string(out_path) + ".buckets";
    uint64_t total = corpus::shuffle_jsonl(path_sources, seed, out_path, tmp_dir);
    std::error_code ec;
    std::filesystem::remove_all(tmp_dir, ec);
    nlohmann::json summary = {{"documents", total}, {"seed", seed}, {"output", out_path}};
    set_out_string(out_summary_json, summary.dump());
  });
}

mlmkit_status mlmkit_corpus_stats(const char* manifest_path, char** out_stats_json) {
  return guarded([&] {
    require(manifest_path != nullptr, "manifest_path is null");
    auto manifest = corpus::CorpusManifest::load(manifest_path);
    nlohmann::json entries = nlohmann::json::array();
    corpus::CorpusStats total;
    for (const corpus::ManifestEntry& entry : manifest.entries) {
      corpus::CorpusStats stats;
      corpus::JsonlChain chain(entry.paths, entry.name);
      corpus::JsonlDocument doc;
      while (chain.next(doc)) {
        stats.add_text_bytes(doc.rec.text.size());
      }
      total.merge(stats);
      entries.push_back({{"name", entry.name},
                         {"documents", stats.documents},
                         {"bytes", stats.bytes},
                         {"size_gb", corpus::bytes_to_gb(stats.bytes)},
                         {"mean_doc_len", stats.mean_doc_len()}});
    }
    nlohmann::json j = {{"entries", entries},
                        {"documents", total.documents},
                        {"bytes", total.bytes},
                        {"size_gb", corpus::bytes_to_gb(total.bytes)},
                        {"mean_doc_len", total.mean_doc_len()}};
    set_out_string(out_stats_json, j.dump());
  });
}

mlmkit_status mlmkit_pack(const char* manifest_path, const char* model_dir,
                          const char* out_dir, uint64_t max_per_shard,
                          char** out_summary_json) {
  return guarded([&] {
    require(manifest_path != nullptr, "manifest_path is null");
    require(model_dir != nullptr, "model_dir is null");
    require(out_dir != nullptr, "out_dir is null");
    auto manifest = corpus::CorpusManifest::load(manifest_path);
    bpe::TokenizerModel model = bpe::load_model(model_dir);
    bpe::Encoder encoder(model);
    pack::ShardWriter writer(out_dir, model.vocab_size(), max_per_shard);
    pack::Packer packer(model.specials,
                        [&](pack::PackedSequence&& seq) { writer.add(seq); });
    for (const corpus::ManifestEntry& entry : manifest.entries) {
      corpus::JsonlChain chain(entry.paths, entry.name);
      corpus::JsonlDocument doc;
      while (chain.next(doc)) {
        pack::Segmentation seg = pack::segment_sentences(doc.rec.text);
        for (const pack::Sentence& sentence : seg.sentences) {
          packer.add_sentence(encoder.encode(sentence.lead + sentence.text));
        }
        packer.end_document();
      }
    }
    packer.finish();
    std::vector<std::string> files = writer.finish();
    const pack::PackStats& stats = packer.stats();
    nlohmann::json j = {{"sentences", stats.sentences_in},
                        {"tokens", stats.tokens_in},
                        {"sequences", stats.sequences_out},
                        {"hard_split_sentences", stats.hard_split_sentences},
                        {"shards", files}};
    set_out_string(out_summary_json, j.dump());
  });
}

mlmkit_status mlmkit_shards_inspect(const char* shard_path, char** out_json) {
  return guarded([&] {
    require(shard_path != nullptr, "shard_path is null");
    set_out_string(out_json, pack::inspect_shard(shard_path).dump());
  });
}

mlmkit_status mlmkit_mask_run(const char* shard_dir, const char* policy_path, uint64_t seed,
                              uint64_t epoch, const char* out_dir, char** out_stats_json) {
  return guarded([&] {
    require(shard_dir != nullptr, "shard_dir is null");
    mask::MaskPolicy policy =
        policy_path != nullptr ? mask::MaskPolicy::load(policy_path) : mask::MaskPolicy{};
    policy.validate();

    std::vector<std::string> shards = pack::list_shards(shard_dir);
    if (shards.empty()) {
      fail(ErrorCode::input, std::string("no shard files in: ") + shard_dir);
    }
    if (out_dir != nullptr) ensure_dir(out_dir);

    mask::MaskStats stats;
    uint64_t index = 0;
    for (const std::string& path : shards) {
      pack::ShardReader reader(path);
      std::vector<pack::PackedSequence> seqs;
      pack::PackedSequence seq;
      while (reader.next(seq)) seqs.push_back(seq);
      std::vector<mask::MaskedSequence> batch =
          mask::mask_batch(seqs, policy, reader.header().vocab_size, seed, epoch,
                           /*threads=*/1, index);
      for (size_t i = 0; i < seqs.size(); ++i) {
        stats.add(seqs[i], batch[i]);
      }
      if (out_dir != nullptr) {
        std::string name = std::filesystem::path(path).stem().string() + ".gmsk";
        mask::write_masked_file((std::filesystem::path(out_dir) / name).string(), batch,
                                reader.header().vocab_size, seed, epoch,
                                policy.ignore_sentinel);
      }
      index += seqs.size();
    }
    nlohmann::json j = stats.to_json();
    j["seed"] = seed;
    j["epoch"] = epoch;
    set_out_string(out_stats_json, j.dump());
  });
}

mlmkit_status mlmkit_schedule_lr_at(uint64_t warmup_steps, double peak_lr, uint64_t total_steps,
                                    double end_lr, double decay_power, uint64_t step,
                                    double* out_lr) {
  return guarded([&] {
    require(out_lr != nullptr, "output pointer is null");
    sched::LrSchedule s{warmup_steps, peak_lr, total_steps, end_lr, decay_power};
    s.validate();
    *out_lr = sched::lr_at(s, step);
  });
}

mlmkit_status mlmkit_schedule_dump(uint64_t warmup_steps, double peak_lr, uint64_t total_steps,
                                   double end_lr, double decay_power, uint64_t stride,
                                   char** out_csv) {
  return guarded([&] {
    sched::LrSchedule s{warmup_steps, peak_lr, total_steps, end_lr, decay_power};
    set_out_string(out_csv, sched::schedule_csv(s, stride));
  });
}

mlmkit_status mlmkit_metrics_eval(const char* kind, const char* gold_path,
                                  const char* pred_path, const char* average,
                                  char** out_report_json) {
  return guarded([&] {
    require(kind != nullptr, "kind is null");
    require(gold_path != nullptr, "gold_path is null");
    metrics::EvalReport report =
        metrics::eval_files(kind, gold_path, pred_path ? pred_path : "",
                            average ? average : "");
    set_out_string(out_report_json, report.to_json().dump());
  });
}

namespace {

nlohmann::json run_to_json(const grid::GridRun& run) {
  nlohmann::json j = {{"run_id", run.run_id},
                      {"lr", run.lr},
                      {"batch_size", run.batch_size},
                      {"status", grid::run_status_name(run.status)}};
  if (!run.metric.empty()) j["metric"] = run.metric;
  if (run.validation) j["validation"] = *run.validation;
  if (run.test) j["test"] = *run.test;
  return j;
}

}  // namespace

mlmkit_status mlmkit_grid_run(const char* task, const char* config_path,
                              const char* trainer_template, uint32_t max_parallel,
                              uint64_t split_seed, const char* grid_dir,
                              char** out_summary_json) {
  return guarded([&] {
    require(task != nullptr, "task is null");
    require(trainer_template != nullptr, "trainer_template is null");
    require(grid_dir != nullptr, "grid_dir is null");
    grid::GridConfig config =
        config_path != nullptr ? grid::GridConfig::load(config_path) : grid::GridConfig{};
    config.task = task;
    grid::RunnerOptions options;
    options.trainer_template = trainer_template;
    options.max_parallel = max_parallel;
    options.grid_dir = grid_dir;
    options.split_seed = split_seed;
    std::vector<grid::GridRun> runs = grid::run_grid(config, options);

    nlohmann::json arr = nlohmann::json::array();
    size_t done = 0;
    size_t failed = 0;
    for (const grid::GridRun& run : runs) {
      arr.push_back(run_to_json(run));
      if (run.status == grid::RunStatus::done) ++done;
      if (run.status == grid::RunStatus::failed) ++failed;
    }
    nlohmann::json j = {{"task", task}, {"runs", arr}, {"done", done}, {"failed", failed}};
    set_out_string(out_summary_json, j.dump());
    if (failed > 0) {
      fail(ErrorCode::runtime, std::to_string(failed) + " grid runs failed (see summary)");
    }
  });
}

mlmkit_status mlmkit_grid_best(const char* grid_dir, char** out_json) {
  return guarded([&] {
    require(grid_dir != nullptr, "grid_dir is null");
    std::string task;
    std::vector<grid::GridRun> runs = grid::load_grid_state(grid_dir, nullptr, &task);
    const grid::GridRun& best = grid::select_best(runs);
    nlohmann::json j = run_to_json(best);
    j["task"] = task;
    set_out_string(out_json, j.dump());
  });
}

mlmkit_status mlmkit_grid_table(const char* const* grid_dirs, size_t n_dirs, int as_csv,
                                char** out_table) {
  return guarded([&] {
    require(grid_dirs != nullptr || n_dirs == 0, "grid_dirs is null");
    std::vector<grid::TaskResult> results;
    for (size_t i = 0; i < n_dirs; ++i) {
      std::string task;
      std::vector<grid::GridRun> runs = grid::load_grid_state(grid_dirs[i], nullptr, &task);
      results.push_back(grid::TaskResult{task, grid::select_best(runs)});
    }
    set_out_string(out_table, as_csv ? grid::report_table_csv(results)
                                     : grid::report_table_text(results));
  });
}

mlmkit_status mlmkit_pipeline_run(const char* config_path, const char* work_dir,
                                  char** out_manifest_json) {
  return guarded([&] {
    require(config_path != nullptr, "config_path is null");
    pipeline::PipelineConfig config = pipeline::PipelineConfig::load(config_path);
    pipeline::RunManifest manifest =
        pipeline::run_pipeline(config, work_dir ? work_dir : "");
    set_out_string(out_manifest_json, manifest.to_json().dump());
    if (!manifest.ok) {
      fail(ErrorCode::runtime, "pipeline failed at stage: " + manifest.failed_stage);
    }
  });
}

}  // extern "C"
