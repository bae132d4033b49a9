#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mlmkit/mlmkit.h"

namespace {

bool g_log_json = false;

void log_line(const char* level, const std::string& msg) {
  if (g_log_json) {
    nlohmann::json j = {{"level", level}, {"msg", msg}};
    std::cerr << j.dump() << "\n";
  } else {
    std::cerr << level << ": " << msg << "\n";
  }
}

// Prints the captured output (when any) and exits non-zero on failure.
int finish(mlmkit_status status, char* out) {
  if (out != nullptr) {
    std::cout << out << "\n";
    mlmkit_string_free(out);
  }
  if (status != MLMKIT_OK) {
    log_line("error",
             std::string(mlmkit_status_name(status)) + ": " + mlmkit_last_error());
    return 1;
  }
  return 0;
}

std::istream& open_input(std::ifstream& file, const std::string& path) {
  if (path.empty()) {
    return std::cin;
  }
  file.open(path);
  if (!file) {
    log_line("error", "cannot open input: " + path);
    std::exit(1);
  }
  return file;
}

int cmd_tok_train(const std::vector<std::string>& inputs, uint32_t vocab_size,
                  const std::string& out_dir) {
  std::vector<const char*> paths;
  for (const auto& p : inputs) paths.push_back(p.c_str());
  mlmkit_tokenizer* tok = nullptr;
  mlmkit_status status =
      mlmkit_tokenizer_train(paths.data(), paths.size(), vocab_size, &tok);
  if (status != MLMKIT_OK) return finish(status, nullptr);
  status = mlmkit_tokenizer_save(tok, out_dir.c_str());
  uint32_t actual = 0;
  if (status == MLMKIT_OK) {
    mlmkit_tokenizer_vocab_size(tok, &actual);
    nlohmann::json j = {{"model_dir", out_dir},
                        {"vocab_size", actual},
                        {"requested_vocab_size", vocab_size}};
    std::cout << j.dump() << "\n";
  }
  mlmkit_tokenizer_free(tok);
  return finish(status, nullptr);
}

int cmd_tok_encode(const std::string& model_dir, const std::string& input_path) {
  mlmkit_tokenizer* tok = nullptr;
  mlmkit_status status = mlmkit_tokenizer_load(model_dir.c_str(), &tok);
  if (status != MLMKIT_OK) return finish(status, nullptr);

  std::ifstream file;
  std::istream& in = open_input(file, input_path);
  std::string line;
  int rc = 0;
  while (std::getline(in, line)) {
    mlmkit_encoding* enc = nullptr;
    status = mlmkit_tokenizer_encode(tok, line.data(), line.size(), &enc);
    if (status != MLMKIT_OK) {
      rc = finish(status, nullptr);
      break;
    }
    size_t n = mlmkit_encoding_size(enc);
    const uint32_t* ids = mlmkit_encoding_ids(enc);
    const uint8_t* starts = mlmkit_encoding_word_start(enc);
    nlohmann::json j;
    j["ids"] = std::vector<uint32_t>(ids, ids + n);
    j["word_start"] = std::vector<bool>(starts, starts + n);
    std::cout << j.dump() << "\n";
    mlmkit_encoding_free(enc);
  }
  mlmkit_tokenizer_free(tok);
  return rc;
}

int cmd_tok_decode(const std::string& model_dir, const std::string& input_path,
                   bool keep_specials) {
  mlmkit_tokenizer* tok = nullptr;
  mlmkit_status status = mlmkit_tokenizer_load(model_dir.c_str(), &tok);
  if (status != MLMKIT_OK) return finish(status, nullptr);

  std::ifstream file;
  std::istream& in = open_input(file, input_path);
  std::string line;
  int rc = 0;
  while (std::getline(in, line)) {
    std::vector<uint32_t> ids;
    std::istringstream ss(line);
    uint64_t id;
    while (ss >> id) ids.push_back(static_cast<uint32_t>(id));
    char* text = nullptr;
    size_t len = 0;
    status = mlmkit_tokenizer_decode(tok, ids.data(), ids.size(), keep_specials ? 1 : 0,
                                     &text, &len);
    if (status != MLMKIT_OK) {
      rc = finish(status, nullptr);
      break;
    }
    std::cout.write(text, static_cast<std::streamsize>(len));
    std::cout << "\n";
    mlmkit_string_free(text);
  }
  mlmkit_tokenizer_free(tok);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corpus-to-pretraining data toolkit"};
  app.require_subcommand(1);
  app.add_flag("--log-json", g_log_json, "structured logs on stderr");

  int rc = 0;
  auto run = [&rc](auto fn) {
    return [&rc, fn]() { rc = fn(); };
  };

  // tok
  auto* tok = app.add_subcommand("tok", "byte-level BPE tokenizer");
  tok->require_subcommand(1);
  {
    auto* train = tok->add_subcommand("train", "train a tokenizer on JSONL documents");
    auto inputs = std::make_shared<std::vector<std::string>>();
    auto vocab = std::make_shared<uint32_t>(0);
    auto out = std::make_shared<std::string>();
    train->add_option("--input", *inputs, "JSONL document files")->required()->expected(-1);
    train->add_option("--vocab-size", *vocab, "target vocabulary size")->required();
    train->add_option("--out", *out, "model output directory")->required();
    train->callback(run([=] { return cmd_tok_train(*inputs, *vocab, *out); }));

    auto* encode = tok->add_subcommand("encode", "encode text lines to ids");
    auto model = std::make_shared<std::string>();
    auto input = std::make_shared<std::string>();
    encode->add_option("--model", *model, "model directory")->required();
    encode->add_option("--input", *input, "text file, one line per record (default stdin)");
    encode->callback(run([=] { return cmd_tok_encode(*model, *input); }));

    auto* decode = tok->add_subcommand("decode", "decode id lines back to text");
    auto dmodel = std::make_shared<std::string>();
    auto dinput = std::make_shared<std::string>();
    auto keep = std::make_shared<bool>(false);
    decode->add_option("--model", *dmodel, "model directory")->required();
    decode->add_option("--input", *dinput, "id file, space-separated per line (default stdin)");
    decode->add_flag("--keep-specials", *keep, "keep special tokens in the output");
    decode->callback(run([=] { return cmd_tok_decode(*dmodel, *dinput, *keep); }));
  }

  // corpus
  auto* corpus = app.add_subcommand("corpus", "manifest-driven corpus operations");
  corpus->require_subcommand(1);
  {
    auto manifest = std::make_shared<std::string>();
    auto* validate = corpus->add_subcommand("validate", "check paths and expected counts");
    validate->add_option("--manifest", *manifest, "manifest file")->required();
    validate->callback(run([=] {
      char* out = nullptr;
      return finish(mlmkit_corpus_validate(manifest->c_str(), &out), out);
    }));

    auto dmanifest = std::make_shared<std::string>();
    auto ddir = std::make_shared<std::string>();
    auto* dedup = corpus->add_subcommand("dedup", "deduplicate flagged entries");
    dedup->add_option("--manifest", *dmanifest, "manifest file")->required();
    dedup->add_option("--out", *ddir, "output directory")->required();
    dedup->callback(run([=] {
      char* out = nullptr;
      return finish(mlmkit_corpus_dedup(dmanifest->c_str(), ddir->c_str(), &out), out);
    }));

    auto smanifest = std::make_shared<std::string>();
    auto sseed = std::make_shared<uint64_t>(0);
    auto sout = std::make_shared<std::string>();
    auto* shuffle = corpus->add_subcommand("shuffle", "deterministic seeded shuffle");
    shuffle->add_option("--manifest", *smanifest, "manifest file")->required();
    shuffle->add_option("--seed", *sseed, "shuffle seed")->required();
    shuffle->add_option("--out", *sout, "output JSONL file")->required();
    shuffle->callback(run([=] {
      char* out = nullptr;
      return finish(mlmkit_corpus_shuffle(smanifest->c_str(), *sseed, sout->c_str(), &out),
                    out);
    }));

    auto tmanifest = std::make_shared<std::string>();
    auto* stats = corpus->add_subcommand("stats", "document and byte counts");
    stats->add_option("--manifest", *tmanifest, "manifest file")->required();
    stats->callback(run([=] {
      char* out = nullptr;
      return finish(mlmkit_corpus_stats(tmanifest->c_str(), &out), out);
    }));
  }

  // pack
  {
    auto* pack = app.add_subcommand("pack", "sentence-aligned packing into binary shards");
    auto manifest = std::make_shared<std::string>();
    auto model = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();
    auto max_per_shard = std::make_shared<uint64_t>(16384);
    pack->add_option("--manifest", *manifest, "manifest file")->required();
    pack->add_option("--model", *model, "tokenizer model directory")->required();
    pack->add_option("--out", *out_dir, "shard output directory")->required();
    pack->add_option("--max-per-shard", *max_per_shard, "sequences per shard file");
    pack->callback(run([=] {
      char* out = nullptr;
      return finish(mlmkit_pack(manifest->c_str(), model->c_str(), out_dir->c_str(),
                                *max_per_shard, &out),
                    out);
    }));
  }

  // shards
  {
    auto* shards = app.add_subcommand("shards", "shard file utilities");
    shards->require_subcommand(1);
    auto* inspect = shards->add_subcommand("inspect", "print header and stats");
    auto path = std::make_shared<std::string>();
    inspect->add_option("file", *path, "shard file")->required();
    inspect->callback(run([=] {
      char* out = nullptr;
      return finish(mlmkit_shards_inspect(path->c_str(), &out), out);
    }));
  }

  // mask
  {
    auto* mask = app.add_subcommand("mask", "dynamic whole word masking");
    auto shards = std::make_shared<std::string>();
    auto seed = std::make_shared<uint64_t>(0);
    auto epoch = std::make_shared<uint64_t>(0);
    auto policy = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();
    auto stats_only = std::make_shared<bool>(false);
    mask->add_option("--shards", *shards, "shard directory")->required();
    mask->add_option("--seed", *seed, "mask seed")->required();
    mask->add_option("--epoch", *epoch, "epoch number");
    mask->add_option("--policy", *policy, "mask policy JSON file");
    mask->add_option("--out", *out_dir, "masked batch output directory");
    mask->add_flag("--stats-only", *stats_only, "compute statistics without writing batches");
    mask->callback(run([=] {
      char* out = nullptr;
      const char* dir =
          (*stats_only || out_dir->empty()) ? nullptr : out_dir->c_str();
      const char* pol = policy->empty() ? nullptr : policy->c_str();
      return finish(mlmkit_mask_run(shards->c_str(), pol, *seed, *epoch, dir, &out), out);
    }));
  }

  // schedule
  {
    auto* schedule = app.add_subcommand("schedule", "learning-rate schedule");
    schedule->require_subcommand(1);
    auto* dump = schedule->add_subcommand("dump", "CSV of (step, lr) rows");
    auto warmup = std::make_shared<uint64_t>(10000);
    auto peak = std::make_shared<double>(7e-4);
    auto total = std::make_shared<uint64_t>(100000);
    auto end_lr = std::make_shared<double>(0.0);
    auto power = std::make_shared<double>(1.0);
    auto stride = std::make_shared<uint64_t>(1000);
    dump->add_option("--warmup", *warmup, "warmup steps");
    dump->add_option("--peak", *peak, "peak learning rate");
    dump->add_option("--total", *total, "total steps");
    dump->add_option("--end", *end_lr, "final learning rate");
    dump->add_option("--power", *power, "decay exponent");
    dump->add_option("--stride", *stride, "row stride");
    dump->callback(run([=] {
      char* out = nullptr;
      mlmkit_status status =
          mlmkit_schedule_dump(*warmup, *peak, *total, *end_lr, *power, *stride, &out);
      if (status == MLMKIT_OK && out != nullptr) {
        std::cout << out;  // CSV already ends with a newline
        mlmkit_string_free(out);
        out = nullptr;
      }
      return finish(status, out);
    }));
  }

  // metrics
  {
    auto* metrics = app.add_subcommand("metrics", "evaluation measures");
    metrics->require_subcommand(1);
    for (const char* kind : {"ner", "nested", "cls", "nli", "ppl"}) {
      auto* sub = metrics->add_subcommand(kind, std::string("compute ") + kind + " report");
      auto gold = std::make_shared<std::string>();
      auto pred = std::make_shared<std::string>();
      auto average = std::make_shared<std::string>();
      sub->add_option("--gold", *gold, "gold file (losses file for ppl)")->required();
      sub->add_option("--pred", *pred, "prediction file");
      sub->add_option("--average", *average, "macro or micro (cls only)");
      std::string kind_str = kind;
      sub->callback(run([=] {
        char* out = nullptr;
        return finish(mlmkit_metrics_eval(kind_str.c_str(), gold->c_str(),
                                          pred->empty() ? nullptr : pred->c_str(),
                                          average->empty() ? nullptr : average->c_str(),
                                          &out),
                      out);
      }));
    }
  }

  // grid
  {
    auto* grid = app.add_subcommand("grid", "hyperparameter grid harness");
    grid->require_subcommand(1);

    auto* grun = grid->add_subcommand("run", "execute the grid with an external trainer");
    auto task = std::make_shared<std::string>();
    auto config = std::make_shared<std::string>();
    auto trainer = std::make_shared<std::string>();
    auto parallel = std::make_shared<uint32_t>(1);
    auto split_seed = std::make_shared<uint64_t>(0);
    auto dir = std::make_shared<std::string>();
    grun->add_option("--task", *task, "task identifier")->required();
    grun->add_option("--config", *config, "grid config JSON (default: paper grid)");
    grun->add_option("--trainer", *trainer,
                     "command template with {lr} {batch_size} {epochs} {output_dir}")
        ->required();
    grun->add_option("--max-parallel", *parallel, "concurrent runs");
    grun->add_option("--split-seed", *split_seed, "validation holdout seed");
    grun->add_option("--dir", *dir, "grid state directory")->required();
    grun->callback(run([=] {
      char* out = nullptr;
      return finish(mlmkit_grid_run(task->c_str(),
                                    config->empty() ? nullptr : config->c_str(),
                                    trainer->c_str(), *parallel, *split_seed, dir->c_str(),
                                    &out),
                    out);
    }));

    auto* gbest = grid->add_subcommand("best", "validation-selected run");
    auto bdir = std::make_shared<std::string>();
    gbest->add_option("--dir", *bdir, "grid state directory")->required();
    gbest->callback(run([=] {
      char* out = nullptr;
      return finish(mlmkit_grid_best(bdir->c_str(), &out), out);
    }));

    auto* gtable = grid->add_subcommand("table", "results table across tasks");
    auto tdirs = std::make_shared<std::vector<std::string>>();
    auto csv = std::make_shared<bool>(false);
    gtable->add_option("dirs", *tdirs, "grid state directories, one per task")
        ->required()
        ->expected(-1);
    gtable->add_flag("--csv", *csv, "emit CSV instead of aligned text");
    gtable->callback(run([=] {
      std::vector<const char*> ptrs;
      for (const auto& d : *tdirs) ptrs.push_back(d.c_str());
      char* out = nullptr;
      mlmkit_status status =
          mlmkit_grid_table(ptrs.data(), ptrs.size(), *csv ? 1 : 0, &out);
      if (status == MLMKIT_OK && out != nullptr) {
        std::cout << out;
        mlmkit_string_free(out);
        out = nullptr;
      }
      return finish(status, out);
    }));
  }

  // pipeline
  {
    auto* pipeline = app.add_subcommand("pipeline", "run the full corpus-to-shards pipeline");
    pipeline->require_subcommand(1);
    auto* prun = pipeline->add_subcommand("run", "validate, dedup, shuffle, tokenize, pack");
    auto config = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();
    prun->add_option("--config", *config, "pipeline config JSON")->required();
    prun->add_option("--out", *out_dir, "work directory override");
    prun->callback(run([=] {
      char* out = nullptr;
      return finish(mlmkit_pipeline_run(config->c_str(),
                                        out_dir->empty() ? nullptr : out_dir->c_str(), &out),
                    out);
    }));
  }

  // version
  {
    auto* version = app.add_subcommand("version", "tool and format versions");
    version->callback(run([] {
      char* out = nullptr;
      return finish(mlmkit_version_json(&out), out);
    }));
  }

  // defaults
  {
    auto* defaults = app.add_subcommand("defaults", "numeric pipeline defaults");
    defaults->callback(run([] {
      char* out = nullptr;
      return finish(mlmkit_defaults_json(&out), out);
    }));
  }

  CLI11_PARSE(app, argc, argv);
  return rc;
}
