/* mlmkit — masked-LM pretraining data toolkit, C API.
 *
 * Conventions:
 *   - every function returns mlmkit_status; MLMKIT_OK is 0
 *   - on failure, mlmkit_last_error() returns a thread-local message
 *   - strings returned through char** are owned by the caller and must be
 *     released with mlmkit_string_free()
 *   - handles are opaque; destroy with the matching *_free()
 */

#ifndef MLMKIT_H
#define MLMKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MLMKIT_API __declspec(dllexport)
#else
#define MLMKIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mlmkit_status {
  MLMKIT_OK = 0,
  MLMKIT_ERR_INVALID_ARGUMENT = 1,
  MLMKIT_ERR_IO = 2,
  MLMKIT_ERR_PARSE = 3,
  MLMKIT_ERR_CONFIG = 4,
  MLMKIT_ERR_INPUT = 5,
  MLMKIT_ERR_FORMAT = 6,
  MLMKIT_ERR_CORRUPT = 7,
  MLMKIT_ERR_SELECTION = 8,
  MLMKIT_ERR_RUNTIME = 9,
  MLMKIT_ERR_UNKNOWN = 10,
} mlmkit_status;

MLMKIT_API const char* mlmkit_status_name(mlmkit_status status);

/* Thread-local message for the most recent failure on this thread. */
MLMKIT_API const char* mlmkit_last_error(void);

MLMKIT_API void mlmkit_string_free(char* s);

/* {"tool_version", "shard_format_version", "tokenizer_format_version"} */
MLMKIT_API mlmkit_status mlmkit_version_json(char** out_json);

/* All numeric pipeline defaults as JSON. */
MLMKIT_API mlmkit_status mlmkit_defaults_json(char** out_json);

/* ---- tokenizer ------------------------------------------------------- */

typedef struct mlmkit_tokenizer mlmkit_tokenizer;
typedef struct mlmkit_encoding mlmkit_encoding;

/* Trains byte-level BPE on JSONL document files ({"id","source","text"}
 * per line). */
MLMKIT_API mlmkit_status mlmkit_tokenizer_train(const char* const* jsonl_paths, size_t n_paths,
                                                uint32_t vocab_size, mlmkit_tokenizer** out);

MLMKIT_API mlmkit_status mlmkit_tokenizer_load(const char* dir, mlmkit_tokenizer** out);
MLMKIT_API mlmkit_status mlmkit_tokenizer_save(const mlmkit_tokenizer* tok, const char* dir);
MLMKIT_API void mlmkit_tokenizer_free(mlmkit_tokenizer* tok);

MLMKIT_API mlmkit_status mlmkit_tokenizer_vocab_size(const mlmkit_tokenizer* tok,
                                                     uint32_t* out_size);

/* text need not be null-terminated; len is in bytes. */
MLMKIT_API mlmkit_status mlmkit_tokenizer_encode(mlmkit_tokenizer* tok, const char* text,
                                                 size_t len, mlmkit_encoding** out);

MLMKIT_API size_t mlmkit_encoding_size(const mlmkit_encoding* enc);
MLMKIT_API const uint32_t* mlmkit_encoding_ids(const mlmkit_encoding* enc);
/* 1 on the first token of each pretokenization unit. */
MLMKIT_API const uint8_t* mlmkit_encoding_word_start(const mlmkit_encoding* enc);
MLMKIT_API void mlmkit_encoding_free(mlmkit_encoding* enc);

/* Returns the exact input bytes of the encoded text. Special tokens are
 * stripped unless keep_specials is nonzero. */
MLMKIT_API mlmkit_status mlmkit_tokenizer_decode(const mlmkit_tokenizer* tok,
                                                 const uint32_t* ids, size_t n_ids,
                                                 int keep_specials, char** out_text,
                                                 size_t* out_len);

/* ---- corpus ---------------------------------------------------------- */

MLMKIT_API mlmkit_status mlmkit_corpus_validate(const char* manifest_path,
                                                char** out_report_json);

/* Applies exact dedup to flagged entries, copies the rest byte-identical;
 * writes one <name>.jsonl per entry under out_dir. */
MLMKIT_API mlmkit_status mlmkit_corpus_dedup(const char* manifest_path, const char* out_dir,
                                             char** out_summary_json);

MLMKIT_API mlmkit_status mlmkit_corpus_shuffle(const char* manifest_path, uint64_t seed,
                                               const char* out_path, char** out_summary_json);

MLMKIT_API mlmkit_status mlmkit_corpus_stats(const char* manifest_path, char** out_stats_json);

/* ---- packing --------------------------------------------------------- */

MLMKIT_API mlmkit_status mlmkit_pack(const char* manifest_path, const char* model_dir,
                                     const char* out_dir, uint64_t max_per_shard,
                                     char** out_summary_json);

MLMKIT_API mlmkit_status mlmkit_shards_inspect(const char* shard_path, char** out_json);

/* ---- masking --------------------------------------------------------- */

/* policy_path may be NULL for the built-in defaults; out_dir may be NULL
 * for stats-only runs. */
MLMKIT_API mlmkit_status mlmkit_mask_run(const char* shard_dir, const char* policy_path,
                                         uint64_t seed, uint64_t epoch, const char* out_dir,
                                         char** out_stats_json);

/* ---- schedule -------------------------------------------------------- */

MLMKIT_API mlmkit_status mlmkit_schedule_lr_at(uint64_t warmup_steps, double peak_lr,
                                               uint64_t total_steps, double end_lr,
                                               double decay_power, uint64_t step,
                                               double* out_lr);

MLMKIT_API mlmkit_status mlmkit_schedule_dump(uint64_t warmup_steps, double peak_lr,
                                              uint64_t total_steps, double end_lr,
                                              double decay_power, uint64_t stride,
                                              char** out_csv);

/* ---- metrics --------------------------------------------------------- */

/* kind: "ner" | "nested" | "cls" | "nli" | "ppl". pred_path and average
 * may be NULL. */
MLMKIT_API mlmkit_status mlmkit_metrics_eval(const char* kind, const char* gold_path,
                                             const char* pred_path, const char* average,
                                             char** out_report_json);

/* ---- grid ------------------------------------------------------------ */

/* config_path may be NULL for the default hyperparameter grid. */
MLMKIT_API mlmkit_status mlmkit_grid_run(const char* task, const char* config_path,
                                         const char* trainer_template, uint32_t max_parallel,
                                         uint64_t split_seed, const char* grid_dir,
                                         char** out_summary_json);

MLMKIT_API mlmkit_status mlmkit_grid_best(const char* grid_dir, char** out_json);

MLMKIT_API mlmkit_status mlmkit_grid_table(const char* const* grid_dirs, size_t n_dirs,
                                           int as_csv, char** out_table);

/* ---- pipeline -------------------------------------------------------- */

/* work_dir may be NULL to use the config's work_dir. */
MLMKIT_API mlmkit_status mlmkit_pipeline_run(const char* config_path, const char* work_dir,
                                             char** out_manifest_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MLMKIT_H */
