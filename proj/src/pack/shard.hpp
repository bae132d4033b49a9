#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "pack/packer.hpp"

namespace mlmkit::pack {

inline constexpr char kShardMagic[4] = {'G', 'S', 'H', 'D'};
inline constexpr uint32_t kShardFormatVersion = 1;
inline constexpr const char* kShardExtension = ".gshd";

// Little-endian layout:
//   magic[4] | u32 version | u32 vocab_size | u32 sequence_length | u64 count
//   ids        count x sequence_length x u32   (fixed-stride rows)
//   word_start count x sequence_length bits, LSB-first within each byte
//   n_real     count x u16
struct ShardHeader {
  uint32_t version = kShardFormatVersion;
  uint32_t vocab_size = 0;
  uint32_t sequence_length = kSequenceLength;
  uint64_t count = 0;
};

class ShardWriter {
 public:
  ShardWriter(std::string dir, uint32_t vocab_size, uint64_t max_per_shard);

  void add(const PackedSequence& seq);

  // Closes the open file and returns the shard paths in order.
  std::vector<std::string> finish();

 private:
  void open_next();
  void close_current();

  std::string dir_;
  uint32_t vocab_size_;
  uint64_t max_per_shard_;
  uint64_t shard_index_ = 0;
  uint64_t in_current_ = 0;
  std::ofstream out_;
  std::string current_path_;
  std::vector<uint8_t> word_start_block_;
  std::vector<uint16_t> n_real_block_;
  std::vector<std::string> files_;
};

class ShardReader {
 public:
  explicit ShardReader(const std::string& path);

  const ShardHeader& header() const { return header_; }
  bool next(PackedSequence& out);

 private:
  std::string path_;
  std::ifstream in_;
  ShardHeader header_;
  std::vector<uint8_t> word_start_block_;
  std::vector<uint16_t> n_real_block_;
  uint64_t cursor_ = 0;
};

// Header + basic stats without touching every row.
nlohmann::json inspect_shard(const std::string& path);

// *.gshd files in lexicographic order.
std::vector<std::string> list_shards(const std::string& dir);

std::vector<PackedSequence> read_all_shards(const std::string& dir);

}  // namespace mlmkit::pack
