#include "pack/shard.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>

#include "util/error.hpp"
#include "util/fs.hpp"

namespace mlmkit::pack {

namespace fs = std::filesystem;

namespace {

constexpr size_t kHeaderBytes = 4 + 4 + 4 + 4 + 8;
constexpr size_t kBitmapRowBytes = kSequenceLength / 8;

template <typename T>
void write_pod(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_pod(std::ifstream& in, T& value) {
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
}

std::string shard_name(uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "shard-%06llu", static_cast<unsigned long long>(index));
  return std::string(buf) + kShardExtension;
}

uint64_t row_bytes() { return kSequenceLength * sizeof(uint32_t); }

uint64_t expected_file_size(uint64_t count) {
  return kHeaderBytes + count * (row_bytes() + kBitmapRowBytes + sizeof(uint16_t));
}

}  // namespace

ShardWriter::ShardWriter(std::string dir, uint32_t vocab_size, uint64_t max_per_shard)
    : dir_(std::move(dir)), vocab_size_(vocab_size), max_per_shard_(max_per_shard) {
  if (max_per_shard_ == 0) {
    fail(ErrorCode::invalid_argument, "max_per_shard must be >= 1");
  }
  ensure_dir(dir_);
}

void ShardWriter::open_next() {
  current_path_ = (fs::path(dir_) / shard_name(shard_index_)).string();
  out_.open(current_path_, std::ios::binary | std::ios::trunc);
  if (!out_) {
    fail(ErrorCode::io, "cannot open shard for writing: " + current_path_);
  }
  out_.write(kShardMagic, 4);
  write_pod(out_, kShardFormatVersion);
  write_pod(out_, vocab_size_);
  write_pod(out_, kSequenceLength);
  uint64_t count_placeholder = 0;
  write_pod(out_, count_placeholder);
  in_current_ = 0;
  word_start_block_.clear();
  n_real_block_.clear();
}

void ShardWriter::close_current() {
  if (!out_.is_open()) return;
  out_.write(reinterpret_cast<const char*>(word_start_block_.data()),
             static_cast<std::streamsize>(word_start_block_.size()));
  out_.write(reinterpret_cast<const char*>(n_real_block_.data()),
             static_cast<std::streamsize>(n_real_block_.size() * sizeof(uint16_t)));
  out_.seekp(16);
  write_pod(out_, in_current_);
  out_.flush();
  if (!out_) {
    fail(ErrorCode::io, "write failed: " + current_path_);
  }
  out_.close();
  files_.push_back(current_path_);
  ++shard_index_;
}

void ShardWriter::add(const PackedSequence& seq) {
  if (seq.ids.size() != kSequenceLength || seq.word_start.size() != kSequenceLength) {
    fail(ErrorCode::input, "packed sequence must have exactly " +
                               std::to_string(kSequenceLength) + " positions");
  }
  if (!out_.is_open()) open_next();

  out_.write(reinterpret_cast<const char*>(seq.ids.data()),
             static_cast<std::streamsize>(row_bytes()));
  uint8_t row[kBitmapRowBytes] = {0};
  for (size_t i = 0; i < kSequenceLength; ++i) {
    if (seq.word_start[i]) {
      row[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
    }
  }
  word_start_block_.insert(word_start_block_.end(), row, row + kBitmapRowBytes);
  n_real_block_.push_back(seq.n_real);
  ++in_current_;
  if (in_current_ >= max_per_shard_) {
    close_current();
  }
}

std::vector<std::string> ShardWriter::finish() {
  close_current();
  return files_;
}

ShardReader::ShardReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
  if (!in_) {
    fail(ErrorCode::io, "cannot open shard: " + path_);
  }
  char magic[4];
  in_.read(magic, 4);
  if (!in_ || std::memcmp(magic, kShardMagic, 4) != 0) {
    fail(ErrorCode::format, path_ + ": bad magic, not a shard file");
  }
  read_pod(in_, header_.version);
  read_pod(in_, header_.vocab_size);
  read_pod(in_, header_.sequence_length);
  read_pod(in_, header_.count);
  if (!in_) {
    fail(ErrorCode::corrupt, path_ + ": truncated header");
  }
  if (header_.version != kShardFormatVersion) {
    fail(ErrorCode::format, path_ + ": unsupported shard version " +
                                std::to_string(header_.version));
  }
  if (header_.sequence_length != kSequenceLength) {
    fail(ErrorCode::format, path_ + ": sequence_length must be " +
                                std::to_string(kSequenceLength));
  }

  std::error_code ec;
  uint64_t size = fs::file_size(path_, ec);
  uint64_t expected = expected_file_size(header_.count);
  if (ec || size != expected) {
    fail(ErrorCode::corrupt, path_ + ": file size " + std::to_string(ec ? 0 : size) +
                                 " does not match expected " + std::to_string(expected) +
                                 " for count " + std::to_string(header_.count));
  }

  // bitmap and index blocks sit after the id matrix; load them up front
  word_start_block_.resize(header_.count * kBitmapRowBytes);
  n_real_block_.resize(header_.count);
  in_.seekg(static_cast<std::streamoff>(kHeaderBytes + header_.count * row_bytes()));
  in_.read(reinterpret_cast<char*>(word_start_block_.data()),
           static_cast<std::streamsize>(word_start_block_.size()));
  in_.read(reinterpret_cast<char*>(n_real_block_.data()),
           static_cast<std::streamsize>(n_real_block_.size() * sizeof(uint16_t)));
  if (!in_) {
    fail(ErrorCode::corrupt, path_ + ": truncated at offset " +
                                 std::to_string(kHeaderBytes + header_.count * row_bytes()));
  }
  in_.seekg(static_cast<std::streamoff>(kHeaderBytes));
}

bool ShardReader::next(PackedSequence& out) {
  if (cursor_ >= header_.count) return false;
  out.ids.resize(kSequenceLength);
  in_.read(reinterpret_cast<char*>(out.ids.data()), static_cast<std::streamsize>(row_bytes()));
  if (!in_) {
    fail(ErrorCode::corrupt, path_ + ": truncated at row " + std::to_string(cursor_));
  }
  out.word_start.assign(kSequenceLength, 0);
  const uint8_t* row = word_start_block_.data() + cursor_ * kBitmapRowBytes;
  for (size_t i = 0; i < kSequenceLength; ++i) {
    out.word_start[i] = (row[i / 8] >> (i % 8)) & 1u;
  }
  out.n_real = n_real_block_[cursor_];
  ++cursor_;
  return true;
}

nlohmann::json inspect_shard(const std::string& path) {
  ShardReader reader(path);
  const ShardHeader& h = reader.header();

  uint64_t real_tokens = 0;
  uint64_t word_starts = 0;
  PackedSequence seq;
  while (reader.next(seq)) {
    real_tokens += seq.n_real;
    for (uint8_t w : seq.word_start) word_starts += w;
  }
  nlohmann::json j;
  j["path"] = path;
  j["format_version"] = h.version;
  j["vocab_size"] = h.vocab_size;
  j["sequence_length"] = h.sequence_length;
  j["sequences"] = h.count;
  j["real_tokens"] = real_tokens;
  j["payload_tokens"] = real_tokens >= 2 * h.count ? real_tokens - 2 * h.count : 0;
  j["word_starts"] = word_starts;
  double denom = static_cast<double>(h.count) * h.sequence_length;
  j["pad_fraction"] =
      h.count == 0 ? 0.0 : 1.0 - static_cast<double>(real_tokens) / denom;
  return j;
}

std::vector<std::string> list_shards(const std::string& dir) {
  std::vector<std::string> files;
  std::error_code ec;
  for (fs::directory_iterator it(dir, ec); !ec && it != fs::directory_iterator();
       it.increment(ec)) {
    if (it->is_regular_file() && it->path().extension() == kShardExtension) {
      files.push_back(it->path().string());
    }
  }
  if (ec) {
    fail(ErrorCode::io, "cannot list shard directory: " + dir);
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<PackedSequence> read_all_shards(const std::string& dir) {
  std::vector<PackedSequence> out;
  for (const std::string& path : list_shards(dir)) {
    ShardReader reader(path);
    PackedSequence seq;
    while (reader.next(seq)) {
      out.push_back(seq);
    }
  }
  return out;
}

}  // namespace mlmkit::pack
