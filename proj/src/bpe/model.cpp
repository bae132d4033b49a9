#include "bpe/model.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bpe/byte_map.hpp"
#include "bpe/pretokenize.hpp"
#include "util/error.hpp"
#include "util/fs.hpp"

namespace mlmkit::bpe {

namespace {

constexpr const char* kVocabFile = "vocab.txt";
constexpr const char* kMergesFile = "merges.txt";

const char* special_texts[kNumSpecials] = {
    SpecialTokens::kBosText, SpecialTokens::kEosText, SpecialTokens::kPadText,
    SpecialTokens::kUnkText, SpecialTokens::kMaskText,
};

std::string escape_token(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (char c : token) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\x%02x", static_cast<unsigned char>(c));
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  return out;
}

std::string unescape_token(std::string_view text, const std::string& where) {
  std::string out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (i + 1 >= text.size()) {
      fail(ErrorCode::parse, where + ": dangling escape");
    }
    char e = text[++i];
    switch (e) {
      case '\\': out.push_back('\\'); break;
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case 'x': {
        if (i + 2 >= text.size()) {
          fail(ErrorCode::parse, where + ": truncated \\x escape");
        }
        auto hex = [&](char h) -> int {
          if (h >= '0' && h <= '9') return h - '0';
          if (h >= 'a' && h <= 'f') return 10 + h - 'a';
          if (h >= 'A' && h <= 'F') return 10 + h - 'A';
          fail(ErrorCode::parse, where + ": bad \\x escape");
        };
        int v = hex(text[i + 1]) * 16 + hex(text[i + 2]);
        i += 2;
        out.push_back(static_cast<char>(v));
        break;
      }
      default:
        fail(ErrorCode::parse, where + ": unknown escape \\" + std::string(1, e));
    }
  }
  return out;
}

}  // namespace

void TokenizerModel::validate() const {
  const uint32_t n = vocab_size();
  if (n < kNumSpecials + 256) {
    fail(ErrorCode::format, "vocab too small: " + std::to_string(n));
  }
  if (token_to_id.size() != id_to_token.size()) {
    fail(ErrorCode::format, "vocab contains duplicate token strings");
  }
  for (uint32_t id = 0; id < n; ++id) {
    auto it = token_to_id.find(id_to_token[id]);
    if (it == token_to_id.end() || it->second != id) {
      fail(ErrorCode::format, "vocab id tables disagree at id " + std::to_string(id));
    }
  }
  for (uint32_t s = 0; s < kNumSpecials; ++s) {
    auto it = token_to_id.find(special_texts[s]);
    if (it == token_to_id.end() || it->second != s) {
      fail(ErrorCode::format, std::string("special token missing or misplaced: ") +
                                  special_texts[s]);
    }
  }
  const auto& bytes = byte_to_unicode();
  for (int b = 0; b < 256; ++b) {
    auto it = token_to_id.find(bytes[static_cast<size_t>(b)]);
    if (it == token_to_id.end()) {
      fail(ErrorCode::format, "base byte symbol missing for byte " + std::to_string(b));
    }
  }
  for (size_t m = 0; m < merges.size(); ++m) {
    const std::string merged = merges[m].first + merges[m].second;
    if (!token_to_id.contains(merged)) {
      fail(ErrorCode::format, "merge " + std::to_string(m) + " output not in vocab");
    }
    for (uint32_t s = 0; s < kNumSpecials; ++s) {
      if (merged == special_texts[s]) {
        fail(ErrorCode::format, "merge " + std::to_string(m) + " produces a special token");
      }
    }
  }
}

TokenizerModel assemble_model(std::vector<std::pair<std::string, std::string>> merges,
                              uint32_t requested_vocab_size) {
  TokenizerModel model;
  model.pretokenizer = kPretokenizerId;
  model.requested_vocab_size = requested_vocab_size;
  model.merges = std::move(merges);

  auto add = [&](const std::string& token) {
    auto [it, inserted] = model.token_to_id.emplace(token, model.vocab_size());
    if (inserted) {
      model.id_to_token.push_back(token);
    }
    return it->second;
  };

  for (const char* text : special_texts) add(text);
  for (const std::string& sym : byte_to_unicode()) add(sym);
  for (const auto& [left, right] : model.merges) add(left + right);
  return model;
}

void save_model(const TokenizerModel& model, const std::string& dir) {
  ensure_dir(dir);
  std::ostringstream vocab;
  for (uint32_t id = 0; id < model.vocab_size(); ++id) {
    vocab << escape_token(model.id_to_token[id]) << '\t' << id << '\n';
  }
  write_text_file((std::filesystem::path(dir) / kVocabFile).string(), vocab.str());

  std::ostringstream merges;
  merges << "#version: " << kTokenizerFormatVersion << " pretok=" << model.pretokenizer
         << " target=" << model.requested_vocab_size << '\n';
  for (const auto& [left, right] : model.merges) {
    merges << escape_token(left) << ' ' << escape_token(right) << '\n';
  }
  write_text_file((std::filesystem::path(dir) / kMergesFile).string(), merges.str());
}

TokenizerModel load_model(const std::string& dir) {
  const std::string vocab_path = (std::filesystem::path(dir) / kVocabFile).string();
  const std::string merges_path = (std::filesystem::path(dir) / kMergesFile).string();

  TokenizerModel model;

  std::ifstream vocab_in(vocab_path);
  if (!vocab_in) {
    fail(ErrorCode::io, "cannot open " + vocab_path);
  }
  std::string line;
  uint64_t line_no = 0;
  std::vector<std::pair<std::string, uint32_t>> entries;
  while (std::getline(vocab_in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = vocab_path + ":" + std::to_string(line_no);
    size_t tab = line.rfind('\t');
    if (tab == std::string::npos || tab + 1 >= line.size()) {
      fail(ErrorCode::parse, where + ": expected token<TAB>id");
    }
    std::string token = unescape_token(std::string_view(line).substr(0, tab), where);
    uint32_t id = 0;
    try {
      size_t pos = 0;
      unsigned long v = std::stoul(line.substr(tab + 1), &pos, 10);
      if (pos != line.size() - tab - 1) throw std::invalid_argument("trailing");
      id = static_cast<uint32_t>(v);
    } catch (const std::exception&) {
      fail(ErrorCode::parse, where + ": bad id field");
    }
    entries.emplace_back(std::move(token), id);
  }
  model.id_to_token.resize(entries.size());
  std::vector<bool> seen(entries.size(), false);
  for (auto& [token, id] : entries) {
    if (id >= entries.size() || seen[id]) {
      fail(ErrorCode::parse, vocab_path + ": ids are not dense 0.." +
                                 std::to_string(entries.size() - 1));
    }
    seen[id] = true;
    model.id_to_token[id] = token;
    if (!model.token_to_id.emplace(std::move(token), id).second) {
      fail(ErrorCode::parse, vocab_path + ": duplicate token string");
    }
  }

  std::ifstream merges_in(merges_path);
  if (!merges_in) {
    fail(ErrorCode::io, "cannot open " + merges_path);
  }
  line_no = 0;
  bool have_header = false;
  while (std::getline(merges_in, line)) {
    ++line_no;
    const std::string where = merges_path + ":" + std::to_string(line_no);
    if (!have_header) {
      unsigned version = 0;
      char pretok[32] = {0};
      unsigned long target = 0;
      if (std::sscanf(line.c_str(), "#version: %u pretok=%31s target=%lu", &version, pretok,
                      &target) != 3) {
        fail(ErrorCode::parse, where + ": missing or malformed version header");
      }
      if (version != kTokenizerFormatVersion) {
        fail(ErrorCode::parse, where + ": unsupported format version " +
                                   std::to_string(version));
      }
      model.pretokenizer = pretok;
      model.requested_vocab_size = static_cast<uint32_t>(target);
      have_header = true;
      continue;
    }
    if (line.empty()) continue;
    size_t space = line.find(' ');
    if (space == std::string::npos || space == 0 || space + 1 >= line.size() ||
        line.find(' ', space + 1) != std::string::npos) {
      fail(ErrorCode::parse, where + ": expected left<SPACE>right");
    }
    model.merges.emplace_back(
        unescape_token(std::string_view(line).substr(0, space), where),
        unescape_token(std::string_view(line).substr(space + 1), where));
  }
  if (!have_header) {
    fail(ErrorCode::parse, merges_path + ": empty file, missing version header");
  }

  model.validate();
  return model;
}

bool model_files_present(const std::string& dir) {
  std::error_code ec;
  return std::filesystem::exists(std::filesystem::path(dir) / kVocabFile, ec) &&
         std::filesystem::exists(std::filesystem::path(dir) / kMergesFile, ec);
}

}  // namespace mlmkit::bpe
