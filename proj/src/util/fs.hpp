#pragma once

#include <filesystem>
#include <string>

namespace mlmkit {

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
void ensure_dir(const std::filesystem::path& dir);

}  // namespace mlmkit
