#pragma once

#include <string>

namespace gdm {

// Writes content to `path` via a temp file + rename so readers never see a
// partial file.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// FNV-1a 64-bit content digest, hex encoded.
std::string content_digest(const std::string& content);

}  // namespace gdm
