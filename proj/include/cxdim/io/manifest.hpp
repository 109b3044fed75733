#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace cxdim::io {

/// Lowercase hex SHA-256 of a file's bytes. Throws IoError.
std::string sha256_file(const std::filesystem::path& path);

/// manifest.json listing each file (relative to dir) with its SHA-256 and
/// size, sorted by path. No timestamps, so reruns are byte-identical.
std::filesystem::path write_manifest(const std::filesystem::path& dir, const std::vector<std::string>& files,
                                     const std::string& command);

}  // namespace cxdim::io
