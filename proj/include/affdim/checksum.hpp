#pragma once

#include <string>

namespace affdim {

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

enum class ChecksumState { Ok, Mismatch, Unlisted };

/// Looks `path` up by file name in SHA256SUMS next to it (sha256sum format).
ChecksumState check_manifest(const std::string& path);

} // namespace affdim
