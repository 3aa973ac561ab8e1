#pragma once

#include <string>

namespace qcrit {

// SHA-256 digest of a byte string, lowercase hex.
std::string sha256_hex(const std::string& data);

// Digest of a file's contents; throws on I/O failure.
std::string sha256_file(const std::string& path);

} // namespace qcrit
