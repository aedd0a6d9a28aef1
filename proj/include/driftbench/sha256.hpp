#pragma once

#include <cstdint>
#include <string>

namespace driftbench {

// SHA-256 digest as a lowercase hex string
std::string sha256_hex(const std::string& data);
std::string sha256_file_hex(const std::string& path);

}  // namespace driftbench
