// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace emograph {

// FIPS 180-4 SHA-256, used for content-addressed cache keys and transcript
// hashes. Self-contained so replay stores are portable across platforms.
std::string sha256_hex(std::string_view data);

/// Hash of a file's raw bytes. Throws emograph::Error if unreadable.
std::string sha256_file_hex(const std::string& path);

}  // namespace emograph
