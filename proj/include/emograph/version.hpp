// Copyright (c) 2026 the emograph authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace emograph {

// Bumped on any change that affects extracted features, graph content, or
// serialized formats; part of every graph's provenance and of cache keys.
inline constexpr const char* kPipelineVersion = "0.1.0";

}  // namespace emograph
