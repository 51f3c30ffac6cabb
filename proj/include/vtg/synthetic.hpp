// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "vtg/core.hpp"

namespace vtg {

/// Query sentences used by the synthetic corpus. None shares a hashed
/// embedding bucket with the mock captioner's filler captions.
std::span<const std::string_view> synthetic_queries() noexcept;

/// Builds an oracle-mode corpus of `videos` annotations, one query per
/// video, each carrying its duration.
///
/// Ground-truth moments are 10 s long and start on a 5 s grid, so they
/// coincide with a default (10, 5) refinement window, while their edges sit
/// off the 5-clip coarse grid. With the default pipeline each coarse moment
/// has IoU in [0.8, 0.9] with its ground truth and above 0.7 with exactly
/// the ground-truth window, so refinement recovers the moment exactly.
std::vector<GroundTruthAnnotation> make_oracle_corpus(std::size_t videos = 20, std::uint64_t seed = 7);

/// Writes the corpus as JSON lines {"video_id","start","end","query","duration"}.
void write_corpus_jsonl(std::span<const GroundTruthAnnotation> corpus, const std::filesystem::path& path);

} // namespace vtg
