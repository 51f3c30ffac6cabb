// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vtg/core.hpp"

namespace vtg {

/// One captioning call: a segment of a video under one granularity's instruction.
struct CaptionRequest {
    std::string video_id;
    TimeInterval segment;
    Granularity granularity;

    /// "video 'v1' segment [6.00, 12.00) granularity action", for error messages.
    std::string describe() const;
};

/// Produces a caption for a video segment. Implementations must be safe to
/// call concurrently.
class CaptionProvider {
public:
    virtual ~CaptionProvider() = default;
    virtual std::string caption(const CaptionRequest& request) = 0;
};

/// Sentence encoder. embed() rejects blank text and enforces a single output
/// dimension for the lifetime of the instance.
class Embedder {
public:
    virtual ~Embedder() = default;

    EmbeddingVector embed(std::string_view text);

    /// Dimension fixed by the first successful call, if any.
    std::optional<std::size_t> dimension() const noexcept;

protected:
    virtual EmbeddingVector compute(std::string_view text) = 0;

private:
    std::atomic<std::size_t> dimension_{0};
};

/// Captions one segment under every granularity in `granularities`. The
/// first provider error propagates and nothing partial is returned.
CaptionSet caption_segment_all(CaptionProvider& provider, const std::string& video_id,
                               const TimeInterval& segment,
                               std::span<const Granularity> granularities = kAllGranularities);

enum class ProviderKind { Mock, File, Http };

std::string_view to_string(ProviderKind kind) noexcept;
ProviderKind parse_provider_kind(std::string_view text);

struct ProviderConfig {
    ProviderKind kind = ProviderKind::Mock;
    std::optional<std::string> endpoint;
    /// Directory holding captions.jsonl / embeddings.jsonl.
    std::optional<std::filesystem::path> cache_path;
    double timeout_seconds = 30.0;
    /// Total attempts per HTTP call.
    int max_retries = 3;
    std::chrono::milliseconds backoff{200};

    // Mock-only knobs.
    std::optional<std::filesystem::path> fixtures;
    double oracle_fraction = 0.5;
    bool mock_strict = true;

    /// Throws InvalidArgument when the kind's required fields are missing.
    void validate() const;
};

/// A captioner/embedder pair wired according to a ProviderConfig, with the
/// persistent cache in front when a cache path is configured.
struct Providers {
    std::shared_ptr<CaptionProvider> captioner;
    std::shared_ptr<Embedder> embedder;
};

/// `oracle` seeds the mock captioner's oracle mode (ignored by other kinds).
Providers make_providers(const ProviderConfig& config,
                         std::span<const GroundTruthAnnotation> oracle = {});

} // namespace vtg
