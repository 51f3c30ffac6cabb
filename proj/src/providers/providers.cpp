// SPDX-License-Identifier: Apache-2.0

#include "vtg/providers.hpp"

#include <cmath>

#include "vtg/cache.hpp"
#include "vtg/errors.hpp"
#include "vtg/http_provider.hpp"
#include "vtg/mock_provider.hpp"

namespace vtg {

std::string CaptionRequest::describe() const {
    return "video '" + video_id + "' segment " + segment.to_string() + " granularity " + std::string(name(granularity));
}

EmbeddingVector Embedder::embed(std::string_view text) {
    if (normalize_whitespace(text).empty()) {
        throw InvalidArgument("cannot embed blank text");
    }
    auto v = compute(text);
    if (v.empty()) {
        throw InternalError("embedder returned an empty vector");
    }
    std::size_t expected = 0;
    if (!dimension_.compare_exchange_strong(expected, v.size()) && expected != v.size()) {
        throw InternalError("embedding dimension changed within a run: " + std::to_string(expected) + " then " +
                            std::to_string(v.size()));
    }
    return v;
}

std::optional<std::size_t> Embedder::dimension() const noexcept {
    const auto d = dimension_.load();
    return d == 0 ? std::nullopt : std::optional<std::size_t>(d);
}

CaptionSet caption_segment_all(CaptionProvider& provider, const std::string& video_id, const TimeInterval& segment,
                               std::span<const Granularity> granularities) {
    CaptionSet set{segment, {}};
    for (Granularity g : granularities) {
        set.captions[g] = provider.caption(CaptionRequest{video_id, segment, g});
    }
    return set;
}

std::string_view to_string(ProviderKind kind) noexcept {
    switch (kind) {
    case ProviderKind::Mock: return "mock";
    case ProviderKind::File: return "file";
    case ProviderKind::Http: return "http";
    }
    return "unknown";
}

ProviderKind parse_provider_kind(std::string_view text) {
    if (text == "mock") return ProviderKind::Mock;
    if (text == "file") return ProviderKind::File;
    if (text == "http") return ProviderKind::Http;
    throw InvalidArgument("unknown provider '" + std::string(text) + "' (expected mock, file or http)");
}

void ProviderConfig::validate() const {
    if (kind == ProviderKind::Http && (!endpoint || endpoint->empty())) {
        throw InvalidArgument("the http provider requires an endpoint");
    }
    if (kind == ProviderKind::File && !cache_path) {
        throw InvalidArgument("the file provider requires a cache path");
    }
    if (!(timeout_seconds > 0.0) || !std::isfinite(timeout_seconds)) {
        throw InvalidArgument("provider timeout must be positive");
    }
    if (max_retries < 1 || max_retries > 10) {
        throw InvalidArgument("max retries must be within 1..10");
    }
    if (!(oracle_fraction >= 0.0 && oracle_fraction < 1.0)) {
        throw InvalidArgument("oracle fraction must be within [0, 1)");
    }
}

Providers make_providers(const ProviderConfig& config, std::span<const GroundTruthAnnotation> oracle) {
    config.validate();

    std::shared_ptr<CaptionCache> caption_cache;
    std::shared_ptr<EmbeddingCache> embedding_cache;
    if (config.cache_path) {
        const bool writable = config.kind != ProviderKind::File;
        if (!writable && !std::filesystem::is_directory(*config.cache_path)) {
            throw IoError("cache directory '" + config.cache_path->string() + "' does not exist");
        }
        caption_cache = std::make_shared<CaptionCache>(*config.cache_path / kCaptionCacheFile, writable);
        embedding_cache = std::make_shared<EmbeddingCache>(*config.cache_path / kEmbeddingCacheFile, writable);
    }

    Providers out;
    switch (config.kind) {
    case ProviderKind::File:
        return {std::make_shared<FileCaptionProvider>(caption_cache), std::make_shared<FileEmbedder>(embedding_cache)};
    case ProviderKind::Mock: {
        auto mock = std::make_shared<MockCaptionProvider>(
            MockCaptionProvider::Options{config.oracle_fraction, config.mock_strict});
        if (config.fixtures) {
            mock->load_fixtures(*config.fixtures);
        }
        for (const auto& gt : oracle) {
            mock->add_oracle(gt.video_id, gt.interval, gt.query.text());
        }
        out = {mock, std::make_shared<MockEmbedder>()};
        break;
    }
    case ProviderKind::Http: {
        HttpOptions http{*config.endpoint, config.timeout_seconds, config.max_retries, config.backoff};
        out = {std::make_shared<HttpCaptionProvider>(http), std::make_shared<HttpEmbedder>(http)};
        break;
    }
    }

    if (caption_cache) {
        out.captioner = std::make_shared<CachingCaptionProvider>(out.captioner, caption_cache);
        out.embedder = std::make_shared<CachingEmbedder>(out.embedder, embedding_cache);
    }
    return out;
}

} // namespace vtg
