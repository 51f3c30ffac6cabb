// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <string>

#include <json.hpp>

#include "vtg/providers.hpp"

namespace vtg {

struct HttpOptions {
    /// Base URL, e.g. "http://127.0.0.1:8080" or "http://host:8080/bridge".
    std::string endpoint;
    double timeout_seconds = 30.0;
    int attempts = 3;
    /// Delay before the second attempt; doubles on each further retry.
    std::chrono::milliseconds backoff{200};
};

/// JSON-over-HTTP POST with retry and exponential backoff. Transport
/// failures and non-2xx answers are retried; exhausting the attempts raises
/// ProviderUnavailable naming the endpoint and `context`.
class JsonHttpClient {
public:
    explicit JsonHttpClient(HttpOptions options);

    nlohmann::json post(const std::string& route, const nlohmann::json& body, const std::string& context) const;

    const std::string& endpoint() const noexcept { return options_.endpoint; }

private:
    HttpOptions options_;
    std::string host_;      // scheme://host:port
    std::string base_path_; // optional prefix, no trailing slash
};

/// POST /caption {"video_id","start","end","instruction"} -> {"caption"}.
class HttpCaptionProvider final : public CaptionProvider {
public:
    explicit HttpCaptionProvider(HttpOptions options) : client_(std::move(options)) {}

    std::string caption(const CaptionRequest& request) override;

private:
    JsonHttpClient client_;
};

/// POST /embed {"text"} -> {"vector": [...]}.
class HttpEmbedder final : public Embedder {
public:
    explicit HttpEmbedder(HttpOptions options) : client_(std::move(options)) {}

protected:
    EmbeddingVector compute(std::string_view text) override;

private:
    JsonHttpClient client_;
};

} // namespace vtg
