// SPDX-License-Identifier: Apache-2.0

#include "vtg/http_provider.hpp"

#include <cmath>
#include <thread>

#include <httplib.h>

#include "vtg/errors.hpp"

namespace vtg {

JsonHttpClient::JsonHttpClient(HttpOptions options) : options_(std::move(options)) {
    if (options_.endpoint.empty()) {
        throw InvalidArgument("http provider requires an endpoint");
    }
    if (options_.attempts < 1) {
        throw InvalidArgument("http provider needs at least one attempt");
    }
    const auto scheme = options_.endpoint.find("://");
    if (scheme == std::string::npos) {
        throw InvalidArgument("endpoint '" + options_.endpoint + "' must start with http://");
    }
    const auto slash = options_.endpoint.find('/', scheme + 3);
    host_ = options_.endpoint.substr(0, slash);
    if (slash != std::string::npos) {
        base_path_ = options_.endpoint.substr(slash);
        while (!base_path_.empty() && base_path_.back() == '/') {
            base_path_.pop_back();
        }
    }
}

nlohmann::json JsonHttpClient::post(const std::string& route, const nlohmann::json& body,
                                    const std::string& context) const {
    const auto payload = body.dump();
    const auto path = base_path_ + route;
    const auto timeout = std::chrono::duration<double>(options_.timeout_seconds);
    const auto timeout_us = std::chrono::duration_cast<std::chrono::microseconds>(timeout);

    std::string last_error;
    auto delay = options_.backoff;
    for (int attempt = 1; attempt <= options_.attempts; ++attempt) {
        if (attempt > 1) {
            std::this_thread::sleep_for(delay);
            delay *= 2;
        }
        httplib::Client client(host_);
        client.set_connection_timeout(timeout_us);
        client.set_read_timeout(timeout_us);
        client.set_write_timeout(timeout_us);

        auto result = client.Post(path, payload, "application/json");
        if (!result) {
            last_error = httplib::to_string(result.error());
            continue;
        }
        if (result->status < 200 || result->status >= 300) {
            last_error = "HTTP " + std::to_string(result->status) + " " + result->body;
            // Client errors will not heal on retry.
            if (result->status >= 400 && result->status < 500) {
                break;
            }
            continue;
        }
        try {
            return nlohmann::json::parse(result->body);
        } catch (const nlohmann::json::exception& e) {
            last_error = std::string("malformed JSON response: ") + e.what();
        }
    }
    throw ProviderUnavailable("provider unavailable at " + options_.endpoint + path + " for " + context +
                              ": " + last_error);
}

std::string HttpCaptionProvider::caption(const CaptionRequest& request) {
    nlohmann::json body;
    body["video_id"] = request.video_id;
    body["start"] = request.segment.start();
    body["end"] = request.segment.end();
    body["instruction"] = std::string(instruction(request.granularity));

    const auto context = request.describe();
    const auto reply = client_.post("/caption", body, context);
    if (!reply.is_object() || !reply.contains("caption") || !reply["caption"].is_string()) {
        throw ProviderUnavailable("provider at " + client_.endpoint() + " answered without a \"caption\" string for " +
                                  context);
    }
    return reply["caption"].get<std::string>();
}

EmbeddingVector HttpEmbedder::compute(std::string_view text) {
    nlohmann::json body;
    body["text"] = std::string(text);
    const auto reply = client_.post("/embed", body, "embedding request");
    if (!reply.is_object() || !reply.contains("vector") || !reply["vector"].is_array()) {
        throw ProviderUnavailable("provider at " + client_.endpoint() + " answered without a \"vector\" array");
    }
    EmbeddingVector v;
    v.reserve(reply["vector"].size());
    for (const auto& x : reply["vector"]) {
        if (!x.is_number() || !std::isfinite(x.get<double>())) {
            throw ProviderUnavailable("provider at " + client_.endpoint() + " returned a non-numeric vector entry");
        }
        v.push_back(x.get<double>());
    }
    return v;
}

} // namespace vtg
