// SPDX-License-Identifier: Apache-2.0

#include "vtg/cache.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>

#include <json.hpp>

#include "vtg/errors.hpp"

namespace vtg {

using nlohmann::ordered_json;

std::string sha256_hex(std::string_view text) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw InternalError("SHA-256 digest failed");
    }
    std::string hex;
    hex.reserve(len * 2);
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex.append(buf, 2);
    }
    return hex;
}

CaptionKey CaptionKey::of(const CaptionRequest& request) {
    return {request.video_id, request.segment.start_ms(), request.segment.end_ms(), request.granularity};
}

namespace {

/// Reads every line of a JSON-lines file through `apply`; unparsable lines
/// are counted, not fatal. A missing file is an empty cache.
template <typename Apply>
std::size_t replay_lines(const std::filesystem::path& path, Apply&& apply) {
    std::ifstream in(path);
    if (!in) {
        return 0;
    }
    std::size_t skipped = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        try {
            apply(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception&) {
            ++skipped;
        } catch (const InvalidArgument&) {
            ++skipped;
        }
    }
    return skipped;
}

std::ofstream open_append(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    bool needs_newline = false;
    {
        std::ifstream probe(path, std::ios::binary | std::ios::ate);
        if (probe && probe.tellg() > 0) {
            probe.seekg(-1, std::ios::end);
            needs_newline = probe.get() != '\n';
        }
    }
    std::ofstream out(path, std::ios::app | std::ios::binary);
    if (!out) {
        throw IoError("cannot open cache file '" + path.string() + "' for writing");
    }
    if (needs_newline) {
        out << '\n';
    }
    return out;
}

} // namespace

CaptionCache::CaptionCache(std::filesystem::path path, bool writable)
    : path_(std::move(path)), writable_(writable) {
    skipped_ = replay_lines(path_, [this](const nlohmann::json& j) {
        const TimeInterval span(j.at("start").get<double>(), j.at("end").get<double>());
        CaptionKey key{j.at("video_id").get<std::string>(), span.start_ms(), span.end_ms(),
                       parse_granularity(j.at("granularity").get<std::string>())};
        entries_[std::move(key)] = j.at("caption").get<std::string>();
    });
    if (writable_) {
        out_ = open_append(path_);
    }
}

std::optional<std::string> CaptionCache::find(const CaptionKey& key) const {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) {
        return it->second;
    }
    return std::nullopt;
}

void CaptionCache::insert(const CaptionKey& key, const std::string& caption) {
    if (!writable_) {
        throw InternalError("caption cache '" + path_.string() + "' is read-only");
    }
    ordered_json j;
    j["video_id"] = key.video_id;
    j["start"] = static_cast<double>(key.start_ms) / 1000.0;
    j["end"] = static_cast<double>(key.end_ms) / 1000.0;
    j["granularity"] = std::string(name(key.granularity));
    j["caption"] = caption;

    std::lock_guard lock(mutex_);
    entries_[key] = caption;
    out_ << j.dump() << '\n';
    out_.flush();
    if (!out_) {
        throw IoError("failed writing caption cache '" + path_.string() + "'");
    }
}

std::size_t CaptionCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

EmbeddingCache::EmbeddingCache(std::filesystem::path path, bool writable)
    : path_(std::move(path)), writable_(writable) {
    skipped_ = replay_lines(path_, [this](const nlohmann::json& j) {
        entries_[j.at("text_sha256").get<std::string>()] = j.at("vector").get<EmbeddingVector>();
    });
    if (writable_) {
        out_ = open_append(path_);
    }
}

std::optional<EmbeddingVector> EmbeddingCache::find(const std::string& text_sha256) const {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(text_sha256); it != entries_.end()) {
        return it->second;
    }
    return std::nullopt;
}

void EmbeddingCache::insert(const std::string& text_sha256, const EmbeddingVector& vector) {
    if (!writable_) {
        throw InternalError("embedding cache '" + path_.string() + "' is read-only");
    }
    ordered_json j;
    j["text_sha256"] = text_sha256;
    j["vector"] = vector;

    std::lock_guard lock(mutex_);
    entries_[text_sha256] = vector;
    out_ << j.dump() << '\n';
    out_.flush();
    if (!out_) {
        throw IoError("failed writing embedding cache '" + path_.string() + "'");
    }
}

std::size_t EmbeddingCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

CachingCaptionProvider::CachingCaptionProvider(std::shared_ptr<CaptionProvider> upstream,
                                               std::shared_ptr<CaptionCache> cache)
    : upstream_(std::move(upstream)), cache_(std::move(cache)) {}

std::string CachingCaptionProvider::caption(const CaptionRequest& request) {
    const auto key = CaptionKey::of(request);
    if (auto hit = cache_->find(key)) {
        return *hit;
    }
    return flights_.run(
        key, [&] { return cache_->find(key); },
        [&] {
            auto text = upstream_->caption(request);
            cache_->insert(key, text);
            return text;
        });
}

CachingEmbedder::CachingEmbedder(std::shared_ptr<Embedder> upstream, std::shared_ptr<EmbeddingCache> cache)
    : upstream_(std::move(upstream)), cache_(std::move(cache)) {}

EmbeddingVector CachingEmbedder::compute(std::string_view text) {
    const auto key = sha256_hex(text);
    if (auto hit = cache_->find(key)) {
        return *hit;
    }
    return flights_.run(
        key, [&] { return cache_->find(key); },
        [&] {
            auto v = upstream_->embed(text);
            cache_->insert(key, v);
            return v;
        });
}

std::string FileCaptionProvider::caption(const CaptionRequest& request) {
    if (auto hit = cache_->find(CaptionKey::of(request))) {
        return *hit;
    }
    throw CacheMiss("caption cache has no entry for " + request.describe());
}

EmbeddingVector FileEmbedder::compute(std::string_view text) {
    const auto key = sha256_hex(text);
    if (auto hit = cache_->find(key)) {
        return *hit;
    }
    throw CacheMiss("embedding cache has no entry for text sha256 " + key);
}

} // namespace vtg
