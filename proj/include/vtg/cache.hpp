// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>

#include "vtg/providers.hpp"

namespace vtg {

std::string sha256_hex(std::string_view text);

/// Caption cache identity: times are kept at millisecond precision so keys
/// survive float formatting round trips.
struct CaptionKey {
    std::string video_id;
    std::int64_t start_ms;
    std::int64_t end_ms;
    Granularity granularity;

    static CaptionKey of(const CaptionRequest& request);
    auto operator<=>(const CaptionKey&) const = default;
};

/// Append-only JSON-lines store of captions. Loading replays the file with
/// last-write-wins on duplicate keys. Writes are serialized internally and
/// flushed per line, so an interrupted run keeps every completed entry.
class CaptionCache {
public:
    /// Opens (and with `writable`, creates) the cache file.
    CaptionCache(std::filesystem::path path, bool writable);

    std::optional<std::string> find(const CaptionKey& key) const;
    void insert(const CaptionKey& key, const std::string& caption);

    std::size_t size() const;
    /// Lines skipped while loading (e.g. a torn final line).
    std::size_t skipped_lines() const noexcept { return skipped_; }
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    bool writable_;
    mutable std::mutex mutex_;
    std::map<CaptionKey, std::string> entries_;
    std::ofstream out_;
    std::size_t skipped_ = 0;
};

/// Append-only JSON-lines store of embeddings keyed by SHA-256 of the text.
class EmbeddingCache {
public:
    EmbeddingCache(std::filesystem::path path, bool writable);

    std::optional<EmbeddingVector> find(const std::string& text_sha256) const;
    void insert(const std::string& text_sha256, const EmbeddingVector& vector);

    std::size_t size() const;
    std::size_t skipped_lines() const noexcept { return skipped_; }

private:
    std::filesystem::path path_;
    bool writable_;
    mutable std::mutex mutex_;
    std::map<std::string, EmbeddingVector> entries_;
    std::ofstream out_;
    std::size_t skipped_ = 0;
};

/// Collapses concurrent computations of the same key into one call.
template <typename Key, typename Value>
class SingleFlight {
public:
    template <typename Lookup, typename Compute>
    Value run(const Key& key, Lookup&& lookup, Compute&& compute) {
        std::promise<Value> promise;
        std::shared_future<Value> pending;
        {
            std::lock_guard lock(mutex_);
            // Re-check under the lock: a finished flight stores before it unregisters.
            if (auto hit = lookup()) {
                return *hit;
            }
            if (auto it = flights_.find(key); it != flights_.end()) {
                pending = it->second;
            } else {
                flights_.emplace(key, promise.get_future().share());
            }
        }
        if (pending.valid()) {
            return pending.get();
        }
        try {
            Value value = compute();
            promise.set_value(value);
            finish(key);
            return value;
        } catch (...) {
            promise.set_exception(std::current_exception());
            finish(key);
            throw;
        }
    }

private:
    void finish(const Key& key) {
        std::lock_guard lock(mutex_);
        flights_.erase(key);
    }

    std::mutex mutex_;
    std::map<Key, std::shared_future<Value>> flights_;
};

/// Serves captions from the cache, falling through to `upstream` on a miss
/// and recording the answer.
class CachingCaptionProvider final : public CaptionProvider {
public:
    CachingCaptionProvider(std::shared_ptr<CaptionProvider> upstream, std::shared_ptr<CaptionCache> cache);

    std::string caption(const CaptionRequest& request) override;

private:
    std::shared_ptr<CaptionProvider> upstream_;
    std::shared_ptr<CaptionCache> cache_;
    SingleFlight<CaptionKey, std::string> flights_;
};

class CachingEmbedder final : public Embedder {
public:
    CachingEmbedder(std::shared_ptr<Embedder> upstream, std::shared_ptr<EmbeddingCache> cache);

protected:
    EmbeddingVector compute(std::string_view text) override;

private:
    std::shared_ptr<Embedder> upstream_;
    std::shared_ptr<EmbeddingCache> cache_;
    SingleFlight<std::string, EmbeddingVector> flights_;
};

/// Replay-only captioner: every request must already be in the cache.
class FileCaptionProvider final : public CaptionProvider {
public:
    explicit FileCaptionProvider(std::shared_ptr<CaptionCache> cache) : cache_(std::move(cache)) {}

    std::string caption(const CaptionRequest& request) override;

private:
    std::shared_ptr<CaptionCache> cache_;
};

class FileEmbedder final : public Embedder {
public:
    explicit FileEmbedder(std::shared_ptr<EmbeddingCache> cache) : cache_(std::move(cache)) {}

protected:
    EmbeddingVector compute(std::string_view text) override;

private:
    std::shared_ptr<EmbeddingCache> cache_;
};

inline constexpr std::string_view kCaptionCacheFile = "captions.jsonl";
inline constexpr std::string_view kEmbeddingCacheFile = "embeddings.jsonl";

} // namespace vtg
