// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "vtg/providers.hpp"

namespace vtg {

/// Tokenization used by the hashed embedder: ASCII letters are lower-cased,
/// every ASCII character that is not a letter or digit separates tokens,
/// bytes >= 0x80 stay inside tokens, and stop words are dropped.
std::vector<std::string> mock_tokenize(std::string_view text);

/// Bag-of-tokens embedder. Each token is hashed with 64-bit FNV-1a
/// (offset basis kMockEmbedSeed), counted into bucket hash % kMockEmbedDim,
/// and the count vector is L2-normalized. Text without content tokens maps
/// to the zero vector.
class MockEmbedder final : public Embedder {
public:
    static constexpr std::size_t kMockEmbedDim = 256;
    static constexpr std::uint64_t kMockEmbedSeed = 0xcbf29ce484222325ULL;

    static std::uint64_t token_hash(std::string_view token) noexcept;

protected:
    EmbeddingVector compute(std::string_view text) override;
};

/// Deterministic captioner for tests and synthetic corpora.
///
/// Lookup order for a request: an explicit fixture for the exact
/// (video, segment at ms precision, granularity) key; then oracle mode if the
/// video has ground-truth entries; otherwise a cache miss (strict) or the
/// granularity's filler caption.
///
/// Oracle mode emits the query text when more than `oracle_fraction` of the
/// segment lies inside a ground-truth interval (the best-covering one wins,
/// earliest on ties) and filler otherwise.
class MockCaptionProvider final : public CaptionProvider {
public:
    struct Options {
        double oracle_fraction = 0.5;
        bool strict = true;
    };

    MockCaptionProvider() = default;
    explicit MockCaptionProvider(Options options) : options_(options) {}

    void add_fixture(const std::string& video_id, const TimeInterval& segment, Granularity g,
                     std::string caption);
    void add_oracle(const std::string& video_id, const TimeInterval& interval, std::string query);

    /// JSON lines mixing caption fixtures
    /// {"video_id","start","end","granularity","caption"} and oracle entries
    /// {"video_id","start","end","query"}.
    void load_fixtures(const std::filesystem::path& path);

    std::string caption(const CaptionRequest& request) override;

    /// Caption used for segments without evidence. Shares no content token
    /// with the synthetic corpus queries.
    static std::string_view filler(Granularity g) noexcept;

private:
    using FixtureKey = std::tuple<std::string, std::int64_t, std::int64_t, Granularity>;
    struct OracleEntry {
        TimeInterval interval;
        std::string query;
    };

    Options options_;
    std::map<FixtureKey, std::string> fixtures_;
    std::map<std::string, std::vector<OracleEntry>> oracle_;
};

} // namespace vtg
