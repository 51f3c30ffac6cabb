// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <chrono>
#include <thread>

#include <gtest/gtest.h>

#include "support.hpp"
#include "vtg/cache.hpp"
#include "vtg/errors.hpp"
#include "vtg/mock_provider.hpp"
#include "vtg/refinement.hpp"
#include "vtg/synthetic.hpp"

namespace vtg {
namespace {

const CaptionRequest kReq{"vid", TimeInterval(0, 6), Granularity::Action};

class CountingCaptioner final : public CaptionProvider {
public:
    std::atomic<int> calls{0};
    std::chrono::milliseconds delay{0};

    std::string caption(const CaptionRequest& r) override {
        ++calls;
        std::this_thread::sleep_for(delay);
        return "caption for " + r.describe();
    }
};

class FailingCaptioner final : public CaptionProvider {
public:
    std::string caption(const CaptionRequest& r) override {
        throw ProviderUnavailable("upstream down for " + r.describe());
    }
};

class FailingEmbedder final : public Embedder {
protected:
    EmbeddingVector compute(std::string_view) override { throw ProviderUnavailable("embedder down"); }
};

TEST(Sha256, KnownDigest) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(CaptionCache, PersistsAcrossReopen) {
    testing::TempDir dir;
    const auto path = dir / "captions.jsonl";
    {
        CaptionCache cache(path, true);
        cache.insert(CaptionKey::of(kReq), "first");
        cache.insert(CaptionKey::of(kReq), "second");
    }
    CaptionCache reopened(path, false);
    EXPECT_EQ(reopened.size(), 1u);
    EXPECT_EQ(reopened.find(CaptionKey::of(kReq)), "second");
    EXPECT_THROW(reopened.insert(CaptionKey::of(kReq), "x"), InternalError);
}

TEST(CaptionCache, KeysRoundToMilliseconds) {
    testing::TempDir dir;
    CaptionCache cache(dir / "c.jsonl", true);
    cache.insert(CaptionKey::of(kReq), "hit");
    const CaptionRequest near{"vid", TimeInterval(0.0002, 5.9998), Granularity::Action};
    EXPECT_EQ(cache.find(CaptionKey::of(near)), "hit");
    const CaptionRequest other{"vid", TimeInterval(0, 6), Granularity::Place};
    EXPECT_FALSE(cache.find(CaptionKey::of(other)));
}

TEST(CaptionCache, TornTailIsSkippedAndRepaired) {
    testing::TempDir dir;
    const auto path = dir / "captions.jsonl";
    testing::write_text(path, "{\"video_id\":\"vid\",\"start\":0.0,\"end\":6.0,\"granularity\":\"action\","
                              "\"caption\":\"ok\"}\n{\"video_id\":\"vid\",\"sta");
    {
        CaptionCache cache(path, true);
        EXPECT_EQ(cache.size(), 1u);
        EXPECT_EQ(cache.skipped_lines(), 1u);
        cache.insert(CaptionKey::of({"vid", TimeInterval(6, 12), Granularity::Action}), "later");
    }
    CaptionCache reopened(path, false);
    EXPECT_EQ(reopened.size(), 2u);
    EXPECT_EQ(reopened.skipped_lines(), 1u);
}

TEST(EmbeddingCache, RoundTrip) {
    testing::TempDir dir;
    {
        EmbeddingCache cache(dir / "e.jsonl", true);
        cache.insert(sha256_hex("hello"), {0.6, 0.8});
    }
    EmbeddingCache reopened(dir / "e.jsonl", false);
    EXPECT_EQ(reopened.find(sha256_hex("hello")), (EmbeddingVector{0.6, 0.8}));
}

TEST(CachingCaptionProvider, CallsUpstreamOncePerKey) {
    testing::TempDir dir;
    auto upstream = std::make_shared<CountingCaptioner>();
    CachingCaptionProvider p(upstream, std::make_shared<CaptionCache>(dir / "c.jsonl", true));
    const auto a = p.caption(kReq);
    EXPECT_EQ(p.caption(kReq), a);
    EXPECT_EQ(upstream->calls, 1);
}

TEST(CachingCaptionProvider, ConcurrentMissesCollapse) {
    testing::TempDir dir;
    auto upstream = std::make_shared<CountingCaptioner>();
    upstream->delay = std::chrono::milliseconds(50);
    CachingCaptionProvider p(upstream, std::make_shared<CaptionCache>(dir / "c.jsonl", true));
    std::vector<std::string> results(8);
    {
        std::vector<std::jthread> threads;
        for (std::size_t t = 0; t < results.size(); ++t) {
            threads.emplace_back([&, t] { results[t] = p.caption(kReq); });
        }
    }
    EXPECT_EQ(upstream->calls, 1);
    for (const auto& r : results) {
        EXPECT_EQ(r, results.front());
    }
}

TEST(CachingCaptionProvider, FailuresAreNotCached) {
    testing::TempDir dir;
    auto cache = std::make_shared<CaptionCache>(dir / "c.jsonl", true);
    CachingCaptionProvider failing(std::make_shared<FailingCaptioner>(), cache);
    EXPECT_THROW(failing.caption(kReq), ProviderUnavailable);
    EXPECT_EQ(cache->size(), 0u);
}

TEST(FileProvider, MissIsCacheMiss) {
    testing::TempDir dir;
    FileCaptionProvider p(std::make_shared<CaptionCache>(dir / "c.jsonl", false));
    EXPECT_THROW(p.caption(kReq), CacheMiss);
    FileEmbedder e(std::make_shared<EmbeddingCache>(dir / "e.jsonl", false));
    EXPECT_THROW(e.embed("nothing here"), CacheMiss);
    EXPECT_FALSE(std::filesystem::exists(dir / "c.jsonl"));
}

TEST(FileProvider, EmbedderReadsStoredVector) {
    testing::TempDir dir;
    testing::write_text(dir / "embeddings.jsonl",
                        "{\"text_sha256\":\"" + sha256_hex("a person opens a door") + "\",\"vector\":[0.6,0.8]}\n");
    ProviderConfig config;
    config.kind = ProviderKind::File;
    config.cache_path = dir.path();
    const auto providers = make_providers(config);
    EXPECT_EQ(providers.embedder->embed("a person opens a door"), (EmbeddingVector{0.6, 0.8}));
}

TEST(FileProvider, MissingDirectoryIsRejected) {
    testing::TempDir dir;
    ProviderConfig config;
    config.kind = ProviderKind::File;
    config.cache_path = dir / "absent";
    EXPECT_THROW(make_providers(config), Error);
    config.cache_path.reset();
    EXPECT_THROW(config.validate(), InvalidArgument);
}

TEST(CacheSoundness, ReplayWithFailingUpstreamSucceeds) {
    testing::TempDir dir;
    const auto corpus = make_oracle_corpus(6);

    ProviderConfig config;
    config.cache_path = dir.path();
    const auto live = make_providers(config, corpus);
    std::vector<MomentPrediction> first;
    {
        const Grounder g({}, *live.captioner, *live.embedder);
        for (const auto& a : corpus) {
            first.push_back(g.ground(VideoMeta(a.video_id, *a.duration), a.query));
        }
    }

    auto captions = std::make_shared<CaptionCache>(dir / std::string(kCaptionCacheFile), true);
    auto embeddings = std::make_shared<EmbeddingCache>(dir / std::string(kEmbeddingCacheFile), true);
    CachingCaptionProvider captioner(std::make_shared<FailingCaptioner>(), captions);
    CachingEmbedder embedder(std::make_shared<FailingEmbedder>(), embeddings);
    const Grounder replay({}, captioner, embedder);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto p = replay.ground(VideoMeta(corpus[i].video_id, *corpus[i].duration), corpus[i].query);
        EXPECT_EQ(p.moment, first[i].moment);
        EXPECT_EQ(p.per_clip_scores, first[i].per_clip_scores);
    }

    config.kind = ProviderKind::File;
    const auto offline = make_providers(config);
    const Grounder from_files({}, *offline.captioner, *offline.embedder);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        EXPECT_EQ(from_files.ground(VideoMeta(corpus[i].video_id, *corpus[i].duration), corpus[i].query).moment,
                  first[i].moment);
    }
}

} // namespace
} // namespace vtg
