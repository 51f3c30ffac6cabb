// SPDX-License-Identifier: Apache-2.0

#include <atomic>

#include <gtest/gtest.h>

#include "vtg/errors.hpp"
#include "vtg/mock_provider.hpp"
#include "vtg/refinement.hpp"
#include "vtg/synthetic.hpp"

namespace vtg {
namespace {

struct Rig {
    explicit Rig(MockCaptionProvider::Options options = {}) : captioner(options) {}
    MockCaptionProvider captioner;
    MockEmbedder embedder;

    Grounder grounder(PipelineConfig config = {}) { return Grounder(std::move(config), captioner, embedder); }
};

const VideoMeta kVideo("vid", 30.0);
const Query kDoor("a person opens a door");

TEST(Refine, ExactWindowKeepsMoment) {
    Rig rig;
    rig.captioner.add_oracle("vid", TimeInterval(5, 15), kDoor.text());
    EXPECT_EQ(rig.grounder().refine_moment(kVideo, kDoor, TimeInterval(5, 15)), TimeInterval(5, 15));
}

TEST(Refine, NoQualifyingWindowReturnsCoarse) {
    Rig rig({0.5, false});
    EXPECT_EQ(rig.grounder().refine_moment(kVideo, kDoor, TimeInterval(0, 3)), TimeInterval(0, 3));
}

TEST(Refine, LooseGateStillPicksOracleWindow) {
    Rig rig;
    rig.captioner.add_oracle("vid", TimeInterval(5, 15), kDoor.text());
    PipelineConfig config;
    config.refine_gate_iou = 0.3;
    EXPECT_EQ(rig.grounder(config).refine_moment(kVideo, kDoor, TimeInterval(6, 18)), TimeInterval(5, 15));
}

TEST(Refine, GateIsStrict) {
    // [0, 10) vs [0, 7): IoU exactly 0.7, which must not pass a 0.7 gate.
    Rig rig({0.5, false});
    EXPECT_EQ(rig.grounder().refine_moment(kVideo, kDoor, TimeInterval(0, 7)), TimeInterval(0, 7));
}

TEST(Refine, CoarseOutsideVideoThrows) {
    Rig rig;
    EXPECT_THROW(rig.grounder().refine_moment(kVideo, kDoor, TimeInterval(25, 35)), InvalidArgument);
}

TEST(Ground, CoarseCoversOracleMoment) {
    Rig rig;
    rig.captioner.add_oracle("vid", TimeInterval(6, 18), kDoor.text());
    const auto coarse = rig.grounder().ground_coarse(kVideo, kDoor);
    EXPECT_LE(coarse.moment.start(), 6.0);
    EXPECT_GE(coarse.moment.end(), 18.0);
    EXPECT_EQ(coarse.scores.scores.size(), 5u);
}

TEST(Ground, SingleClipIsWholeVideo) {
    Rig rig({0.5, false});
    PipelineConfig config;
    config.clip_count = 1;
    const auto p = rig.grounder(config).ground(kVideo, kDoor);
    EXPECT_EQ(p.coarse_moment, TimeInterval(0, 30));
    EXPECT_EQ(p.moment, TimeInterval(0, 30));
}

TEST(Ground, AllFillerFallsBackToEarliestClip) {
    Rig rig({0.5, false});
    const auto p = rig.grounder().ground(kVideo, kDoor);
    EXPECT_EQ(p.coarse_moment, TimeInterval(0, 6));
    EXPECT_EQ(p.moment, TimeInterval(0, 6));
    for (double s : p.per_clip_scores) {
        EXPECT_EQ(s, 0.0);
    }
}

TEST(Ground, RefineDisabledPassesCoarseThrough) {
    Rig rig;
    rig.captioner.add_oracle("vid", TimeInterval(5, 15), kDoor.text());
    PipelineConfig config;
    config.refine = false;
    const auto p = rig.grounder(config).ground(kVideo, kDoor);
    EXPECT_EQ(p.moment, p.coarse_moment);
    EXPECT_FALSE(p.refined);
    EXPECT_EQ(p.fusion_method, FusionMethod::NormalizeAfterColumnMax);
}

TEST(Ground, StrictMockWithoutDataFails) {
    Rig rig;
    EXPECT_THROW(rig.grounder().ground(kVideo, kDoor), CacheMiss);
}

TEST(Ground, SyntheticCorpusRecoveredExactly) {
    Rig rig;
    const auto corpus = make_oracle_corpus();
    for (const auto& a : corpus) {
        rig.captioner.add_oracle(a.video_id, a.interval, a.query.text());
    }
    const auto grounder = rig.grounder();
    for (const auto& a : corpus) {
        const auto p = grounder.ground(VideoMeta(a.video_id, *a.duration), a.query);
        EXPECT_EQ(p.moment, a.interval) << a.video_id;
        EXPECT_LT(temporal_iou(p.coarse_moment, a.interval), 1.0) << a.video_id;
    }
}

TEST(PipelineConfig, Validation) {
    PipelineConfig c;
    EXPECT_NO_THROW(c.validate());
    c.refine_gate_iou = 0.0;
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = {};
    c.threshold = 1.2;
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = {};
    c.fusion = FusionMethod::BaselineActionOnly;
    c.granularities = {Granularity::Place};
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = {};
    c.clip_count = 0;
    EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(GroundAll, KeepsJobOrderAndCapturesErrors) {
    Rig rig;
    rig.captioner.add_oracle("a", TimeInterval(0, 10), kDoor.text());
    rig.captioner.add_oracle("c", TimeInterval(20, 30), kDoor.text());
    const auto grounder = rig.grounder();
    const std::vector<GroundingJob> jobs{{VideoMeta("a", 30), kDoor}, {VideoMeta("b", 30), kDoor},
                                         {VideoMeta("c", 30), kDoor}};
    for (int workers : {1, 2, 8}) {
        std::atomic<std::size_t> calls{0};
        std::atomic<std::size_t> done_sum{0};
        const auto out = ground_all(grounder, jobs, workers, [&](std::size_t done, std::size_t) {
            ++calls;
            done_sum += done;
        });
        ASSERT_EQ(out.size(), 3u);
        ASSERT_TRUE(out[0].prediction);
        EXPECT_EQ(out[0].prediction->video_id, "a");
        EXPECT_FALSE(out[1].prediction);
        EXPECT_THROW(std::rethrow_exception(out[1].error), CacheMiss);
        ASSERT_TRUE(out[2].prediction);
        EXPECT_EQ(out[2].prediction->moment, TimeInterval(20, 30));
        EXPECT_EQ(calls.load(), 3u);
        EXPECT_EQ(done_sum.load(), 6u); // each of 1, 2, 3 reported once
    }
    EXPECT_THROW(ground_all(grounder, jobs, 0), InvalidArgument);
}

} // namespace
} // namespace vtg
