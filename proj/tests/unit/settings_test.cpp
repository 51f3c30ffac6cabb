// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "settings.hpp"
#include "support.hpp"
#include "vtg/errors.hpp"

namespace vtg::cli {
namespace {

TEST(Settings, Defaults) {
    const auto s = resolve_settings({});
    EXPECT_EQ(s.pipeline.clip_count, 5);
    EXPECT_EQ(s.pipeline.threshold, 0.8);
    EXPECT_EQ(s.pipeline.refine_gate_iou, 0.7);
    EXPECT_EQ(s.pipeline.fusion, FusionMethod::NormalizeAfterColumnMax);
    EXPECT_TRUE(s.pipeline.refine);
    EXPECT_EQ(s.provider.kind, ProviderKind::Mock);
    EXPECT_EQ(s.workers, 1);
    EXPECT_EQ(s.format, AnnotationFormat::Jsonl);
}

TEST(Settings, FlagBeatsConfigBeatsDefault) {
    testing::TempDir dir;
    testing::write_text(dir / "c.json", R"({"clips": 10, "fusion": 2, "refine": false, "instructions": "action,place"})");
    RawOptions raw;
    raw.config = (dir / "c.json").string();
    raw.clips = 3;
    const auto s = resolve_settings(raw);
    EXPECT_EQ(s.pipeline.clip_count, 3);
    EXPECT_EQ(s.pipeline.fusion, FusionMethod::NormalizeAfterSum);
    EXPECT_FALSE(s.pipeline.refine);
    EXPECT_EQ(s.pipeline.granularities, (std::vector<Granularity>{Granularity::Action, Granularity::Place}));
    EXPECT_EQ(settings_to_json(s)["pipeline"]["clips"], 3);
}

TEST(Settings, RejectsBadValues) {
    testing::TempDir dir;
    testing::write_text(dir / "c.json", R"({"clipz": 10})");
    RawOptions raw;
    raw.config = (dir / "c.json").string();
    EXPECT_THROW(resolve_settings(raw), InvalidArgument);

    RawOptions workers;
    workers.workers = 0;
    EXPECT_THROW(resolve_settings(workers), InvalidArgument);

    RawOptions fusion;
    fusion.fusion = 7;
    EXPECT_THROW(resolve_settings(fusion), InvalidArgument);

    RawOptions http;
    http.provider = "http";
    EXPECT_THROW(resolve_settings(http), InvalidArgument);

    RawOptions provider;
    provider.provider = "carrier-pigeon";
    EXPECT_THROW(resolve_settings(provider), InvalidArgument);
}

TEST(Durations, JsonAndLineFormats) {
    testing::TempDir dir;
    testing::write_text(dir / "d.json", R"({"a": 30.5, "b": 12})");
    testing::write_text(dir / "d.csv", "video_id,duration\na,30.5\nb,12\n");
    testing::write_text(dir / "d.txt", "a 30.5\nb 12\n");
    const std::map<std::string, double> want{{"a", 30.5}, {"b", 12.0}};
    EXPECT_EQ(load_durations(dir / "d.json"), want);
    EXPECT_EQ(load_durations(dir / "d.csv"), want);
    EXPECT_EQ(load_durations(dir / "d.txt"), want);
    testing::write_text(dir / "bad.txt", "a 30\nb -1\n");
    EXPECT_THROW(load_durations(dir / "bad.txt"), FormatError);
}

TEST(Granularities, ListParsing) {
    EXPECT_EQ(parse_granularity_list(" emotion , action,emotion"),
              (std::vector<Granularity>{Granularity::Emotion, Granularity::Action}));
    EXPECT_THROW(parse_granularity_list(" , "), InvalidArgument);
}

} // namespace
} // namespace vtg::cli
