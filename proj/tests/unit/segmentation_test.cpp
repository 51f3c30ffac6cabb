// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "support.hpp"
#include "vtg/errors.hpp"
#include "vtg/segmentation.hpp"

namespace vtg {
namespace {

TEST(SplitEqual, ThirtySecondsIntoFive) {
    const auto clips = split_equal(VideoMeta("v", 30.0), 5);
    ASSERT_EQ(clips.size(), 5u);
    for (std::size_t i = 0; i < clips.size(); ++i) {
        EXPECT_DOUBLE_EQ(clips[i].start(), 6.0 * static_cast<double>(i));
        EXPECT_DOUBLE_EQ(clips[i].length(), 6.0);
    }
}

TEST(SplitEqual, LastClipAbsorbsResidue) {
    const auto clips = split_equal(VideoMeta("v", 10.0), 3);
    ASSERT_EQ(clips.size(), 3u);
    EXPECT_EQ(clips.back().end(), 10.0);
    EXPECT_NEAR(clips[0].length(), 10.0 / 3.0, 1e-12);
    EXPECT_EQ(clips[0].end(), clips[1].start());
    EXPECT_EQ(clips[1].end(), clips[2].start());
}

TEST(SplitEqual, RejectsNonPositiveCount) {
    EXPECT_THROW(split_equal(VideoMeta("v", 10.0), 0), InvalidArgument);
    EXPECT_THROW(split_equal(VideoMeta("v", 10.0), -2), InvalidArgument);
}

TEST(SplitEqual, PartitionProperty) {
    testing::Gen gen(3);
    for (int i = 0; i < 1000; ++i) {
        const VideoMeta video("v", gen.uniform(0.5, 400.0));
        const int m = gen.integer(1, 40);
        const auto clips = split_equal(video, m);
        ASSERT_EQ(clips.size(), static_cast<std::size_t>(m));
        ASSERT_EQ(clips.front().start(), 0.0);
        ASSERT_EQ(clips.back().end(), video.duration);
        double total = 0.0;
        for (std::size_t k = 0; k < clips.size(); ++k) {
            total += clips[k].length();
            if (k > 0) {
                ASSERT_EQ(clips[k - 1].end(), clips[k].start());
            }
        }
        ASSERT_NEAR(total, video.duration, 1e-9);
    }
}

TEST(GenerateWindows, DefaultGridOnThirtySeconds) {
    const auto w = generate_windows(30.0, {10.0, 5.0}, false);
    ASSERT_EQ(w.size(), 5u);
    EXPECT_EQ(w.front(), TimeInterval(0, 10));
    EXPECT_EQ(w.back(), TimeInterval(20, 30));
    EXPECT_EQ(window_count(30.0, {10.0, 5.0}), 5);
}

TEST(GenerateWindows, ShortVideoGivesOneWindow) {
    const auto w = generate_windows(8.0, {10.0, 5.0}, false);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_EQ(w.front(), TimeInterval(0, 8));
}

TEST(GenerateWindows, FlushTailAddsEndWindow) {
    const auto plain = generate_windows(32.0, {10.0, 5.0}, false);
    ASSERT_EQ(plain.size(), 5u);
    EXPECT_EQ(plain.back(), TimeInterval(20, 30));
    const auto flushed = generate_windows(32.0, {10.0, 5.0}, true);
    ASSERT_EQ(flushed.size(), 6u);
    EXPECT_EQ(flushed.back(), TimeInterval(22, 32));
}

TEST(GenerateWindows, FlushTailNoopWhenAligned) {
    EXPECT_EQ(generate_windows(30.0, {10.0, 5.0}, true).size(), 5u);
}

TEST(GenerateWindows, RejectsBadSpec) {
    EXPECT_THROW(generate_windows(30.0, {0.0, 5.0}, false), InvalidArgument);
    EXPECT_THROW(generate_windows(30.0, {10.0, 0.0}, false), InvalidArgument);
    EXPECT_THROW(generate_windows(0.0, {10.0, 5.0}, false), InvalidArgument);
}

TEST(GenerateWindows, WindowsStayInsideVideo) {
    testing::Gen gen(5);
    for (int i = 0; i < 1000; ++i) {
        const double duration = gen.uniform(1.0, 300.0);
        const WindowSpec spec{gen.uniform(1.0, 40.0), gen.uniform(0.5, 20.0)};
        const bool flush = gen.coin();
        const auto windows = generate_windows(duration, spec, flush);
        ASSERT_FALSE(windows.empty());
        for (std::size_t k = 0; k < windows.size(); ++k) {
            ASSERT_LE(windows[k].end(), duration);
            ASSERT_LE(windows[k].length(), spec.wide + 1e-9);
            if (k > 0) {
                ASSERT_LT(windows[k - 1].start(), windows[k].start());
            }
        }
        if (flush) {
            ASSERT_NEAR(windows.back().end(), duration, 1e-9);
        }
    }
}

} // namespace
} // namespace vtg
