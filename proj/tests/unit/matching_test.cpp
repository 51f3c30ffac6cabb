// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "vtg/errors.hpp"
#include "vtg/matching.hpp"
#include "vtg/mock_provider.hpp"

namespace vtg {
namespace {

/// Embedder backed by a fixed text -> vector table.
class TableEmbedder final : public Embedder {
public:
    explicit TableEmbedder(std::map<std::string, EmbeddingVector> table) : table_(std::move(table)) {}
    int calls = 0;

protected:
    EmbeddingVector compute(std::string_view text) override {
        ++calls;
        return table_.at(std::string(text));
    }

private:
    std::map<std::string, EmbeddingVector> table_;
};

TEST(Cosine, HandValues) {
    const std::vector<double> x{1, 0};
    const std::vector<double> y{0, 1};
    const std::vector<double> d{1, 1};
    EXPECT_DOUBLE_EQ(cosine_similarity(x, x), 1.0);
    EXPECT_DOUBLE_EQ(cosine_similarity(x, y), 0.0);
    EXPECT_NEAR(cosine_similarity(d, x), 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(cosine_similarity(d, x), 0.70711, 5e-6);
}

TEST(Cosine, ZeroNormGivesZero) {
    const std::vector<double> z{0, 0};
    const std::vector<double> x{1, 0};
    EXPECT_EQ(cosine_similarity(z, x), 0.0);
    EXPECT_EQ(cosine_similarity(z, z), 0.0);
}

TEST(Cosine, DimensionMismatchThrows) {
    const std::vector<double> a{1, 0};
    const std::vector<double> b{1, 0, 0};
    EXPECT_THROW(cosine_similarity(a, b), InvalidArgument);
}

TEST(ScoreMatrixBuild, IdentityCaptionGivesOne) {
    MockEmbedder embedder;
    const Granularity action[] = {Granularity::Action};
    std::vector<CaptionSet> sets{{TimeInterval(0, 5), {{Granularity::Action, "a person opens a door"}}}};
    const auto m = build_score_matrix(sets, Query("a person opens a door"), embedder, action);
    ASSERT_EQ(m.row_count(), 1u);
    ASSERT_EQ(m.col_count(), 1u);
    EXPECT_NEAR(m.at(0, 0), 1.0, 1e-12);
}

TEST(ScoreMatrixBuild, FixtureEmbeddingsTwoByTwo) {
    TableEmbedder embedder({{"capA", {1, 0}}, {"capB", {0, 1}}, {"query", {1, 0}}});
    const Granularity rows[] = {Granularity::Action, Granularity::Place};
    std::vector<CaptionSet> sets{
        {TimeInterval(0, 5), {{Granularity::Action, "capA"}, {Granularity::Place, "capB"}}},
        {TimeInterval(5, 10), {{Granularity::Action, "capB"}, {Granularity::Place, "capA"}}},
    };
    const auto m = build_score_matrix(sets, Query("query"), embedder, rows);
    EXPECT_EQ(m.values(), (std::vector<double>{1.0, 0.0, 0.0, 1.0}));
}

TEST(ScoreMatrixBuild, RowsFollowFixedOrder) {
    TableEmbedder embedder({{"a", {1, 0}}, {"p", {0, 1}}, {"q", {1, 0}}});
    const Granularity rows[] = {Granularity::Place, Granularity::Action};
    std::vector<CaptionSet> sets{{TimeInterval(0, 5), {{Granularity::Action, "a"}, {Granularity::Place, "p"}}}};
    const auto m = build_score_matrix(sets, Query("q"), embedder, rows);
    ASSERT_EQ(m.rows(), (std::vector<Granularity>{Granularity::Action, Granularity::Place}));
    EXPECT_EQ(m.at(0, 0), 1.0);
    EXPECT_EQ(m.at(1, 0), 0.0);
}

TEST(ScoreMatrixBuild, EmptyClipListGivesFiveByZero) {
    TableEmbedder embedder({});
    const auto m = build_score_matrix({}, Query("q"), embedder);
    EXPECT_EQ(m.row_count(), 5u);
    EXPECT_EQ(m.col_count(), 0u);
    EXPECT_EQ(embedder.calls, 0);
    EXPECT_THROW(fuse(m, FusionMethod::NormalizeAfterColumnMax), InvalidArgument);
}

TEST(ScoreMatrixBuild, MissingGranularityThrows) {
    MockEmbedder embedder;
    std::vector<CaptionSet> sets{{TimeInterval(0, 5), {{Granularity::Action, "x"}}}};
    EXPECT_THROW(build_score_matrix(sets, Query("x"), embedder), InvalidArgument);
}

TEST(ScoreMatrixBuild, UnsortedClipsThrow) {
    MockEmbedder embedder;
    const Granularity action[] = {Granularity::Action};
    std::vector<CaptionSet> sets{{TimeInterval(5, 10), {{Granularity::Action, "x"}}},
                                 {TimeInterval(0, 5), {{Granularity::Action, "x"}}}};
    EXPECT_THROW(build_score_matrix(sets, Query("x"), embedder, action), InvalidArgument);
}

TEST(ScoreMatrixBuild, EmbedderErrorsPropagate) {
    MockEmbedder embedder;
    const Granularity action[] = {Granularity::Action};
    std::vector<CaptionSet> sets{{TimeInterval(0, 5), {{Granularity::Action, "   "}}}};
    EXPECT_THROW(build_score_matrix(sets, Query("x"), embedder, action), InvalidArgument);
}

TEST(NormalizeByMax, ClampsNegativesAndKeepsZeros) {
    const std::vector<double> mixed{-0.5, 0.25, 0.5};
    EXPECT_EQ(normalize_by_max(mixed), (std::vector<double>{0.0, 0.5, 1.0}));
    const std::vector<double> zeros{0.0, 0.0};
    EXPECT_EQ(normalize_by_max(zeros), zeros);
    const std::vector<double> negative{-1.0, -0.2};
    EXPECT_EQ(normalize_by_max(negative), zeros);
}

} // namespace
} // namespace vtg
