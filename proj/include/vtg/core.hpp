// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vtg {

/// Half-open span [start, end) in seconds. Construction validates
/// start >= 0 and end > start; instances are immutable.
class TimeInterval {
public:
    TimeInterval(double start, double end);

    double start() const noexcept { return start_; }
    double end() const noexcept { return end_; }
    double length() const noexcept { return end_ - start_; }

    /// Start/end rounded to whole milliseconds; the identity used by caches.
    std::int64_t start_ms() const noexcept;
    std::int64_t end_ms() const noexcept;

    /// "[6.00, 12.00)"
    std::string to_string() const;

    friend bool operator==(const TimeInterval&, const TimeInterval&) = default;

private:
    double start_;
    double end_;
};

double interval_intersection(const TimeInterval& a, const TimeInterval& b) noexcept;
double temporal_iou(const TimeInterval& a, const TimeInterval& b) noexcept;

/// Rounds seconds to 3 decimal places (cache-key precision).
double round_ms(double seconds) noexcept;

struct VideoMeta {
    VideoMeta(std::string video_id, double duration);

    std::string video_id;
    double duration;
};

/// Natural-language query. Holds at least one non-whitespace character.
class Query {
public:
    explicit Query(std::string text);

    const std::string& text() const noexcept { return text_; }

    friend bool operator==(const Query&, const Query&) = default;

private:
    std::string text_;
};

enum class Granularity { Action, Place, Dressing, Emotion, Interaction };

inline constexpr std::array<Granularity, 5> kAllGranularities = {
    Granularity::Action, Granularity::Place, Granularity::Dressing,
    Granularity::Emotion, Granularity::Interaction};

/// The fixed prompt sent to the video captioner for this granularity.
std::string_view instruction(Granularity g) noexcept;
/// Lower-case keyword: "action", "place", "dressing", "emotion", "interaction".
std::string_view name(Granularity g) noexcept;
Granularity parse_granularity(std::string_view keyword);
/// Inverse of instruction(); nullopt for unknown prompts.
std::optional<Granularity> granularity_from_instruction(std::string_view prompt) noexcept;

struct CaptionSet {
    TimeInterval segment;
    std::map<Granularity, std::string> captions;

    bool covers(Granularity g) const { return captions.contains(g); }
};

using EmbeddingVector = std::vector<double>;

/// Granularity x clip grid of cosine similarities, row-major.
class ScoreMatrix {
public:
    ScoreMatrix(std::vector<Granularity> rows, std::vector<TimeInterval> cols);
    ScoreMatrix(std::vector<Granularity> rows, std::vector<TimeInterval> cols,
                std::vector<double> values);

    std::size_t row_count() const noexcept { return rows_.size(); }
    std::size_t col_count() const noexcept { return cols_.size(); }
    const std::vector<Granularity>& rows() const noexcept { return rows_; }
    const std::vector<TimeInterval>& cols() const noexcept { return cols_; }
    const std::vector<double>& values() const noexcept { return values_; }

    double at(std::size_t row, std::size_t col) const { return values_.at(row * cols_.size() + col); }
    void set(std::size_t row, std::size_t col, double v) { values_.at(row * cols_.size() + col) = v; }

    std::optional<std::size_t> row_of(Granularity g) const noexcept;
    ScoreMatrix scaled(double factor) const;

private:
    std::vector<Granularity> rows_;
    std::vector<TimeInterval> cols_;
    std::vector<double> values_;
};

enum class FusionMethod : int {
    BaselineActionOnly = 1,
    NormalizeAfterSum = 2,
    SumAfterNormalize = 3,
    NormalizeAfterRowMax = 4,
    NormalizeAfterColumnMax = 5,
};

inline constexpr std::array<FusionMethod, 5> kAllFusionMethods = {
    FusionMethod::BaselineActionOnly, FusionMethod::NormalizeAfterSum,
    FusionMethod::SumAfterNormalize, FusionMethod::NormalizeAfterRowMax,
    FusionMethod::NormalizeAfterColumnMax};

FusionMethod fusion_from_id(int id);
inline int fusion_id(FusionMethod m) noexcept { return static_cast<int>(m); }
std::string_view fusion_label(FusionMethod m) noexcept;

struct ClipScores {
    std::vector<TimeInterval> clips;
    std::vector<double> scores;
};

struct MomentPrediction {
    std::string video_id;
    Query query;
    TimeInterval moment;
    TimeInterval coarse_moment;
    FusionMethod fusion_method;
    std::vector<double> per_clip_scores;
    bool refined = false;
};

struct GroundTruthAnnotation {
    std::string video_id;
    TimeInterval interval;
    Query query;
    /// Sidecar duration when the annotation source carries one.
    std::optional<double> duration;

    /// True when the annotated end runs past the declared duration.
    bool exceeds_duration() const noexcept { return duration && interval.end() > *duration; }
};

/// Trims and collapses internal whitespace runs to one space.
std::string normalize_whitespace(std::string_view text);

} // namespace vtg
