// SPDX-License-Identifier: Apache-2.0

#include "vtg/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "vtg/errors.hpp"

namespace vtg {

TimeInterval::TimeInterval(double start, double end) : start_(start), end_(end) {
    if (!std::isfinite(start) || !std::isfinite(end)) {
        throw InvalidArgument("interval bounds must be finite");
    }
    if (start < 0.0) {
        throw InvalidArgument("interval start must be non-negative, got " + std::to_string(start));
    }
    if (!(end > start)) {
        throw InvalidArgument("interval end must exceed start, got [" + std::to_string(start) +
                              ", " + std::to_string(end) + ")");
    }
}

std::int64_t TimeInterval::start_ms() const noexcept { return std::llround(start_ * 1000.0); }
std::int64_t TimeInterval::end_ms() const noexcept { return std::llround(end_ * 1000.0); }

std::string TimeInterval::to_string() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "[%.2f, %.2f)", start_, end_);
    return buf;
}

double interval_intersection(const TimeInterval& a, const TimeInterval& b) noexcept {
    return std::max(0.0, std::min(a.end(), b.end()) - std::max(a.start(), b.start()));
}

double temporal_iou(const TimeInterval& a, const TimeInterval& b) noexcept {
    const double inter = interval_intersection(a, b);
    const double uni = a.length() + b.length() - inter;
    return std::clamp(inter / uni, 0.0, 1.0);
}

double round_ms(double seconds) noexcept { return static_cast<double>(std::llround(seconds * 1000.0)) / 1000.0; }

VideoMeta::VideoMeta(std::string id, double dur) : video_id(std::move(id)), duration(dur) {
    if (video_id.empty()) {
        throw InvalidArgument("video id must be non-empty");
    }
    if (!std::isfinite(duration) || duration <= 0.0) {
        throw InvalidArgument("video '" + video_id + "' duration must be positive");
    }
}

Query::Query(std::string text) : text_(std::move(text)) {
    const bool blank = std::all_of(text_.begin(), text_.end(),
                                   [](unsigned char c) { return std::isspace(c) != 0; });
    if (blank) {
        throw InvalidArgument("query text must contain a non-whitespace character");
    }
}

namespace {

struct GranularityInfo {
    Granularity g;
    std::string_view keyword;
    std::string_view prompt;
};

// Prompts are sent verbatim to the captioner; do not edit.
constexpr std::array<GranularityInfo, 5> kGranularityTable = {{
    {Granularity::Action, "action", "Describe the action of the person in the video."},
    {Granularity::Place, "place", "Where does this video take place?"},
    {Granularity::Dressing, "dressing", "What are the people in the video wearing?"},
    {Granularity::Emotion, "emotion", "illustrate the person's emotion or facial expression."},
    {Granularity::Interaction, "interaction",
     "Describe the interaction of person and other people or things."},
}};

const GranularityInfo& info(Granularity g) noexcept { return kGranularityTable[static_cast<std::size_t>(g)]; }

} // namespace

std::string_view instruction(Granularity g) noexcept { return info(g).prompt; }
std::string_view name(Granularity g) noexcept { return info(g).keyword; }

Granularity parse_granularity(std::string_view keyword) {
    for (const auto& entry : kGranularityTable) {
        if (entry.keyword == keyword) {
            return entry.g;
        }
    }
    throw InvalidArgument("unknown granularity '" + std::string(keyword) + "'");
}

std::optional<Granularity> granularity_from_instruction(std::string_view prompt) noexcept {
    for (const auto& entry : kGranularityTable) {
        if (entry.prompt == prompt) {
            return entry.g;
        }
    }
    return std::nullopt;
}

ScoreMatrix::ScoreMatrix(std::vector<Granularity> rows, std::vector<TimeInterval> cols)
    : rows_(std::move(rows)), cols_(std::move(cols)), values_(rows_.size() * cols_.size(), 0.0) {}

ScoreMatrix::ScoreMatrix(std::vector<Granularity> rows, std::vector<TimeInterval> cols,
                         std::vector<double> values)
    : rows_(std::move(rows)), cols_(std::move(cols)), values_(std::move(values)) {
    if (values_.size() != rows_.size() * cols_.size()) {
        throw InvalidArgument("score matrix value count does not match its shape");
    }
}

std::optional<std::size_t> ScoreMatrix::row_of(Granularity g) const noexcept {
    auto it = std::find(rows_.begin(), rows_.end(), g);
    if (it == rows_.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - rows_.begin());
}

ScoreMatrix ScoreMatrix::scaled(double factor) const {
    auto copy = values_;
    for (auto& v : copy) {
        v *= factor;
    }
    return ScoreMatrix(rows_, cols_, std::move(copy));
}

FusionMethod fusion_from_id(int id) {
    if (id < 1 || id > 5) {
        throw InvalidArgument("fusion method must be 1..5, got " + std::to_string(id));
    }
    return static_cast<FusionMethod>(id);
}

std::string_view fusion_label(FusionMethod m) noexcept {
    switch (m) {
    case FusionMethod::BaselineActionOnly: return "baseline (action only)";
    case FusionMethod::NormalizeAfterSum: return "normalization after summation";
    case FusionMethod::SumAfterNormalize: return "summation after normalization";
    case FusionMethod::NormalizeAfterRowMax: return "normalization after row-wise maximum";
    case FusionMethod::NormalizeAfterColumnMax: return "normalization after column-wise maximum";
    }
    return "unknown";
}

std::string normalize_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(c));
    }
    return out;
}

} // namespace vtg
