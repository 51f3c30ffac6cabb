// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vtg/core.hpp"
#include "vtg/prediction_io.hpp"

namespace vtg {

enum class AnnotationFormat { CharadesSta, Jsonl };

AnnotationFormat parse_annotation_format(std::string_view text);
std::string_view to_string(AnnotationFormat format) noexcept;

struct RejectedLine {
    std::size_t line;
    std::string reason;
    std::string text;
};

struct AnnotationSet {
    std::vector<GroundTruthAnnotation> annotations;
    std::vector<RejectedLine> rejects;
    /// Annotations whose end runs past a sidecar duration (kept, only flagged).
    std::size_t over_duration = 0;
};

/// Charades-STA lines look like "AO8RW 0.0 6.9##a person is putting a book on a shelf.";
/// JSON lines carry {"video_id","start","end","query"} plus an optional
/// "duration". Malformed lines land in `rejects`; more than 10% of them is a
/// FormatError.
AnnotationSet parse_annotations(std::istream& in, AnnotationFormat format, const std::string& source = "<stream>");
AnnotationSet load_annotations(const std::filesystem::path& path, AnnotationFormat format);

struct IntervalPair {
    TimeInterval prediction;
    TimeInterval truth;
};

inline constexpr std::array<double, 3> kRecallThresholds = {0.3, 0.5, 0.7};

/// Fraction of pairs with tIoU >= threshold (inclusive).
double recall_at_iou(std::span<const IntervalPair> pairs, double threshold);
double mean_iou(std::span<const IntervalPair> pairs);

struct QueryResult {
    std::string video_id;
    std::string query;
    TimeInterval prediction;
    TimeInterval truth;
    double iou;
};

struct EvalReport {
    std::size_t n = 0;
    std::map<double, double> recall_at;
    double mean_iou = 0.0;
    /// Sorted by (video id, query, truth interval) so reports do not depend on input order.
    std::vector<QueryResult> per_query;
    std::vector<std::string> unmatched_predictions;
    std::vector<std::string> unmatched_annotations;
    std::vector<std::string> warnings;
};

struct EvaluateOptions {
    bool allow_partial = false;
};

/// Joins predictions to annotations on (video id, whitespace-normalized
/// query). Duplicate keys pair up positionally after sorting both sides by
/// interval. Unmatched entries fail the run unless allow_partial is set.
EvalReport evaluate(std::span<const PredictionRecord> predictions, std::span<const GroundTruthAnnotation> annotations,
                    const EvaluateOptions& options = {});

EvalReport evaluate(const std::filesystem::path& predictions_path, const std::filesystem::path& annotations_path,
                    AnnotationFormat format, const EvaluateOptions& options = {});

/// {"n", "recall": {"0.3", "0.5", "0.7"}, "miou"}
nlohmann::ordered_json report_json(const EvalReport& report);
std::string report_table(const EvalReport& report);
void write_per_query_csv(const EvalReport& report, std::ostream& out);

} // namespace vtg
